"""
Verify Module
Exhaustive checks of the arc/vertex deletion bounds and of the extremal trace norms
over oriented trees and unicyclic digraphs.

Extremal sweeps never build Digraph objects for the bulk of the family: every chunk of
underlying graphs is expanded into orientation index arrays, turned into one adjacency
stack and evaluated for all alpha values with the batched eigensolver. Chunks have a
fixed size (config.BATCH_SIZE digraphs) and are folded in submission order, so reports
are identical for any number of worker processes.
"""
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice

import numpy as np
import pandas as pd
from tqdm import tqdm

import config
from src.digraph import (Digraph, canonical_digraph, canonical_form, delete_arc, delete_vertex,
                         is_isomorphic, total_degree)
from src.errors import InputError
from src.families import (FamilySpec, ORIENTED_TREES, UNICYCLIC, check_order, consistent_cycle_mask,
                          directed_cycle, directed_path, labeled_trees, labeled_unicyclic_graphs,
                          orientation_arrays)
from src.spectra import adjacency_stack, trace_norm_stack, trace_norms
from src.variation import arc_bound, arc_report_from_norms, vertex_report_from_norms
from spectral_utils.digraph_io import format_digraph
from spectral_utils.helpers import format_arcs, validate_alpha

BOUND_VIOLATION = "bound"
EQUALITY_MISMATCH = "equality_mismatch"
ISOLATED_ARC_EQUALITY = "isolated_arc_equality"

CSV_COLUMNS = ['family', 'n', 'alpha', 'max_trace_norm', 'paper_bound',
               'bound_attained', 'unique_maximizer', 'maximizer_arcs']


def _status(message, quiet=False):
    if not quiet:
        print(message, file=sys.stderr)


@dataclass(frozen=True)
class AlphaGrid:
    """Strictly increasing alpha values in [0, 1)"""
    values: tuple

    def __post_init__(self):
        values = tuple(validate_alpha(a) for a in self.values)
        if not values:
            raise InputError("alpha grid is empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise InputError(f"alpha grid must be strictly increasing, got {list(values)}")
        object.__setattr__(self, 'values', values)

    @classmethod
    def default(cls):
        """config.ALPHA_GRID with 0.5 (the minimum of f) always included"""
        return cls.from_values(list(config.ALPHA_GRID) + [0.5])

    @classmethod
    def from_values(cls, values):
        return cls(tuple(sorted({validate_alpha(a) for a in values})))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Violation:
    """
    One deletion whose outcome disagrees with the bound or its equality characterization
    Args:
        kind: BOUND_VIOLATION, EQUALITY_MISMATCH or ISOLATED_ARC_EQUALITY
        deletion: The DeletionReport kind (arc, leaf_vertex, nonleaf_vertex)
    """
    kind: str
    deletion: str
    digraph: Digraph
    target: tuple
    alpha: float
    slack: float
    equality_predicted: bool
    equality_observed: bool


@dataclass
class ArcCheckResult:
    """
    Outcome of a deletion sweep
    Args:
        violations: Bound failures and predicted/observed equality mismatches
        degenerate: Equality at alpha > 0 on an arc that is a whole weak component
        checked: Number of deletion reports examined
    """
    violations: list = field(default_factory=list)
    degenerate: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self):
        return not self.violations

    def merge(self, other):
        self.violations.extend(other.violations)
        self.degenerate.extend(other.degenerate)
        self.checked += other.checked
        return self


@dataclass(frozen=True)
class ExtremalReport:
    """
    Maximum alpha trace norm over a family at one alpha
    Args:
        paper_bound: (n-1) f(alpha) for trees, n f(alpha) for unicyclic digraphs
        maximizers: One canonical representative per isomorphism class within tol of the maximum
        maximizer_count: Labeled digraphs within tol of the maximum
        checked: Labeled digraphs evaluated
    """
    family: FamilySpec
    alpha: float
    paper_bound: float
    max_trace_norm: float
    maximizers: tuple
    bound_attained: bool
    unique_maximizer: bool
    maximizer_count: int
    checked: int


def classify_report(report):
    """
    How a DeletionReport relates to the bound and its equality characterization
    Returns:
        None when both hold, else BOUND_VIOLATION, EQUALITY_MISMATCH or ISOLATED_ARC_EQUALITY
        (equality at alpha > 0 on an arc that is a whole weak component).
    """
    if not report.bound_respected:
        return BOUND_VIOLATION
    if report.consistent:
        return None
    if report.isolated_arc and report.equality_observed and report.alpha > 0.0:
        return ISOLATED_ARC_EQUALITY
    return EQUALITY_MISMATCH


def _classify(result, D, report):
    result.checked += 1
    kind = classify_report(report)
    if kind is None:
        return
    target_list = result.degenerate if kind == ISOLATED_ARC_EQUALITY else result.violations
    target_list.append(Violation(
        kind=kind,
        deletion=report.kind,
        digraph=D,
        target=report.target,
        alpha=report.alpha,
        slack=report.slack,
        equality_predicted=report.equality_predicted,
        equality_observed=report.equality_observed,
    ))


def _batches(corpus, size):
    iterator = iter(corpus)
    while True:
        batch = list(islice(iterator, size))
        if not batch:
            return
        yield batch


def _resolve(grid, tol, show_progress):
    grid = AlphaGrid.default() if grid is None else grid
    if not isinstance(grid, AlphaGrid):
        grid = AlphaGrid.from_values(grid)
    tol = config.EQUALITY_TOL if tol is None else tol
    show_progress = config.SHOW_PROGRESS if show_progress is None else show_progress
    return grid, tol, show_progress


def verify_arc_deletions(corpus, grid=None, tol=None, show_progress=None):
    """
    Check ||D_alpha||_* <= ||(D - uv)_alpha||_* + f(alpha) and its equality case for every arc
    Args:
        corpus: Iterable of Digraph
        grid: AlphaGrid or list of alphas (AlphaGrid.default())
        tol: Slack tolerance (config.EQUALITY_TOL)
    Returns:
        ArcCheckResult: empty violations iff the bound and the equality characterization held throughout
    """
    grid, tol, show_progress = _resolve(grid, tol, show_progress)
    result = ArcCheckResult()
    for batch in tqdm(_batches(corpus, config.BATCH_SIZE), desc="arc deletions", unit="batch",
                      file=sys.stderr, disable=not show_progress):
        deletions = [(i, u, v, delete_arc(D, u, v))
                     for i, D in enumerate(batch) for u, v in D.arcs_sorted()]
        for alpha in grid:
            before = trace_norms(batch, alpha)
            after = trace_norms([item[3] for item in deletions], alpha)
            for (i, u, v, _), norm_after in zip(deletions, after):
                D = batch[i]
                _classify(result, D, arc_report_from_norms(D, u, v, alpha, before[i], norm_after, tol))
    return result


verify_theorem_2_1 = verify_arc_deletions


def verify_vertex_deletions(corpus, grid=None, tol=None, show_progress=None):
    """
    Leaf and nonleaf vertex deletion bounds with their equality cases, every non-isolated vertex
    Returns:
        ArcCheckResult
    """
    grid, tol, show_progress = _resolve(grid, tol, show_progress)
    result = ArcCheckResult()
    for batch in tqdm(_batches(corpus, config.BATCH_SIZE), desc="vertex deletions", unit="batch",
                      file=sys.stderr, disable=not show_progress):
        deletions = [(i, u, delete_vertex(D, u))
                     for i, D in enumerate(batch) for u in range(D.n) if total_degree(D, u) > 0]
        for alpha in grid:
            before = trace_norms(batch, alpha)
            after = trace_norms([item[2] for item in deletions], alpha)
            for (i, u, _), norm_after in zip(deletions, after):
                D = batch[i]
                _classify(result, D, vertex_report_from_norms(D, u, alpha, before[i], norm_after, tol))
    return result


def _init_worker(settings):
    config.update_settings_from_dict(settings)


def _evaluate_chunk(task):
    """
    Worker: all orientations of a chunk of underlying graphs at every alpha
    Args:
        task: (n, edge_lists, alphas, tol, directed_cycle_only)
    Returns:
        tuple: (digraphs evaluated, [(chunk max, [(value, arcs), ...]) per alpha])
    """
    n, edge_lists, alphas, tol, directed_cycle_only = task
    tails_parts = []
    heads_parts = []
    for edges in edge_lists:
        tails, heads, bits = orientation_arrays(edges)
        if directed_cycle_only:
            keep = consistent_cycle_mask(edges, bits)
            tails, heads = tails[keep], heads[keep]
        tails_parts.append(tails)
        heads_parts.append(heads)
    tails = np.concatenate(tails_parts)
    heads = np.concatenate(heads_parts)
    adjacency = adjacency_stack(n, tails, heads)

    per_alpha = []
    for alpha in alphas:
        norms = trace_norm_stack(adjacency, alpha)
        if norms.size == 0:
            per_alpha.append((-np.inf, []))
            continue
        best = float(norms.max())
        candidates = [
            (float(norms[row]), tuple(sorted(zip(tails[row].tolist(), heads[row].tolist()))))
            for row in np.flatnonzero(norms >= best - tol)
        ]
        per_alpha.append((best, candidates))
    return len(tails), per_alpha


def _fold(state, chunk, tol):
    """Merge one chunk into the running (max, candidates) of every alpha"""
    for i, (best, candidates) in enumerate(chunk):
        current, kept = state[i]
        top = max(current, best)
        kept = [c for c in kept + candidates if c[0] >= top - tol]
        state[i] = (top, kept)


def _maximizer_classes(n, candidates, dedupe):
    """Group labeled maximizers into isomorphism classes; canonical representatives, sorted"""
    representatives = []
    for _, arcs in candidates:
        D = Digraph(n, arcs)
        if not any(is_isomorphic(D, rep) for rep in representatives):
            representatives.append(D)
    classes = sorted((canonical_digraph(D) for D in representatives), key=canonical_form)
    count = len(classes) if dedupe else len(candidates)
    return tuple(classes), count


def _tasks(n, graphs, arcs_per_graph, grid, tol, directed_cycle_only):
    per_chunk = max(1, config.BATCH_SIZE // (2 ** arcs_per_graph))
    graphs = iter(graphs)
    while True:
        chunk = list(islice(graphs, per_chunk))
        if not chunk:
            return
        yield (n, chunk, grid.values, tol, directed_cycle_only)


def _extremal(spec, graphs, graph_count, arcs_per_graph, grid, tol, jobs, show_progress, quiet):
    jobs = config.effective_jobs(jobs)
    per_chunk = max(1, config.BATCH_SIZE // (2 ** arcs_per_graph))
    chunk_count = -(-graph_count // per_chunk)
    _status(f"Evaluating {spec.label} n={spec.n}: {graph_count} underlying graphs, "
            f"{len(grid)} alpha values, {chunk_count} chunks, jobs={jobs}", quiet)

    tasks = _tasks(spec.n, graphs, arcs_per_graph, grid, tol, spec.directed_cycle_only)
    state = [(-np.inf, []) for _ in grid]
    checked = 0
    progress = tqdm(total=chunk_count, desc=f"{spec.label} n={spec.n}", unit="chunk",
                    file=sys.stderr, disable=quiet or not show_progress)
    if jobs == 1:
        for count, chunk in map(_evaluate_chunk, tasks):
            checked += count
            _fold(state, chunk, tol)
            progress.update(1)
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(config.get_current_settings(),)) as executor:
            for count, chunk in executor.map(_evaluate_chunk, tasks):
                checked += count
                _fold(state, chunk, tol)
                progress.update(1)
    progress.close()

    reports = []
    for alpha, (best, candidates) in zip(grid, state):
        bound = arcs_per_graph * arc_bound(alpha)
        maximizers, count = _maximizer_classes(spec.n, candidates, spec.dedupe)
        reports.append(ExtremalReport(
            family=spec,
            alpha=alpha,
            paper_bound=bound,
            max_trace_norm=float(best),
            maximizers=maximizers,
            bound_attained=bool(abs(best - bound) <= tol),
            unique_maximizer=len(maximizers) == 1,
            maximizer_count=count,
            checked=checked,
        ))
    for report in reports:
        problems = extremal_report_violations(report, tol)
        marker = "✗" if problems else "✓"
        _status(f"{marker} {spec.label} n={spec.n} alpha={report.alpha:g}: max {report.max_trace_norm:.12g} "
                f"bound {report.paper_bound:.12g} ({len(report.maximizers)} maximizer class(es))", quiet)
    return reports


def extremal_trees(n, grid=None, tol=None, jobs=None, dedupe=False, force=False,
                   show_progress=None, quiet=False):
    """
    Maximum alpha trace norm over T(n), one ExtremalReport per alpha
    Args:
        n: Order within 1..config.TREE_MAX_ORDER (or force)
        jobs: Worker processes (config.effective_jobs)
        dedupe: Count maximizers per isomorphism class instead of per labeling
    """
    grid, tol, show_progress = _resolve(grid, tol, show_progress)
    check_order(n, 1, config.TREE_MAX_ORDER, force, "oriented trees")
    spec = FamilySpec(ORIENTED_TREES, n, dedupe=dedupe, force=force)
    graph_count = n ** max(n - 2, 0)
    return _extremal(spec, labeled_trees(n), graph_count, n - 1, grid, tol, jobs, show_progress, quiet)


def extremal_unicyclic(n, grid=None, tol=None, jobs=None, dedupe=False, directed_cycle_only=False,
                       force=False, show_progress=None, quiet=False):
    """
    Maximum alpha trace norm over U(n), one ExtremalReport per alpha
    Args:
        directed_cycle_only: Restrict U(n) to digraphs whose cycle is consistently directed
    """
    grid, tol, show_progress = _resolve(grid, tol, show_progress)
    check_order(n, config.UNICYCLIC_MIN_ORDER, config.UNICYCLIC_MAX_ORDER, force, "unicyclic digraphs")
    spec = FamilySpec(UNICYCLIC, n, dedupe=dedupe, directed_cycle_only=directed_cycle_only, force=force)
    graphs = list(labeled_unicyclic_graphs(n))
    return _extremal(spec, graphs, len(graphs), n, grid, tol, jobs, show_progress, quiet)


def extremal_report_violations(report, tol=None):
    """
    Claims of the extremal results that a report contradicts
    Returns:
        list: Human readable violation strings (empty when the report is consistent)
    """
    tol = config.EQUALITY_TOL if tol is None else tol
    n = report.family.n
    problems = []
    if report.max_trace_norm > report.paper_bound + tol:
        problems.append(f"max trace norm {report.max_trace_norm:.12g} exceeds bound {report.paper_bound:.12g}")
    if report.alpha != 0.0 and n >= 3 and report.bound_attained:
        problems.append(f"bound attained at alpha={report.alpha:g} although equality requires alpha=0")
    if report.alpha == 0.0:
        if report.family.family == ORIENTED_TREES:
            expected, name = directed_path(n), f"P_{n}"
        else:
            expected, name = directed_cycle(n), f"C_{n}"
        if not report.bound_attained:
            problems.append(f"bound {report.paper_bound:.12g} not attained at alpha=0")
        elif not (report.unique_maximizer and is_isomorphic(report.maximizers[0], expected)):
            problems.append(f"maximizers at alpha=0 are not exactly the {name} class")
    return problems


def alpha_sweep(D, grid=None):
    """
    Trace norm of D at every grid point
    Returns:
        pd.DataFrame: columns alpha, trace_norm, arc_count_bound
    """
    grid = AlphaGrid.default() if grid is None else grid
    if not isinstance(grid, AlphaGrid):
        grid = AlphaGrid.from_values(grid)
    rows = []
    for alpha in grid:
        rows.append({
            'alpha': alpha,
            'trace_norm': float(trace_norms([D], alpha)[0]),
            'arc_count_bound': D.m * arc_bound(alpha),
        })
    return pd.DataFrame(rows, columns=['alpha', 'trace_norm', 'arc_count_bound'])


def reports_frame(reports):
    """ExtremalReports as a DataFrame with the CSV columns"""
    rows = []
    for report in reports:
        rows.append({
            'family': report.family.label,
            'n': report.family.n,
            'alpha': report.alpha,
            'max_trace_norm': report.max_trace_norm,
            'paper_bound': report.paper_bound,
            'bound_attained': report.bound_attained,
            'unique_maximizer': report.unique_maximizer,
            'maximizer_arcs': "|".join(format_arcs(D.arcs_sorted()) for D in report.maximizers),
        })
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def reports_payload(reports, tol=None):
    """JSON-ready dicts of ExtremalReports; maximizers as digraph text certificates"""
    payload = []
    for report in reports:
        payload.append({
            'family': report.family.label,
            'n': report.family.n,
            'alpha': report.alpha,
            'max_trace_norm': report.max_trace_norm,
            'paper_bound': report.paper_bound,
            'bound_attained': report.bound_attained,
            'unique_maximizer': report.unique_maximizer,
            'maximizer_count': report.maximizer_count,
            'checked': report.checked,
            'maximizers': [format_digraph(D) for D in report.maximizers],
            'violations': extremal_report_violations(report, tol),
        })
    return payload


def reports_json(reports, tol=None):
    """ExtremalReports as JSON text"""
    return json.dumps(reports_payload(reports, tol), indent=2, sort_keys=True)


def violations_frame(items):
    """Violation records as a DataFrame"""
    rows = []
    for item in items:
        rows.append({
            'kind': item.kind,
            'deletion': item.deletion,
            'alpha': item.alpha,
            'target': " ".join(str(x) for x in item.target),
            'slack': item.slack,
            'equality_predicted': item.equality_predicted,
            'equality_observed': item.equality_observed,
            'n': item.digraph.n,
            'arcs': format_arcs(item.digraph.arcs_sorted()),
        })
    return pd.DataFrame(rows, columns=['kind', 'deletion', 'alpha', 'target', 'slack',
                                       'equality_predicted', 'equality_observed', 'n', 'arcs'])
