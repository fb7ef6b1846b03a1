"""
Variation Module
How much the alpha trace norm can drop when an arc, a leaf or a nonleaf vertex is deleted,
with the bound f(alpha) = sqrt(2 alpha^2 - 2 alpha + 1) per arc and the equality characterizations.
Every report carries both the predicted and the observed equality so callers can detect
any disagreement instead of trusting the characterization.
"""
import math
from dataclasses import asdict, dataclass

import config
from src.digraph import (delete_arc, delete_vertex, in_neighbours, is_leaf,
                         is_nonleaf, out_neighbours, total_degree)
from src.errors import InputError
from src.spectra import trace_norm
from spectral_utils.helpers import validate_alpha

ARC = "arc"
LEAF_VERTEX = "leaf_vertex"
NONLEAF_VERTEX = "nonleaf_vertex"


@dataclass(frozen=True)
class ArcBound:
    """Per-arc bound f(alpha); in (sqrt(2)/2, 1], smallest at alpha = 1/2"""
    alpha: float
    value: float

    @classmethod
    def for_alpha(cls, alpha):
        alpha = validate_alpha(alpha)
        return cls(alpha=alpha, value=arc_bound(alpha))


@dataclass(frozen=True)
class DeletionReport:
    """
    Before/after trace norms for one deletion
    Args:
        kind: ARC, LEAF_VERTEX or NONLEAF_VERTEX
        target: (u, v) for an arc, (u,) for a vertex
        neighbours: The vertices the equality characterization looks at
        bound: f(alpha) for arcs and leaves, d(u) * f(alpha) for a nonleaf
        slack: norm_after + bound - norm_before (never below -tol)
        equality_case: Which leaf disjunct fired ("out_arc" / "in_arc"), else None
        isolated_arc: The deleted arc (or the leaf's arc) is a whole weak component
    """
    kind: str
    target: tuple
    alpha: float
    norm_before: float
    norm_after: float
    bound: float
    slack: float
    equality_predicted: bool
    equality_observed: bool
    tol: float
    neighbours: tuple = ()
    equality_case: str = None
    isolated_arc: bool = False

    @property
    def bound_respected(self):
        return self.slack >= -self.tol

    @property
    def consistent(self):
        """Predicted and observed equality agree"""
        return self.equality_predicted == self.equality_observed


def arc_bound(alpha):
    """f(alpha) = sqrt(2 alpha^2 - 2 alpha + 1)"""
    alpha = validate_alpha(alpha)
    return math.sqrt(2.0 * alpha * alpha - 2.0 * alpha + 1.0)


def arc_count_bound(D, alpha):
    """|arcs| * f(alpha): removing the arcs one at a time bounds the trace norm of D"""
    return D.m * arc_bound(alpha)


def _is_isolated_arc(out_deg, in_deg, u, v):
    return out_deg[u] == 1 and in_deg[u] == 0 and in_deg[v] == 1 and out_deg[v] == 0


def arc_equality_predicted(alpha, out_deg_u, in_deg_v):
    """Equality iff alpha = 0 and d+(u) = d-(v) = 1"""
    return alpha == 0.0 and out_deg_u == 1 and in_deg_v == 1


def arc_report_from_norms(D, u, v, alpha, norm_before, norm_after, tol=None):
    """
    Assemble an arc DeletionReport from already computed trace norms
    Args:
        D: Digraph containing the arc (u, v)
        norm_before: trace norm of D
        norm_after: trace norm of D - uv
    """
    tol = config.EQUALITY_TOL if tol is None else tol
    alpha = validate_alpha(alpha)
    bound = arc_bound(alpha)
    slack = norm_after + bound - norm_before
    return DeletionReport(
        kind=ARC,
        target=(u, v),
        alpha=alpha,
        norm_before=float(norm_before),
        norm_after=float(norm_after),
        bound=bound,
        slack=float(slack),
        equality_predicted=arc_equality_predicted(alpha, D._out[u], D._in[v]),
        equality_observed=bool(slack <= tol),
        tol=tol,
        neighbours=(u, v),
        isolated_arc=_is_isolated_arc(D._out, D._in, u, v),
    )


def arc_deletion_report(D, u, v, alpha, tol=None):
    """
    ||D_alpha||_* <= ||(D - uv)_alpha||_* + f(alpha)
    Raises:
        InputError: if (u, v) is not an arc of D
    """
    if (u, v) not in D.arcs:
        raise InputError(f"arc ({u}, {v}) is not in the digraph")
    before = trace_norm(D, alpha)
    after = trace_norm(delete_arc(D, u, v), alpha)
    return arc_report_from_norms(D, u, v, alpha, before, after, tol)


def all_arc_reports(D, alpha, tol=None):
    """One arc report per arc, arcs in lexicographic order"""
    arcs = D.arcs_sorted()
    if not arcs:
        return []
    before = trace_norm(D, alpha)
    return [
        arc_report_from_norms(D, u, v, alpha, before, trace_norm(delete_arc(D, u, v), alpha), tol)
        for u, v in arcs
    ]


def _leaf_report(D, u, alpha, norm_before, norm_after, tol):
    if D._out[u] == 1:
        v = out_neighbours(D, u)[0]
        predicted = alpha == 0.0 and D._in[v] == 1
        case = "out_arc"
        isolated = _is_isolated_arc(D._out, D._in, u, v)
    else:
        v = in_neighbours(D, u)[0]
        predicted = alpha == 0.0 and D._out[v] == 1
        case = "in_arc"
        isolated = _is_isolated_arc(D._out, D._in, v, u)

    bound = arc_bound(alpha)
    slack = norm_after + bound - norm_before
    return DeletionReport(
        kind=LEAF_VERTEX,
        target=(u,),
        alpha=alpha,
        norm_before=float(norm_before),
        norm_after=float(norm_after),
        bound=bound,
        slack=float(slack),
        equality_predicted=predicted,
        equality_observed=bool(slack <= tol),
        tol=tol,
        neighbours=(v,),
        equality_case=case if predicted else None,
        isolated_arc=isolated,
    )


def _nonleaf_report(D, u, alpha, norm_before, norm_after, tol):
    predicted = False
    neighbours = ()
    if D._out[u] == 1 and D._in[u] == 1:
        w1 = in_neighbours(D, u)[0]
        w2 = out_neighbours(D, u)[0]
        neighbours = (w1, w2)
        predicted = alpha == 0.0 and D._out[w1] == 1 and D._in[w2] == 1

    bound = total_degree(D, u) * arc_bound(alpha)
    slack = norm_after + bound - norm_before
    return DeletionReport(
        kind=NONLEAF_VERTEX,
        target=(u,),
        alpha=alpha,
        norm_before=float(norm_before),
        norm_after=float(norm_after),
        bound=bound,
        slack=float(slack),
        equality_predicted=predicted,
        equality_observed=bool(slack <= tol),
        tol=tol,
        neighbours=neighbours,
    )


def vertex_report_from_norms(D, u, alpha, norm_before, norm_after, tol=None):
    """
    Leaf or nonleaf DeletionReport from already computed trace norms of D and D - u
    Raises:
        InputError: if u is isolated
    """
    tol = config.EQUALITY_TOL if tol is None else tol
    alpha = validate_alpha(alpha)
    if is_leaf(D, u):
        return _leaf_report(D, u, alpha, norm_before, norm_after, tol)
    if is_nonleaf(D, u):
        return _nonleaf_report(D, u, alpha, norm_before, norm_after, tol)
    raise InputError(f"vertex {u} is isolated; deleting it does not change the trace norm")


def leaf_deletion_report(D, u, alpha, tol=None):
    """
    Delete a leaf u whose unique neighbour is v
    Equality iff alpha = 0 and either d+(u) = d-(v) = 1 (arc u->v) or d-(u) = d+(v) = 1 (arc v->u).
    """
    if not is_leaf(D, u):
        raise InputError(f"vertex {u} is not a leaf (total degree {total_degree(D, u)})")
    before = trace_norm(D, alpha)
    after = trace_norm(delete_vertex(D, u), alpha)
    return vertex_report_from_norms(D, u, alpha, before, after, tol)


def nonleaf_deletion_report(D, u, alpha, tol=None):
    """
    Delete a nonleaf u of total degree d(u)
    ||D_alpha||_* <= ||(D - u)_alpha||_* + d(u) f(alpha), with equality iff alpha = 0,
    d+(u) = d-(u) = 1, d+(w1) = 1 and d-(w2) = 1 for the in-neighbour w1 and out-neighbour w2.
    Any other degree pattern predicts strict inequality.
    """
    if not is_nonleaf(D, u):
        raise InputError(f"vertex {u} is not a nonleaf (total degree {total_degree(D, u)})")
    before = trace_norm(D, alpha)
    after = trace_norm(delete_vertex(D, u), alpha)
    return vertex_report_from_norms(D, u, alpha, before, after, tol)


def vertex_deletion_report(D, u, alpha, tol=None):
    """Leaf or nonleaf report depending on the degree of u"""
    if total_degree(D, u) == 0:
        raise InputError(f"vertex {u} is isolated; deleting it does not change the trace norm")
    before = trace_norm(D, alpha)
    after = trace_norm(delete_vertex(D, u), alpha)
    return vertex_report_from_norms(D, u, alpha, before, after, tol)


def report_to_dict(report):
    """JSON-ready dict of a DeletionReport"""
    data = asdict(report)
    data['target'] = list(report.target)
    data['neighbours'] = list(report.neighbours)
    data['bound_respected'] = report.bound_respected
    data['consistent'] = report.consistent
    return data
