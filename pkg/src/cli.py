"""
Command Line Interface
Subcommands for single digraphs (trace-norm, spectrum, delete, sweep), exhaustive family
checks (verify), family dumps and the effective settings.
Results go to stdout (or --out); status lines and progress bars go to stderr.
Exit codes: 0 success, 2 input or usage error, 3 numerical error, 4 violation detected.
"""
import argparse
import json
import os
import sys

import pandas as pd

import config
from src.errors import InputError
from src.families import FamilySpec, family_members
from src.spectra import MATRIX_KINDS, matrix_for, singular_values
from src.variation import arc_deletion_report, report_to_dict, vertex_deletion_report
from src.verify import (AlphaGrid, ISOLATED_ARC_EQUALITY, alpha_sweep, classify_report,
                        extremal_report_violations, extremal_trees, extremal_unicyclic,
                        reports_frame, reports_payload, verify_arc_deletions, verify_vertex_deletions,
                        violations_frame)
from spectral_utils.digraph_io import format_bundle, read_bundle, read_digraph, write_digraph
from spectral_utils.helpers import (format_arcs, format_multiplicities, format_scalar,
                                    parse_alpha_list, validate_alpha)

EXIT_OK = 0
EXIT_VIOLATION = 4

FAMILY_NAMES = {
    'path': 'directed_path',
    'cycle': 'directed_cycle',
    'trees': 'oriented_trees',
    'unicyclic': 'unicyclic',
    'symmetric': 'symmetric_of_graph',
}


def _status(args, message):
    if not args.quiet:
        print(message, file=sys.stderr)


def _output_format(args):
    return args.format or config.OUTPUT_FORMAT


def _emit(args, text):
    """Write command output to --out or stdout"""
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise InputError(f"cannot write {args.out}: {e.strerror or e}") from e
        _status(args, f"✓ Output saved to: {args.out}")
    else:
        sys.stdout.write(text)


def _emit_frame(args, frame):
    fmt = _output_format(args)
    if fmt == 'csv':
        _emit(args, frame.to_csv(index=False))
    elif fmt == 'json':
        _emit(args, json.dumps(frame.to_dict(orient='records'), indent=2, sort_keys=True))
    else:
        _emit(args, frame.to_string(index=False) if len(frame) else "(no rows)")


def _grid(args):
    if args.alphas:
        return AlphaGrid.from_values(parse_alpha_list(args.alphas))
    return AlphaGrid.default()


def _read_digraphs(path):
    digraphs = read_bundle(path)
    if not digraphs:
        raise InputError(f"no digraph in {path}")
    return digraphs


def cmd_trace_norm(args):
    """Trace norm of every digraph in FILE"""
    alpha = validate_alpha(args.alpha)
    rows = []
    for index, D in enumerate(_read_digraphs(args.file)):
        spectrum = singular_values(matrix_for(D, args.matrix, alpha))
        rows.append({'index': index, 'n': D.n, 'arcs': D.m, 'matrix': args.matrix,
                     'alpha': alpha, 'trace_norm': spectrum.trace_norm})

    if _output_format(args) == 'table':
        _emit(args, "\n".join(format_scalar(row['trace_norm']) for row in rows))
    else:
        _emit_frame(args, pd.DataFrame(rows))
    return EXIT_OK


def cmd_spectrum(args):
    """Singular values of every digraph in FILE as value[multiplicity]"""
    alpha = validate_alpha(args.alpha)
    lines = []
    payload = []
    for index, D in enumerate(_read_digraphs(args.file)):
        spectrum = singular_values(matrix_for(D, args.matrix, alpha))
        groups = spectrum.multiplicities()
        lines.append(format_multiplicities(groups))
        payload.append({'index': index, 'n': D.n, 'alpha': alpha, 'matrix': args.matrix,
                        'singular_values': list(spectrum.values),
                        'multiplicities': [[value, count] for value, count in groups],
                        'trace_norm': spectrum.trace_norm})

    fmt = _output_format(args)
    if fmt == 'json':
        _emit(args, json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == 'csv':
        rows = [{'index': p['index'], 'position': i, 'singular_value': s}
                for p in payload for i, s in enumerate(p['singular_values'])]
        _emit_frame(args, pd.DataFrame(rows, columns=['index', 'position', 'singular_value']))
    else:
        _emit(args, "\n".join(lines))
    return EXIT_OK


def _format_report(report, tol):
    target = " -> ".join(str(x) for x in report.target)
    slack = 0.0 if abs(report.slack) <= tol else report.slack
    lines = [
        f"deletion: {report.kind} {target}",
        f"alpha: {report.alpha:g}",
        f"norm_before: {format_scalar(report.norm_before)}",
        f"norm_after: {format_scalar(report.norm_after)}",
        f"bound: {format_scalar(report.bound)}",
        f"slack: {format_scalar(slack)}",
        f"equality predicted: {'yes' if report.equality_predicted else 'no'}",
        f"equality observed: {'yes' if report.equality_observed else 'no'}",
    ]
    if report.equality_case:
        lines.append(f"equality case: {report.equality_case}")
    if report.isolated_arc:
        lines.append("isolated arc: yes")
    return "\n".join(lines)


def cmd_delete(args):
    """Arc or vertex deletion report for one digraph"""
    D = read_digraph(args.file)
    tol = config.EQUALITY_TOL if args.tol is None else args.tol
    if args.arc:
        report = arc_deletion_report(D, args.arc[0], args.arc[1], args.alpha, tol)
    else:
        report = vertex_deletion_report(D, args.vertex, args.alpha, tol)

    fmt = _output_format(args)
    if fmt == 'json':
        _emit(args, json.dumps(report_to_dict(report), indent=2, sort_keys=True))
    elif fmt == 'csv':
        _emit_frame(args, pd.DataFrame([report_to_dict(report)]))
    else:
        _emit(args, _format_report(report, tol))

    kind = classify_report(report)
    if kind == ISOLATED_ARC_EQUALITY:
        _status(args, "⚠ Equality at alpha > 0: the deleted arc is a whole weak component")
    elif kind is not None:
        print(f"✗ Violation ({kind}) for deletion {report.target} at alpha={report.alpha:g}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sweep(args):
    """Trace norm of one digraph over an alpha grid"""
    D = read_digraph(args.file)
    _emit_frame(args, alpha_sweep(D, _grid(args)))
    return EXIT_OK


def _orders(args):
    if args.n is not None:
        return [args.n]
    if args.family == 'trees':
        orders = list(config.DEFAULT_TREE_ORDERS)
        extra = config.LONG_RUNNING_TREE_ORDERS
    else:
        orders = list(config.DEFAULT_UNICYCLIC_ORDERS)
        extra = config.LONG_RUNNING_UNICYCLIC_ORDERS
    if args.long_running:
        orders += [n for n in extra if n not in orders]
    return orders


def _log_violations(items, label):
    for item in items[:20]:
        print(f"✗ {label} {item.kind}: {item.deletion} {item.target} alpha={item.alpha:g} "
              f"slack={item.slack:.3e} digraph n={item.digraph.n} arcs={format_arcs(item.digraph.arcs_sorted())}",
              file=sys.stderr)
    if len(items) > 20:
        print(f"✗ ... {len(items) - 20} more", file=sys.stderr)


def cmd_verify(args):
    """Exhaustive checks over T(n) or U(n)"""
    grid = _grid(args)
    tol = config.EQUALITY_TOL if args.tol is None else args.tol
    show_progress = config.SHOW_PROGRESS and not args.quiet
    checks = ('extremal', 'arcs', 'vertices') if args.check == 'all' else (args.check,)
    family = FAMILY_NAMES[args.family]
    if args.directed_cycles and args.family != 'unicyclic':
        raise InputError("--directed-cycles only applies to unicyclic digraphs")

    _status(args, "=" * 60)
    _status(args, f"Verifying {family} over alpha = {', '.join(f'{a:g}' for a in grid)}")
    _status(args, "=" * 60)

    reports = []
    violations = []
    degenerate = []
    failed = False
    for n in _orders(args):
        if 'extremal' in checks:
            if args.family == 'trees':
                batch = extremal_trees(n, grid, tol, jobs=args.jobs, dedupe=args.dedupe, force=args.force,
                                       show_progress=show_progress, quiet=args.quiet)
                if n == 2:
                    _status(args, "⚠ n=2: the single arc meets the bound at every alpha; "
                                  "the alpha=0-only equality clause is not checked here")
            else:
                batch = extremal_unicyclic(n, grid, tol, jobs=args.jobs, dedupe=args.dedupe,
                                           directed_cycle_only=args.directed_cycles, force=args.force,
                                           show_progress=show_progress, quiet=args.quiet)
            for report in batch:
                for problem in extremal_report_violations(report, tol):
                    failed = True
                    print(f"✗ {report.family.label} n={n} alpha={report.alpha:g}: {problem}", file=sys.stderr)
            reports.extend(batch)

        spec = FamilySpec(family, n, dedupe=args.dedupe, directed_cycle_only=args.directed_cycles,
                          force=args.force)
        for check, runner in (('arcs', verify_arc_deletions), ('vertices', verify_vertex_deletions)):
            if check not in checks:
                continue
            result = runner(family_members(spec), grid, tol, show_progress=show_progress)
            _log_violations(result.violations, f"{spec.label} n={n}")
            violations.extend(result.violations)
            degenerate.extend(result.degenerate)
            marker = "✗" if result.violations else "✓"
            _status(args, f"{marker} {spec.label} n={n} {check}: {result.checked} deletions checked, "
                          f"{len(result.violations)} violations, {len(result.degenerate)} degenerate")

    fmt = _output_format(args)
    if fmt == 'json':
        _emit(args, json.dumps({
            'reports': reports_payload(reports, tol),
            'violations': violations_frame(violations).to_dict(orient='records'),
            'degenerate': len(degenerate),
        }, indent=2, sort_keys=True))
    elif reports:
        _emit_frame(args, reports_frame(reports))
    else:
        _emit_frame(args, violations_frame(violations))

    if failed or violations:
        _status(args, "\n✗ Violations detected")
        return EXIT_VIOLATION
    _status(args, "\n✓ All checks passed")
    return EXIT_OK


def cmd_families_dump(args):
    """Write every member of a family in the digraph text format"""
    spec = FamilySpec(FAMILY_NAMES[args.family], args.n, dedupe=args.dedupe,
                      directed_cycle_only=args.directed_cycles, force=args.force)
    members = family_members(spec)
    if args.split:
        if not args.out:
            raise InputError("--split needs --out DIRECTORY")
        try:
            os.makedirs(args.out, exist_ok=True)
        except OSError as e:
            raise InputError(f"cannot create directory {args.out}: {e.strerror or e}") from e
        count = 0
        for count, D in enumerate(members, start=1):
            write_digraph(D, os.path.join(args.out, f"{spec.label}_{spec.n}_{count:06d}.txt"))
        _status(args, f"✓ Wrote {count} digraphs to {args.out}")
        return EXIT_OK

    digraphs = list(members)
    _emit(args, format_bundle(digraphs))
    _status(args, f"✓ {len(digraphs)} digraphs in {spec.label} n={spec.n}")
    return EXIT_OK


def cmd_settings(args):
    """Effective configuration as JSON"""
    _emit(args, json.dumps(config.get_current_settings(), indent=2, sort_keys=True))
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="equality / slack tolerance (default from settings)")
    common.add_argument("--format", choices=['table', 'csv', 'json'], default=None,
                        help="output format (default from settings)")
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--quiet", action="store_true", help="suppress status lines and progress bars")

    parser = argparse.ArgumentParser(prog="trace-norm-toolkit",
                                     description="alpha trace norm of digraphs and its variation bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace-norm", parents=[common], help="trace norm of each digraph in FILE")
    p.add_argument("file")
    p.add_argument("--alpha", default=0.0)
    p.add_argument("--matrix", choices=MATRIX_KINDS, default='alpha')
    p.set_defaults(handler=cmd_trace_norm)

    p = sub.add_parser("spectrum", parents=[common], help="singular values with multiplicities")
    p.add_argument("file")
    p.add_argument("--alpha", default=0.0)
    p.add_argument("--matrix", choices=MATRIX_KINDS, default='alpha')
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("delete", parents=[common], help="arc or vertex deletion report")
    p.add_argument("file")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--arc", nargs=2, type=int, metavar=("U", "V"))
    target.add_argument("--vertex", type=int, metavar="U")
    p.add_argument("--alpha", default=0.0)
    p.set_defaults(handler=cmd_delete)

    p = sub.add_parser("sweep", parents=[common], help="trace norm over an alpha grid")
    p.add_argument("file")
    p.add_argument("--alphas", default=None, help="comma separated alphas (default grid)")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="exhaustive checks over T(n) or U(n)")
    p.add_argument("family", choices=['trees', 'unicyclic'])
    p.add_argument("n", type=int, nargs='?', default=None,
                   help="order (default: the configured default orders)")
    p.add_argument("--check", choices=['extremal', 'arcs', 'vertices', 'all'], default='extremal')
    p.add_argument("--alphas", default=None, help="comma separated alphas (default grid)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (0 = all cores)")
    p.add_argument("--force", action="store_true", help="allow orders beyond the enumeration guard")
    p.add_argument("--dedupe", action="store_true", help="one digraph per isomorphism class")
    p.add_argument("--directed-cycles", action="store_true",
                   help="unicyclic digraphs whose cycle is consistently directed only")
    p.add_argument("--long-running", action="store_true",
                   help="include the long-running orders when no n is given")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("families", help="digraph family generators")
    family_sub = p.add_subparsers(dest="action", required=True)
    d = family_sub.add_parser("dump", parents=[common], help="write a family in the digraph text format")
    d.add_argument("family", choices=sorted(FAMILY_NAMES))
    d.add_argument("n", type=int)
    d.add_argument("--split", action="store_true", help="one file per digraph inside --out")
    d.add_argument("--dedupe", action="store_true")
    d.add_argument("--force", action="store_true")
    d.add_argument("--directed-cycles", action="store_true")
    d.set_defaults(handler=cmd_families_dump)

    p = sub.add_parser("settings", parents=[common], help="print the effective settings")
    p.set_defaults(handler=cmd_settings)
    return parser


def run(argv=None):
    """
    Parse arguments and run one subcommand
    Returns:
        int: Process exit code
    Raises:
        TraceNormError: propagated for the entry point to report
    """
    args = build_parser().parse_args(argv)
    return args.handler(args)
