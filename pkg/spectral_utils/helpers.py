"""
Helper utility functions
Number formatting, multiplicity grouping and alpha-list parsing shared by the CLI and reports
"""
import config
from src.errors import DomainError, InputError


def validate_alpha(alpha):
    """
    Check that alpha lies in [0, 1)
    Args:
        alpha: Number (or numeric string)
    Returns:
        float: alpha as a float
    """
    try:
        value = float(alpha)
    except (TypeError, ValueError):
        raise DomainError(f"alpha must be a number, got {alpha!r}")
    if not (0.0 <= value < 1.0):
        raise DomainError(f"alpha must lie in [0, 1), got {value}")
    return value


def parse_alpha_list(text):
    """
    Parse a comma separated alpha list such as "0,0.25,0.5"
    Returns:
        list: Strictly increasing floats in [0, 1), duplicates removed
    """
    values = []
    for token in text.split(','):
        token = token.strip()
        if not token:
            continue
        values.append(validate_alpha(token))
    if not values:
        raise InputError(f"no alpha values in {text!r}")
    return sorted(set(values))


def format_scalar(value, digits=None):
    """
    Scalar with a fixed number of significant digits
    Exact zero prints as "0"; anything else keeps trailing zeros (4.00000000000).
    """
    digits = digits or config.SCALAR_DIGITS
    if value == 0:
        return "0"
    return f"{value:#.{digits}g}"


def format_compact(value, digits=None):
    """Scalar with up to `digits` significant digits and no trailing zeros"""
    digits = digits or config.SCALAR_DIGITS
    if value == 0:
        return "0"
    return f"{value:.{digits}g}"


def group_multiplicities(values, tol=None):
    """
    Group descending values that lie within tol of the first member of their group
    Args:
        values: Iterable of floats sorted descending
        tol: Absolute grouping tolerance (defaults to config.MULTIPLICITY_TOL)
    Returns:
        list: (representative value, multiplicity) pairs in descending order
    """
    tol = config.MULTIPLICITY_TOL if tol is None else tol
    groups = []
    for value in values:
        if groups and abs(groups[-1][0] - value) <= tol:
            groups[-1][1] += 1
        else:
            groups.append([value, 1])
    return [(value, count) for value, count in groups]


def format_multiplicities(groups, tol=None, digits=None):
    """value[multiplicity] list; values below tol print as 0"""
    tol = config.MULTIPLICITY_TOL if tol is None else tol
    parts = []
    for value, count in groups:
        shown = 0.0 if abs(value) <= tol else value
        parts.append(f"{format_compact(shown, digits)}[{count}]")
    return ", ".join(parts)


def format_arcs(arcs):
    """Arc list as 'u-v;u-v' for CSV cells"""
    return ";".join(f"{u}-{v}" for u, v in arcs)
