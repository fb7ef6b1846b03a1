"""
Configuration file for the alpha trace norm toolkit
"""
import os
import json
import sys


def get_base_dir():
    """Directory holding config.py and settings.json"""
    return os.path.dirname(os.path.abspath(__file__))

BASE_DIR = get_base_dir()

def get_resource_path(relative_path):
    """Get absolute path to a resource next to the project"""
    if os.path.isabs(relative_path):
        return relative_path
    return os.path.join(BASE_DIR, relative_path)

# Numerical Configuration
EIGEN_TOL = 1e-12  # Jacobi convergence: off-diagonal norm < EIGEN_TOL * max(1, ||M||_F)
MAX_SWEEPS = 100  # Cyclic Jacobi sweeps before giving up with a numerical error
SYMMETRY_TOL = 1e-12  # Absolute entry-wise tolerance for "symmetric" eigensolver input
PSD_CLAMP = 1e-10  # Gram eigenvalues below -PSD_CLAMP * ||M||_F^2 raise a numerical error
EQUALITY_TOL = 1e-9  # Slack, bound and maximizer comparisons
MULTIPLICITY_TOL = 1e-8  # Singular values closer than this are reported as one value[multiplicity]

# Alpha Grid (default grid for sweeps; 0.5 is always added)
ALPHA_GRID = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]

# Family Enumeration Guards
TREE_MAX_ORDER = 8  # enumerate_oriented_trees accepts 1 <= n <= TREE_MAX_ORDER without --force
UNICYCLIC_MIN_ORDER = 3
UNICYCLIC_MAX_ORDER = 7  # enumerate_unicyclic accepts 3 <= n <= UNICYCLIC_MAX_ORDER without --force
DEFAULT_TREE_ORDERS = [2, 3, 4, 5, 6, 7]  # Exhaustive orders checked by default
DEFAULT_UNICYCLIC_ORDERS = [3, 4, 5, 6]
LONG_RUNNING_TREE_ORDERS = [8]  # Only with --long-running
LONG_RUNNING_UNICYCLIC_ORDERS = [7]

# Batch Processing Configuration
BATCH_SIZE = 2048  # Digraphs per evaluation chunk - fixed so results never depend on the number of jobs

# Multi-processing Configuration
# 0 = use all available cores for enumeration sweeps
_jobs_env = os.getenv('TRACE_NORM_JOBS', "")
JOBS = int(_jobs_env) if _jobs_env.strip().isdigit() else 0

# Output Configuration
SCALAR_DIGITS = 12  # Significant digits for printed scalars
OUTPUT_FORMAT = "table"  # table, csv or json
SHOW_PROGRESS = True  # tqdm progress bars on stderr during sweeps

# Settings Configuration File
SETTINGS_FILE = "settings.json"  # Relative to BASE_DIR

def _as_bool(value):
    if isinstance(value, str):
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    return bool(value)


# settings.json key -> (config attribute, type coercion)
_SETTINGS_KEYS = {
    'eigen_tol': ('EIGEN_TOL', float),
    'max_sweeps': ('MAX_SWEEPS', int),
    'symmetry_tol': ('SYMMETRY_TOL', float),
    'psd_clamp': ('PSD_CLAMP', float),
    'equality_tol': ('EQUALITY_TOL', float),
    'multiplicity_tol': ('MULTIPLICITY_TOL', float),
    'alpha_grid': ('ALPHA_GRID', lambda values: [float(v) for v in values]),
    'tree_max_order': ('TREE_MAX_ORDER', int),
    'unicyclic_min_order': ('UNICYCLIC_MIN_ORDER', int),
    'unicyclic_max_order': ('UNICYCLIC_MAX_ORDER', int),
    'default_tree_orders': ('DEFAULT_TREE_ORDERS', lambda values: [int(v) for v in values]),
    'default_unicyclic_orders': ('DEFAULT_UNICYCLIC_ORDERS', lambda values: [int(v) for v in values]),
    'long_running_tree_orders': ('LONG_RUNNING_TREE_ORDERS', lambda values: [int(v) for v in values]),
    'long_running_unicyclic_orders': ('LONG_RUNNING_UNICYCLIC_ORDERS', lambda values: [int(v) for v in values]),
    'batch_size': ('BATCH_SIZE', int),
    'jobs': ('JOBS', int),
    'scalar_digits': ('SCALAR_DIGITS', int),
    'output_format': ('OUTPUT_FORMAT', str),
    'show_progress': ('SHOW_PROGRESS', _as_bool),
}


def _validate():
    """Clamp settings that would break the numerics back to safe values"""
    global BATCH_SIZE, JOBS, MAX_SWEEPS, OUTPUT_FORMAT
    if BATCH_SIZE < 1:
        print("⚠ Warning: batch_size must be >= 1. Setting to 1.", file=sys.stderr)
        BATCH_SIZE = 1
    if JOBS < 0:
        print("⚠ Warning: jobs must be >= 0. Using all cores.", file=sys.stderr)
        JOBS = 0
    if MAX_SWEEPS < 1:
        print("⚠ Warning: max_sweeps must be >= 1. Setting to 100.", file=sys.stderr)
        MAX_SWEEPS = 100
    if OUTPUT_FORMAT not in ('table', 'csv', 'json'):
        print(f"⚠ Warning: unknown output_format '{OUTPUT_FORMAT}'. Using 'table'.", file=sys.stderr)
        OUTPUT_FORMAT = 'table'


def update_settings_from_dict(settings_dict):
    """
    Update config values from a dictionary
    Args:
        settings_dict: Mapping of settings.json keys to values; unknown keys are ignored
    Returns:
        list: Keys that were applied
    """
    applied = []
    module = sys.modules[__name__]
    for key, value in settings_dict.items():
        if key not in _SETTINGS_KEYS:
            continue
        attribute, coerce = _SETTINGS_KEYS[key]
        try:
            setattr(module, attribute, coerce(value))
            applied.append(key)
        except (TypeError, ValueError) as e:
            print(f"⚠ Warning: ignoring setting '{key}': {e}", file=sys.stderr)
    _validate()
    return applied


def load_settings(path=None):
    """
    Load settings from settings.json if it exists
    Args:
        path: Optional explicit settings file (defaults to SETTINGS_FILE next to the project)
    Returns:
        bool: True if a settings file was read
    """
    settings_path = get_resource_path(path or SETTINGS_FILE)
    if not os.path.exists(settings_path):
        return False
    try:
        with open(settings_path, 'r') as f:
            settings = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        print(f"⚠ Warning: Could not load settings from {settings_path}: {e}", file=sys.stderr)
        return False
    if not isinstance(settings, dict):
        print(f"⚠ Warning: {settings_path} does not contain a JSON object", file=sys.stderr)
        return False
    update_settings_from_dict(settings)
    return True


def get_current_settings():
    """Get current settings as a dictionary keyed like settings.json"""
    module = sys.modules[__name__]
    return {key: getattr(module, attribute) for key, (attribute, _) in _SETTINGS_KEYS.items()}


def save_settings_to_file(settings_dict, path=None):
    """Save settings dictionary to settings.json"""
    settings_path = get_resource_path(path or SETTINGS_FILE)
    try:
        with open(settings_path, 'w') as f:
            json.dump(settings_dict, f, indent=4)
        return True
    except OSError as e:
        print(f"✗ Error saving settings: {e}", file=sys.stderr)
        return False


def effective_jobs(requested=None):
    """Resolve a --jobs value (None/0 = JOBS setting, which itself 0 = all cores)"""
    jobs = requested if requested else JOBS
    if not jobs:
        jobs = os.cpu_count() or 1
    return max(1, int(jobs))
