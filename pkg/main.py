"""
Main Entry Point for the alpha Trace Norm Toolkit
"""
import os
import sys

# Add the project root to the path when run from another directory
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import config
from src.cli import run
from src.errors import TraceNormError


def main(argv=None):
    """
    Load settings, run one command and turn toolkit errors into exit codes
    Returns:
        int: Process exit code
    """
    # Settings first so every command sees the overridden tolerances and grids
    config.load_settings()

    try:
        return run(argv)
    except TraceNormError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print("\n\nInterrupted by user", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
