"""Entry point for ``python -m conley_surf``."""

import sys

from conley_surf.cli import main

if __name__ == "__main__":
    sys.exit(main())
