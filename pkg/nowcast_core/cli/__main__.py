"""Run the ``nowcast`` command with ``python -m nowcast_core.cli``."""

import sys

from nowcast_core.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
