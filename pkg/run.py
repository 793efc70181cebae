"""Script to run DCD-RLS experiments from a source checkout.

Equivalent to ``python -m dcdrls.experiment``; see ``python run.py --help``.

"""

import sys

from dcdrls.experiment.__main__ import main


if __name__ == "__main__":
    sys.exit(main())
