"""
Entry point for ``python -m lpvec``
"""

import sys

from lpvec.cli import main

if __name__ == "__main__":
    sys.exit(main())
