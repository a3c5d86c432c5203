"""python -m schurlab"""

import sys

from schurlab.cli import main

if __name__ == "__main__":
    sys.exit(main())
