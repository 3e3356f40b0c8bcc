"""Allow `python -m scimap`."""

import sys

from .cli import main

sys.exit(main())
