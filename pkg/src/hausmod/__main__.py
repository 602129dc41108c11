"""Entry point for ``python -m hausmod``."""

import sys

from .cli import main

sys.exit(main())
