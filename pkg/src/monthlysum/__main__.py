"""Module entry point: python -m monthlysum."""

import sys

from .cli import main

sys.exit(main())
