#!/usr/bin/env python3

__version__ = "0.1.0"

from . import base  # noqa: E402
from . import combinatorics  # noqa: E402
from . import geometry  # noqa: E402
from . import jets  # noqa: E402

__all__ = ["base", "combinatorics", "geometry", "jets", "__version__"]
