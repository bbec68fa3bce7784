"""Exact computable physical models."""

from ._cpm import *  # noqa: F401,F403
from ._cpm import __doc__  # noqa: F401
