"""Exact values and bounds for proportions of r-regular elements in finite classical groups."""

from .engine import proportion
from .errors import RegPropError
from .tori import Family, GroupSpec

__version__ = "0.1.0"

__all__ = ["Family", "GroupSpec", "RegPropError", "proportion", "__version__"]
