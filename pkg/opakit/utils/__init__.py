"""
Utils module for opakit.
"""

from .serialization import ReportSaver, to_jsonable
from .utils import make_rng, random_rational_poly

__all__ = ["ReportSaver", "to_jsonable", "make_rng", "random_rational_poly"]
