"""
Two-dimensional recursive filters and their stabilization.
"""

from .recursive import (
    DataArray,
    FilterSpec,
    impulse_response,
    run_recursion,
    series_division,
    stability_check,
    stabilize,
)

__all__ = [
    "FilterSpec",
    "DataArray",
    "run_recursion",
    "impulse_response",
    "stability_check",
    "stabilize",
    "series_division",
]
