"""
Embedded reference tables, their checksums and the regression runner.
"""

from .loader import FixtureStore, verify_checksums
from .runner import FixtureReport, FixtureRunner

__all__ = ["FixtureStore", "verify_checksums", "FixtureRunner", "FixtureReport"]
