"""
Zeros of two-variable polynomials on the closed bidisk.
"""

from .roots import aberth_ehrlich, univariate_roots
from .scan import FaceProfile, ZeroVerdict, face_profile, polydisk_zero_free

__all__ = ["aberth_ehrlich", "univariate_roots", "FaceProfile", "face_profile", "ZeroVerdict", "polydisk_zero_free"]
