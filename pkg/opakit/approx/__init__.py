"""
Optimal polynomial approximants and the objects built from them.
"""

from .closed_forms import (
    DiagonalTarget,
    WeightSequence,
    ball_distance_rates,
    ball_rotation_opa,
    cyclicity_classify,
    diag_embed_opa,
    fms_distance,
    fms_opa,
)
from .opa import OpaResult, coefficient_sign_history, constant_opa_check, opa, opa_sequence, weak_inner_test
from .ortho import OrthoFamily, diagonal_structure, opa_differences, verify_recovery, weighted_gram_schmidt
from .shapiro import ShapiroShieldsFunction, shapiro_shields, ss_verify

__all__ = [
    "OpaResult",
    "opa",
    "opa_sequence",
    "weak_inner_test",
    "constant_opa_check",
    "coefficient_sign_history",
    "OrthoFamily",
    "weighted_gram_schmidt",
    "opa_differences",
    "verify_recovery",
    "diagonal_structure",
    "WeightSequence",
    "DiagonalTarget",
    "fms_opa",
    "fms_distance",
    "diag_embed_opa",
    "cyclicity_classify",
    "ball_rotation_opa",
    "ball_distance_rates",
    "ShapiroShieldsFunction",
    "shapiro_shields",
    "ss_verify",
]
