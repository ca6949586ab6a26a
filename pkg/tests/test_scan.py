from fractions import Fraction

import numpy as np
import pytest

from opakit.core.text import parse_poly
from opakit.zeros.scan import (
    advisory_diag_radius,
    face_profile,
    newton_polish,
    polydisk_zero_free,
    profile_angles,
    slice_coefficients,
)


class TestAffineCertificate:
    """Degree-one polynomials are decided by |a| against |b| + |c|."""

    def test_zero_free(self):
        verdict = polydisk_zero_free(parse_poly("3-z1-z2"))
        assert verdict.zero_free
        assert verdict.stage == "affine"

    def test_boundary_zero(self):
        verdict = polydisk_zero_free(parse_poly("2-z1-z2"))
        assert verdict.zero_found
        assert np.allclose(verdict.witness, (1, 1))
        assert verdict.residual < 1e-12
        assert "closed" in verdict.detail

    def test_interior_witness(self):
        p = parse_poly("39/1165+23/1165*z1+23/1165*z2")
        verdict = polydisk_zero_free(p)
        assert verdict.zero_found
        w1, w2 = verdict.witness
        assert abs(w1) < 1 and abs(w2) < 1
        assert abs(p(w1, w2)) < 1e-12

    def test_single_variable(self):
        verdict = polydisk_zero_free(parse_poly("1-2*z1", 2))
        assert verdict.zero_found
        assert np.isclose(verdict.witness[0], 0.5)


class TestGridScan:
    """Tests for the anchor and face scans."""

    def test_anchor_zero(self):
        verdict = polydisk_zero_free(parse_poly("1-2*z1*z2"), grid=64)
        assert verdict.zero_found
        assert verdict.stage == "anchor"
        assert verdict.residual < 1e-10

    def test_degenerate_anchor(self):
        """z2 - z1 z2 vanishes on the whole line z2 = 0."""
        verdict = polydisk_zero_free(parse_poly("z2-z1*z2"), grid=64)
        assert verdict.zero_found
        assert verdict.witness == (0j, 0j)

    def test_zero_free_grid(self):
        verdict = polydisk_zero_free(parse_poly("4-z1*z2-z1^2"), grid=64)
        assert verdict.zero_free
        assert verdict.stage == "grid"
        assert min(verdict.face_minima.values()) > 1.5
        assert set(verdict.anchor_minima) == {"z1", "z2"}

    def test_face_zero(self):
        """The Bergman approximant vanishes on z1 + z2 = -1267/648."""
        p = parse_poly("-1267/27-24*z1-24*z2").scale(Fraction(4, 835))
        profile = face_profile(p, 2, grid=512)
        assert profile.global_min < 1
        assert np.isclose(profile.global_min, 1267 / 648 - 1, atol=1e-3)

    def test_advisory_radius(self):
        assert advisory_diag_radius(0, 0) == 1.0
        assert advisory_diag_radius(-1, -1) == 0.5
        assert np.isclose(advisory_diag_radius(-0.85, -0.85), 2**-0.85)
        verdict = polydisk_zero_free(parse_poly("3-z1-z2"), alphas=(-1, -1))
        assert verdict.advisory_radius == 0.5

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            polydisk_zero_free(parse_poly("1-z1*z2*z3"))
        with pytest.raises(ValueError):
            polydisk_zero_free(parse_poly("3-z1-z2"), grid=0)
        with pytest.raises(ValueError):
            polydisk_zero_free(parse_poly("3-z1-z2"), margin=-1)

    def test_to_dict(self):
        data = polydisk_zero_free(parse_poly("2-z1-z2")).to_dict()
        assert data["status"] == "zero_found"
        assert data["witness"] == [[1.0, 0.0], [1.0, 0.0]]


class TestFaceProfile:
    """Tests for facial root-modulus profiles."""

    def test_angles(self):
        t = profile_angles(4)
        assert np.allclose(t, [np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4])
        assert np.allclose(t + t[::-1], 2 * np.pi)
        with pytest.raises(ValueError):
            profile_angles(0)

    def test_slice_coefficients(self):
        p = parse_poly("1-2*z1*z2")
        assert np.allclose(slice_coefficients(p, 1, 0.5), [1, -1])
        assert np.allclose(slice_coefficients(p, 2, 1j), [1, -2j])

    def test_newton_polish(self):
        root = newton_polish(np.array([-2, 0, 1], dtype=complex), 1.4)
        assert np.isclose(root, np.sqrt(2), rtol=1e-14)

    def test_profile_of_linear_slice(self):
        """p(z1, e^{it}) = 4 - e^{it} - z1 has one root of modulus |4 - e^{it}|."""
        profile = face_profile(parse_poly("4-z1-z2"), 2, grid=16)
        assert len(profile.samples) == 16
        assert profile.free == 1
        expected = np.abs(4 - np.exp(1j * profile_angles(16)))
        assert np.allclose([s.min_modulus for s in profile.samples], expected)
        assert np.isclose(profile.global_min, expected.min())
        rows = profile.to_rows()
        assert rows[0][0] == profile.samples[0].t

    def test_constant_slices(self):
        profile = face_profile(parse_poly("3+z2"), 2, grid=8)
        assert profile.global_min == float("inf")
        assert profile.argmin is None
        assert profile.degenerate_count == 0

    def test_invalid_face(self):
        with pytest.raises(ValueError):
            face_profile(parse_poly("3-z1-z2"), 3)
        with pytest.raises(ValueError):
            face_profile(parse_poly("3-z1"), 1)
