import math
from fractions import Fraction

import numpy as np
import pytest

from opakit.core.mpoly import MPoly
from opakit.core.text import parse_poly
from opakit.filters.recursive import (
    DataArray,
    FilterSpec,
    decay_ratio,
    frame_maxima,
    impulse_response,
    run_recursion,
    series_division,
    stability_check,
    stabilize,
)
from opakit.utils.utils import make_rng, random_data_array

GENIN_KAMP = (
    "1-z1-z2-z1^2+4*z1*z2-z2^2+2*z1^3-2*z1^2*z2-2*z1*z2^2+2*z2^3"
    "-z1^3*z2+4*z1^2*z2^2-z1*z2^3-z1^3*z2^2-z1^2*z2^3"
)


@pytest.fixture
def one():
    return MPoly.constant(1, 2)


class TestFilterSpec:
    """Tests for filter descriptions."""

    def test_coefficients(self):
        fs = FilterSpec(parse_poly("1+z1", 2), parse_poly("2-z1*z2/2"))
        assert fs.exact
        assert fs.b11 == 2
        assert fs.a(2, 1) == 1
        assert fs.b(2, 2) == Fraction(-1, 2)
        assert fs.b(3, 1) == 0
        assert fs.numerator_size == (2, 1)
        assert fs.denominator_size == (2, 2)
        assert fs.to_dict()["B"] == "2-1/2*z1*z2"

    def test_validation(self, one):
        with pytest.raises(ValueError):
            FilterSpec(one, parse_poly("z1+z2"))
        with pytest.raises(ValueError):
            FilterSpec(parse_poly("1+z1"), parse_poly("1+z1"))


class TestDataArray:
    def test_indexing(self):
        D = DataArray([[1, 2], [3, 4]])
        assert D.exact
        assert D.shape == (2, 2)
        assert D.get(2, 1) == 3
        assert D.get(3, 1) == 0
        assert D.get(0, 1) == 0

    def test_float_entries(self):
        D = DataArray([[0.5, 1]])
        assert not D.exact
        assert D.get(1, 1) == 0.5 + 0j
        assert np.allclose(D.to_float(), [[0.5, 1.0]])

    def test_invalid(self):
        with pytest.raises(ValueError):
            DataArray([1, 2, 3])
        with pytest.raises(ValueError):
            DataArray.impulse(0, 3)
        with pytest.raises(ValueError):
            DataArray([[1]]) + DataArray([[1, 2]])


class TestRecursion:
    """Tests for the two-dimensional recursion."""

    def test_fir_convolution(self, one):
        fs = FilterSpec(parse_poly("1+z1", 2), one)
        R = run_recursion(fs, DataArray([[1, 2], [3, 4]]), 3, 2)
        assert R == DataArray([[1, 2], [4, 6], [3, 4]])

    def test_pascal_triangle(self, one):
        """1/(1 - z1/2 - z2/2) has coefficients C(a+b, a) / 2^(a+b)."""
        fs = FilterSpec(one, parse_poly("1-z1/2-z2/2"))
        R = run_recursion(fs, DataArray.impulse(8, 8), 8, 8)
        assert R.exact
        for a in range(8):
            for b in range(8):
                assert R.get(a + 1, b + 1) == Fraction(math.comb(a + b, a), 2 ** (a + b))

    def test_linearity(self):
        rng = make_rng(11)
        fs = FilterSpec(parse_poly("1-z2/3", 2), parse_poly("1-z1/2-z2/4"))
        D1 = DataArray(random_data_array(rng, 4, 4))
        D2 = DataArray(random_data_array(rng, 4, 4))
        combined = run_recursion(fs, D1 + D2, 6, 6)
        assert combined == run_recursion(fs, D1, 6, 6) + run_recursion(fs, D2, 6, 6)

    def test_float_mode(self, one):
        fs = FilterSpec(one, parse_poly("1-0.5*z1", 2))
        R = run_recursion(fs, DataArray.impulse(4, 1, exact=False), 4, 1)
        assert not R.exact
        assert np.allclose(R.to_float()[:, 0], [1, 0.5, 0.25, 0.125])

    def test_invalid_window(self, one):
        with pytest.raises(ValueError):
            run_recursion(FilterSpec(one, one), DataArray([[1]]), 0, 2)


class TestImpulseResponse:
    def test_frame_maxima(self):
        assert frame_maxima(np.array([[1.0, 2.0], [3.0, 4.0]])) == [1.0, 4.0]

    def test_decay_ratio(self):
        assert np.isclose(decay_ratio([1, 0.5, 0.25, 0.125]), 0.5)
        assert decay_ratio([1.0]) is None

    def test_decaying_response(self, one):
        report = impulse_response(FilterSpec(one, parse_poly("1-z1/4-z2/4")), 12, 12)
        assert not report.growth
        assert report.decay_ratio < 1
        assert report.max_abs == 1.0

    def test_growing_response(self, one):
        report = impulse_response(FilterSpec(one, parse_poly("1-z1-z2")), 10, 10)
        assert report.growth
        assert report.frame_maxima[-1] > report.frame_maxima[0]
        assert report.to_dict()["window"] == [10, 10]


class TestSeriesDivision:
    def test_geometric_series(self):
        q = series_division(MPoly.constant(1, 2), parse_poly("1-z1", 2), 4)
        assert q == parse_poly("1+z1+z1^2+z1^3+z1^4", 2)

    def test_self_division(self):
        B = parse_poly("2-z1-z2+z1*z2")
        assert series_division(B, B, 5) == 1

    def test_matches_impulse_response(self):
        A = parse_poly("1+z1-z2/3")
        B = parse_poly("1-z1/2-z2/4")
        q = series_division(A, B, 10)
        R = run_recursion(FilterSpec(A, B), DataArray.impulse(11, 11), 11, 11)
        for a in range(11):
            for b in range(11 - a):
                assert q.coeff((a, b)) == R.get(a + 1, b + 1)

    def test_invalid(self):
        with pytest.raises(ValueError):
            series_division(MPoly.constant(1, 2), parse_poly("z1+z2"), 3)
        with pytest.raises(ValueError):
            series_division(MPoly.constant(1, 2), parse_poly("1-z1", 2), -1)
        with pytest.raises(ValueError):
            series_division(MPoly.constant(1, 1), parse_poly("1-z1", 2), 3)


class TestStability:
    """Tests for stability verdicts and stabilization."""

    def test_affine_denominators(self):
        assert stability_check(parse_poly("3-z1-z2")).stable
        verdict = stability_check(parse_poly("2-z1-z2"))
        assert verdict.status == "unstable"
        assert np.allclose(verdict.witness, (1, 1))

    def test_stabilize_succeeds_with_constant(self):
        report = stabilize(parse_poly("1-z1-z2"), 0, window=6, grid=64)
        assert report.original.status == "unstable"
        assert report.p_n_star == parse_poly("1/3", 2)
        assert report.succeeded
        assert report.to_dict()["succeeded"] is True

    def test_stabilize_can_fail(self):
        report = stabilize(parse_poly(GENIN_KAMP), 2, window=6, grid=256)
        assert report.p_n_star == parse_poly("39/1165+23/1165*z1+23/1165*z2")
        assert not report.succeeded
        assert report.verdict.status == "unstable"

    def test_stabilize_validation(self):
        with pytest.raises(ValueError):
            stabilize(parse_poly("z1+z2"), 1)
        with pytest.raises(ValueError):
            stabilize(parse_poly("1-z1"), 1)
