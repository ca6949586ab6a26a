from fractions import Fraction

import numpy as np
import pytest

from opakit.core.mpoly import (
    MPoly,
    deglex_rank,
    deglex_unrank,
    diag_threshold,
    from_rank_coefficients,
    monomial_count,
    monomials_upto,
    poly_arith,
    poly_eval,
    poly_sum,
)
from opakit.core.scalar import SQRT2
from opakit.core.text import parse_poly
from opakit.utils.utils import make_rng, random_interior_points, random_rational_poly


class TestGradedOrder:
    """Tests for the graded monomial order."""

    def test_two_variable_start(self):
        """The order starts 1, z1, z2, z1^2, z1 z2, z2^2."""
        assert monomials_upto(5, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
        for j, m in enumerate(monomials_upto(5, 2)):
            assert deglex_rank(m) == j

    def test_unrank_inverts_rank(self):
        for d in (1, 2, 3):
            for j in range(60):
                assert deglex_rank(deglex_unrank(j, d)) == j

    def test_rank_round_trip_random(self):
        """Unranking recovers random multi-indices in one to four variables."""
        rng = make_rng(3)
        for _ in range(10000):
            d = int(rng.integers(1, 5))
            m = tuple(int(k) for k in rng.integers(0, 7, d))
            assert deglex_unrank(deglex_rank(m), d) == m

    def test_diag_threshold(self):
        assert diag_threshold(0, 2) == 0
        assert diag_threshold(1, 2) == 4
        assert diag_threshold(2, 2) == 12
        assert diag_threshold(3, 2) == 24
        assert diag_threshold(1, 3) == deglex_rank((1, 1, 1))

    def test_monomial_count(self):
        assert monomial_count(2, 2) == 6
        assert monomial_count(3, 3) == 20
        assert len(monomials_upto(monomial_count(4, 2) - 1, 2)) == 15

    def test_invalid_input(self):
        with pytest.raises(ValueError):
            deglex_rank((1, -1))
        with pytest.raises(ValueError):
            deglex_unrank(-1, 2)
        with pytest.raises(ValueError):
            diag_threshold(-1, 2)


class TestMPoly:
    """Tests for sparse multivariate polynomials."""

    def setup_method(self):
        self.f = parse_poly("2-z1-z2")

    def test_construction_drops_zeros(self):
        p = MPoly(2, {(0, 0): 1, (1, 0): 0})
        assert len(p) == 1
        assert p.support() == [(0, 0)]

    def test_construction_errors(self):
        with pytest.raises(ValueError):
            MPoly(0)
        with pytest.raises(ValueError):
            MPoly(2, {(1,): 1})

    def test_arithmetic(self):
        z1 = MPoly.variable(0, 2)
        z2 = MPoly.variable(1, 2)
        assert self.f == 2 - z1 - z2
        assert (z1 + z2) ** 2 == z1 * z1 + 2 * z1 * z2 + z2 * z2
        assert (self.f - self.f).is_zero()
        assert self.f / 2 == 1 - z1 / 2 - z2 / 2

    def test_division_only_by_constants(self):
        with pytest.raises(TypeError):
            self.f / MPoly.variable(0, 2)
        with pytest.raises(ZeroDivisionError):
            self.f / 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            self.f + MPoly.variable(0, 3)

    def test_degree_and_rank(self):
        p = parse_poly("1+z1*z2^2", 2)
        assert p.degree() == 3
        assert p.degree_in(0) == 1
        assert p.degree_in(1) == 2
        assert p.leading_rank() == deglex_rank((1, 2))
        assert MPoly.zero(2).degree() == -1

    def test_items_in_graded_order(self):
        p = parse_poly("z2^2+z1+3", 2)
        assert p.support() == [(0, 0), (1, 0), (0, 2)]

    def test_exactness(self):
        assert self.f.is_exact
        assert not self.f.to_float_poly().is_exact
        assert (self.f * SQRT2).is_exact

    def test_evaluation(self):
        assert self.f(1, 1) == 0
        assert np.isclose(self.f(0.5, 0.25j), 1.5 - 0.25j)
        with pytest.raises(ValueError):
            poly_eval(self.f, [1])

    def test_dilate(self):
        assert self.f.dilate(Fraction(1, 2)) == parse_poly("2-z1/2-z2/2")
        assert np.isclose(self.f.dilate(0.5)(1, 1), 1.0)
        with pytest.raises(ValueError):
            self.f.dilate(0)

    def test_shift(self):
        assert self.f.shift((1, 1)) == parse_poly("2*z1*z2-z1^2*z2-z1*z2^2")

    def test_dense_coefficients(self):
        p = parse_poly("1+2*z1*z2^2", 2)
        dense = p.dense_coefficients()
        assert dense.shape == (2, 3)
        assert dense[0, 0] == 1
        assert dense[1, 2] == 2
        assert p.dense_coefficients(var=1).shape == (3, 2)

    def test_hash_and_equality(self):
        assert hash(parse_poly("z1+z2")) == hash(parse_poly("z2+z1"))
        assert parse_poly("3", 2) == 3

    def test_helpers(self):
        z1 = MPoly.variable(0, 2)
        assert poly_arith(self.f, z1, "add") == 2 - MPoly.variable(1, 2)
        assert poly_arith(self.f, 3, "scale") == 3 * self.f
        with pytest.raises(ValueError):
            poly_arith(self.f, z1, "pow")
        assert poly_sum([z1, z1, self.f], 2) == parse_poly("2+z1-z2")
        assert from_rank_coefficients([1, 2, 3], 2) == parse_poly("1+2*z1+3*z2")
        assert MPoly.from_univariate([1, 0, 4], var=1, d=2) == parse_poly("1+4*z2^2")

    def test_product_matches_pointwise_product(self):
        rng = make_rng(11)
        p = random_rational_poly(rng, 2, 3)
        q = random_rational_poly(rng, 2, 4)
        product = poly_arith(p, q, "mul")
        for z in random_interior_points(rng, 100, 2):
            assert np.isclose(poly_eval(product, z), poly_eval(p, z) * poly_eval(q, z))
