from fractions import Fraction

import numpy as np
import pytest

from opakit.utils.utils import (
    make_rng,
    parse_points,
    random_data_array,
    random_diagonal_weight,
    random_fraction,
    random_interior_points,
    random_rational_poly,
)


class TestRandomInputs:
    """Test suite for the seeded input generators."""

    def test_seed_is_reproducible(self):
        assert random_rational_poly(make_rng(3)) == random_rational_poly(make_rng(3))
        assert make_rng().random() == make_rng().random()

    def test_rational_poly(self):
        rng = make_rng(5)
        for _ in range(10):
            p = random_rational_poly(rng, d=3, max_degree=2)
            assert p.d == 3
            assert p.degree() <= 2
            assert p.constant_term() != 0
            assert p.is_exact

    def test_rational_poly_invalid_degree(self):
        with pytest.raises(ValueError):
            random_rational_poly(make_rng(), max_degree=-1)

    def test_fraction_bounds(self):
        rng = make_rng(1)
        for _ in range(50):
            x = random_fraction(rng, bound=2, max_den=3, nonzero=True)
            assert isinstance(x, Fraction)
            assert x != 0
            assert abs(x) <= 2

    def test_diagonal_weight(self):
        w = random_diagonal_weight(make_rng(2))
        assert w.constant_term() == 1
        assert all(m[0] == m[1] for m, _ in w.items())

    def test_data_array(self):
        data = random_data_array(make_rng(4), 3, 2)
        assert len(data) == 3
        assert all(len(row) == 2 for row in data)


class TestInteriorPoints:
    def test_polydisk(self):
        points = random_interior_points(make_rng(8), 20, d=2, radius=0.5)
        assert len(points) == 20
        assert all(abs(z) <= 0.5 for point in points for z in point)

    def test_ball(self):
        points = random_interior_points(make_rng(8), 20, d=3, domain="ball", radius=0.7)
        assert all(len(point) == 3 for point in points)
        assert all(np.linalg.norm(point) <= 0.7 + 1e-12 for point in points)

    def test_invalid(self):
        with pytest.raises(ValueError):
            random_interior_points(make_rng(), 1, radius=1.0)
        with pytest.raises(ValueError):
            random_interior_points(make_rng(), 1, domain="annulus")


class TestParsePoints:
    def test_points(self):
        assert parse_points("(1/2,1/3); ((1,2),0)") == [("1/2", "1/3"), ("(1,2)", "0")]
        assert parse_points("(0,0);") == [("0", "0")]

    def test_missing_parentheses(self):
        with pytest.raises(ValueError):
            parse_points("1/2,1/3")
