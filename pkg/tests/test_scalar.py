import math
from fractions import Fraction

import pytest
import numpy as np

from opakit.core.scalar import (
    I,
    ONE,
    SQRT2,
    ZERO,
    ExactScalar,
    QuadExt,
    as_rational,
    field_ops,
    to_complex,
    to_exact,
)
from opakit.utils.utils import make_rng, random_fraction


class TestQuadExt:
    """Tests for elements a + b*sqrt(2) of Q(sqrt 2)."""

    def test_arithmetic(self):
        """Products reduce sqrt(2)^2 to 2."""
        x = QuadExt(1, 1)
        y = QuadExt(1, -1)
        assert x * y == QuadExt(-1)
        assert x + y == 2
        assert x - y == QuadExt(0, 2)

    def test_inverse(self):
        """Division is exact and uses the conjugate."""
        x = QuadExt(3, 2)
        assert x * x.inverse() == 1
        assert QuadExt(1) / QuadExt(1, 1) == QuadExt(-1, 1)

    def test_sign(self):
        """Signs are decided exactly, including near cancellation."""
        assert QuadExt(0, 1).sign() == 1
        assert QuadExt(-1, 1).sign() == 1  # sqrt 2 - 1 > 0
        assert QuadExt(3, -2).sign() == 1  # 3 - 2 sqrt 2 > 0
        assert QuadExt(-3, 2).sign() == -1
        assert QuadExt(0).sign() == 0

    def test_ordering(self):
        assert QuadExt(1, 1) > QuadExt(2)
        assert QuadExt(Fraction(7, 5)) < QuadExt(0, 1)

    def test_to_float(self):
        assert QuadExt(0, 1).to_float() == math.sqrt(2)
        assert QuadExt(Fraction(1, 3)).to_float() == 1 / 3

    def test_str(self):
        assert str(QuadExt(0, 1)) == "s2"
        assert str(QuadExt(1, -1)) == "1-s2"
        assert str(QuadExt(Fraction(1, 2), Fraction(3, 4))) == "1/2+3/4*s2"

    def test_floats_refused(self):
        """Exact values never start from a binary double."""
        with pytest.raises(TypeError):
            QuadExt(0.5)
        with pytest.raises(TypeError):
            as_rational(True)


class TestExactScalar:
    """Tests for the complex exact field."""

    def test_constants(self):
        assert SQRT2 * SQRT2 == 2
        assert I * I == -1
        assert ONE + ZERO == 1
        assert not ZERO

    def test_division_and_conjugate(self):
        z = ExactScalar(QuadExt(1, 1), 2)
        assert z * z.inverse() == ONE
        assert (z * z.conjugate()).is_real()

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ONE / ZERO

    def test_mixed_with_float_demotes(self):
        """Arithmetic with a Python float gives a complex double."""
        result = ExactScalar(Fraction(1, 2)) + 0.25
        assert isinstance(result, complex)
        assert np.isclose(result, 0.75)

    def test_real_sign(self):
        assert (SQRT2 - Fraction(7, 5)).real_sign() == 1
        with pytest.raises(ValueError):
            I.real_sign()

    def test_power(self):
        assert SQRT2**4 == 4
        assert SQRT2 ** (-2) == Fraction(1, 2)

    def test_hash_matches_rationals(self):
        """Rational scalars hash like the Fractions they equal."""
        assert hash(to_exact(Fraction(2, 3))) == hash(Fraction(2, 3))
        assert len({to_exact(1), to_exact(Fraction(2, 2))}) == 1

    def test_to_complex(self):
        z = ExactScalar.from_parts(1, 0, 0, 1)
        assert np.isclose(to_complex(z), 1 + 1j * math.sqrt(2))
        assert to_complex(Fraction(1, 4)) == 0.25

    def test_to_exact_rejects_floats(self):
        with pytest.raises(TypeError):
            to_exact(0.5)
        with pytest.raises(TypeError):
            to_exact(1j)

    def test_field_ops(self):
        assert field_ops(1, SQRT2, "mul") == SQRT2
        assert field_ops(Fraction(1, 2), Fraction(1, 2), "add") == 1
        with pytest.raises(ZeroDivisionError):
            field_ops(1, 0, "div")

    def test_field_ops_unary(self):
        z = ExactScalar.from_parts(Fraction(1, 2), 0, Fraction(1, 3), 0)
        assert field_ops(z, op="conj") == ExactScalar.from_parts(Fraction(1, 2), 0, Fraction(-1, 3), 0)
        assert field_ops(z, op="negate") == ExactScalar.from_parts(Fraction(-1, 2), 0, Fraction(-1, 3), 0)
        assert field_ops(z, op="is_zero") is False
        assert field_ops(0, op="is_zero") is True
        assert field_ops(SQRT2, SQRT2, "eq") is True
        with pytest.raises(ValueError):
            field_ops(1, 1, "pow")


class TestFieldAxioms:
    """Field identities on random elements of Q(sqrt 2) + i Q(sqrt 2)."""

    @pytest.fixture
    def triples(self):
        rng = make_rng(7)

        def draw():
            return ExactScalar.from_parts(*(random_fraction(rng, 9, 6) for _ in range(4)))

        return [(draw(), draw(), draw()) for _ in range(1000)]

    def test_associativity(self, triples):
        for x, y, z in triples:
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)

    def test_distributivity(self, triples):
        for x, y, z in triples:
            assert x * (y + z) == x * y + x * z

    def test_conjugate_is_multiplicative(self, triples):
        for x, y, _ in triples:
            assert (x * y).conjugate() == x.conjugate() * y.conjugate()
            assert field_ops(x, y, "mul").conjugate() == field_ops(x, op="conj") * field_ops(y, op="conj")

    def test_inverse(self, triples):
        for x, y, _ in triples:
            if not y.is_zero():
                assert field_ops(field_ops(x, y, "div"), y, "mul") == x
