from fractions import Fraction

import numpy as np
import pytest

from opakit.core.errors import SingularMatrixError
from opakit.core.linalg import (
    HermitianLDL,
    determinant_exact,
    exact_matrix,
    exact_vector,
    hermitian_pivots,
    is_positive_definite,
    solve_hermitian_exact,
    solve_hermitian_float,
)
from opakit.core.scalar import I, SQRT2


class TestExactSolve:
    """Tests for exact elimination."""

    def setup_method(self):
        self.M = exact_matrix([[2, 1], [1, 2]])
        self.H = exact_matrix([[2, I], [-I, 2]])

    def test_real_system(self):
        c = solve_hermitian_exact(self.M, [1, 0])
        assert c == [Fraction(2, 3), Fraction(-1, 3)]

    def test_complex_hermitian_system(self):
        c = solve_hermitian_exact(self.H, [1, 0])
        assert c[0] == Fraction(2, 3)
        assert c[1] == I / 3

    def test_singular(self):
        with pytest.raises(SingularMatrixError) as info:
            solve_hermitian_exact(exact_matrix([[1, 1], [1, 1]]), [1, 0])
        assert info.value.pivot == 1

    def test_pivoting(self):
        """A zero leading entry is handled by a row exchange."""
        c = solve_hermitian_exact(exact_matrix([[0, 1], [1, 0]]), [2, 3])
        assert c == [3, 2]

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            solve_hermitian_exact(self.M, [1, 0, 0])
        with pytest.raises(ValueError):
            exact_matrix([[1, 2], [3]])
        with pytest.raises(TypeError):
            exact_vector([0.5])


class TestHermitianLDL:
    """Tests for the LDL* factorisation."""

    def test_pivots(self):
        assert hermitian_pivots(exact_matrix([[2, 1], [1, 2]])) == [2, Fraction(3, 2)]
        assert hermitian_pivots(exact_matrix([[2, I], [-I, 2]])) == [2, Fraction(3, 2)]

    def test_truncated_solves(self):
        """Leading blocks of the factors solve leading blocks of the system."""
        M = exact_matrix([[4, 2, 0], [2, 3, 1], [0, 1, 2]])
        ldl = HermitianLDL(M)
        b = [1, 0, 0]
        assert ldl.solve(b, size=1) == [Fraction(1, 4)]
        assert ldl.solve(b, size=2) == solve_hermitian_exact(M[:2, :2], b[:2])
        assert ldl.solve(b) == solve_hermitian_exact(M, b)

    def test_positive_definite(self):
        assert is_positive_definite(exact_matrix([[2, 1], [1, 2]]))
        assert not is_positive_definite(exact_matrix([[1, 2], [2, 1]]))
        assert not is_positive_definite(exact_matrix([[0, 1], [1, 0]]))


class TestDeterminant:
    def test_values(self):
        assert determinant_exact(exact_matrix([[2, 1], [1, 2]])) == 3
        assert determinant_exact(exact_matrix([[0, 1], [1, 0]])) == -1
        assert determinant_exact(exact_matrix([[SQRT2, 1], [1, SQRT2]])) == 1
        assert determinant_exact(exact_matrix([[1, 1], [1, 1]])) == 0


class TestFloatSolve:
    def test_solution_and_condition(self):
        M = np.array([[2, 1], [1, 2]], dtype=np.complex128)
        c, cond = solve_hermitian_float(M, [1, 0])
        assert np.allclose(c, [2 / 3, -1 / 3])
        assert np.isclose(cond, 3.0)

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            solve_hermitian_float(np.ones((2, 2)), [1, 0])
