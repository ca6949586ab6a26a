from __future__ import annotations

import logging
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from .errors import ConsistencyError, SingularMatrixError
from .scalar import ZERO, ExactScalar, to_exact

logger = logging.getLogger(__name__)


def exact_matrix(rows: Sequence[Sequence[Any]]) -> NDArray[np.object_]:
    """Object array of ExactScalar entries."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    out = np.empty((n_rows, n_cols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise ValueError("Ragged matrix rows")
        for j, v in enumerate(row):
            out[i, j] = to_exact(v)
    return out


def exact_vector(values: Sequence[Any]) -> NDArray[np.object_]:
    out = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = to_exact(v)
    return out


def exact_matvec(M: NDArray[np.object_], c: Sequence[ExactScalar]) -> List[ExactScalar]:
    result = []
    for row in M:
        acc = ZERO
        for mij, cj in zip(row, c):
            if mij and cj:
                acc = acc + mij * cj
        result.append(acc)
    return result


def _check_square(M: NDArray[Any], b: Sequence[Any]) -> int:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {M.shape}")
    if len(b) != M.shape[0]:
        raise ValueError(f"Right-hand side has {len(b)} entries, expected {M.shape[0]}")
    return int(M.shape[0])


def solve_hermitian_exact(M: NDArray[np.object_], b: Sequence[Any], verify: bool = True) -> List[ExactScalar]:
    """
    Solve M c = b exactly by Gaussian elimination.

    The first non-zero entry of each column is taken as pivot, and zero
    multipliers are skipped so sparse Grammians stay cheap.

    Args:
        M: Square object array of exact scalars
        b: Right-hand side
        verify: Re-check M c = b after back substitution

    Returns:
        The exact solution vector

    Raises:
        SingularMatrixError: If some column has no non-zero pivot
        ConsistencyError: If the verification fails
    """
    n = _check_square(M, b)
    A = np.array(M, dtype=object, copy=True)
    rhs = [to_exact(v) for v in b]
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if A[r, k]), None)
        if pivot_row is None:
            raise SingularMatrixError(k)
        if pivot_row != k:
            A[[k, pivot_row]] = A[[pivot_row, k]]
            rhs[k], rhs[pivot_row] = rhs[pivot_row], rhs[k]
        inv_pivot = A[k, k].inverse()
        for r in range(k + 1, n):
            if not A[r, k]:
                continue
            factor = A[r, k] * inv_pivot
            A[r, k:] = A[r, k:] - factor * A[k, k:]
            rhs[r] = rhs[r] - factor * rhs[k]
    c: List[ExactScalar] = [ZERO] * n
    for k in range(n - 1, -1, -1):
        acc = rhs[k]
        for j in range(k + 1, n):
            if A[k, j] and c[j]:
                acc = acc - A[k, j] * c[j]
        c[k] = acc / A[k, k]
    if verify:
        residual = exact_matvec(M, c)
        if any(r != v for r, v in zip(residual, b)):
            raise ConsistencyError("Exact solve failed the M c = b check")
    return c


class HermitianLDL:
    """
    Exact LDL* factorisation of a Hermitian positive definite matrix.

    Leading principal blocks of the factors factor the leading principal
    blocks of M, so one factorisation solves every truncated system
    M[:k, :k] c = b[:k].

    Attributes:
        L: Unit lower triangular factor (object array)
        D: Diagonal pivots, positive for a positive definite M
    """

    def __init__(self, M: NDArray[np.object_]) -> None:
        n = int(M.shape[0])
        L = np.empty((n, n), dtype=object)
        L.fill(ZERO)
        D: List[ExactScalar] = []
        for j in range(n):
            acc = M[j, j]
            for k in range(j):
                if L[j, k]:
                    acc = acc - L[j, k] * L[j, k].conjugate() * D[k]
            if not acc:
                raise SingularMatrixError(j)
            D.append(acc)
            L[j, j] = ExactScalar.coerce(1)
            inv = acc.inverse()
            for i in range(j + 1, n):
                s = M[i, j]
                for k in range(j):
                    if L[i, k] and L[j, k]:
                        s = s - L[i, k] * L[j, k].conjugate() * D[k]
                L[i, j] = s * inv
        self.M = M
        self.L = L
        self.D = D

    def pivots(self) -> List[ExactScalar]:
        return list(self.D)

    def solve(self, b: Sequence[Any], size: Optional[int] = None) -> List[ExactScalar]:
        """Solve the leading size x size system (the full system by default)."""
        n = len(self.D) if size is None else size
        rhs = [to_exact(v) for v in b[:n]]
        y: List[ExactScalar] = []
        for i in range(n):
            acc = rhs[i]
            for k in range(i):
                if self.L[i, k] and y[k]:
                    acc = acc - self.L[i, k] * y[k]
            y.append(acc)
        z = [y[i] / self.D[i] for i in range(n)]
        c: List[ExactScalar] = [ZERO] * n
        for i in range(n - 1, -1, -1):
            acc = z[i]
            for k in range(i + 1, n):
                if self.L[k, i] and c[k]:
                    acc = acc - self.L[k, i].conjugate() * c[k]
            c[i] = acc
        return c


def hermitian_pivots(M: NDArray[np.object_]) -> List[ExactScalar]:
    """Pivots of elimination without row exchanges (ratios of leading minors)."""
    return HermitianLDL(M).pivots()


def is_positive_definite(M: NDArray[np.object_]) -> bool:
    """Exact test that every leading principal minor is positive."""
    try:
        pivots = hermitian_pivots(M)
    except SingularMatrixError:
        return False
    return all(p.is_real() and p.real_sign() > 0 for p in pivots)


def determinant_exact(M: NDArray[np.object_]) -> ExactScalar:
    n = int(M.shape[0])
    A = np.array(M, dtype=object, copy=True)
    det = ExactScalar.coerce(1)
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if A[r, k]), None)
        if pivot_row is None:
            return ZERO
        if pivot_row != k:
            A[[k, pivot_row]] = A[[pivot_row, k]]
            det = -det
        det = det * A[k, k]
        inv_pivot = A[k, k].inverse()
        for r in range(k + 1, n):
            if A[r, k]:
                A[r, k:] = A[r, k:] - (A[r, k] * inv_pivot) * A[k, k:]
    return det  # type: ignore[return-value]


def solve_hermitian_float(M: NDArray[np.complex128], b: Sequence[complex]) -> Tuple[NDArray[np.complex128], float]:
    """
    Solve M c = b in double precision.

    Returns:
        The solution and the 2-norm condition number of M (advisory)

    Raises:
        SingularMatrixError: If LAPACK reports a singular matrix
    """
    M = np.asarray(M, dtype=np.complex128)
    rhs = np.asarray(b, dtype=np.complex128)
    _check_square(M, rhs)
    try:
        c = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(-1) from e
    cond = float(np.linalg.cond(M))
    if cond > 1e12:
        logger.warning("Grammian condition number %.3e; float results may be inaccurate", cond)
    return c, cond
