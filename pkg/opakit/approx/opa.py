from __future__ import annotations

import logging
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..core.errors import ConsistencyError, ModeError
from ..core.linalg import HermitianLDL, exact_matvec, solve_hermitian_exact, solve_hermitian_float
from ..core.mpoly import Coefficient, MPoly, MultiIndex, deglex_rank, deglex_unrank, from_rank_coefficients
from ..core.scalar import ZERO, ExactScalar, to_complex
from ..core.spaces import SpaceSpec, inner_product, monomial_weight, norm_squared

logger = logging.getLogger(__name__)

Mode = str


def resolve_mode(space: SpaceSpec, f: MPoly, mode: Optional[Mode] = None) -> bool:
    """
    Decide between exact and float arithmetic.

    Returns:
        True for exact mode

    Raises:
        ModeError: If exact mode is requested for irrational weights or float data
        ValueError: For an unknown mode name
    """
    can_be_exact = space.is_exact and f.is_exact
    if mode is None:
        return can_be_exact
    if mode == "exact":
        if not can_be_exact:
            raise ModeError(
                f"Exact mode needs rational weights and exact coefficients ({space})"
            )
        return True
    if mode == "float":
        return False
    raise ValueError(f"Unknown mode {mode!r}; use 'exact' or 'float'")


def _check_inputs(space: SpaceSpec, f: MPoly, n: int) -> None:
    if f.d != space.d:
        raise ValueError(f"f has {f.d} variables but the space has d={space.d}")
    if f.is_zero():
        raise ValueError("Cannot approximate 1/f for the zero polynomial")
    if n < 0:
        raise ValueError(f"Order must be non-negative, got {n}")


def support_component(f: MPoly, n: int) -> List[int]:
    """
    Ranks <= n that the optimal approximant can involve.

    The Grammian entry for chi_i, chi_j vanishes unless m_i - m_j is a
    difference of two exponents of f. The right-hand side lives on index 0,
    so only the connected component of 0 in that graph (restricted to ranks
    <= n) carries a non-zero solution.
    """
    support = list(f.terms)
    deltas = {
        tuple(a - b for a, b in zip(m1, m2))
        for m1 in support
        for m2 in support
    }
    deltas.discard((0,) * f.d)
    seen = {0}
    queue = deque([(0,) * f.d])
    while queue:
        m = queue.popleft()
        for delta in deltas:
            nb = tuple(a + b for a, b in zip(m, delta))
            if min(nb) < 0:
                continue
            r = deglex_rank(nb)
            if r <= n and r not in seen:
                seen.add(r)
                queue.append(nb)
    return sorted(seen)


def grammian(
    space: SpaceSpec,
    f: MPoly,
    basis: Sequence[int],
    exact: bool = True,
) -> Tuple[NDArray[Any], NDArray[Any]]:
    """
    Normal equations M c = b for the given basis ranks.

    M[i, j] = <chi_j f, chi_i f> and b[i] = <1, chi_i f>.

    Returns:
        Object arrays of ExactScalar in exact mode, complex arrays otherwise
    """
    products = [f.shift(deglex_unrank(j, f.d)) for j in basis]
    one = MPoly.constant(1, f.d)
    size = len(basis)
    if exact:
        M = np.empty((size, size), dtype=object)
        b = np.empty(size, dtype=object)
    else:
        products = [p.to_float_poly() for p in products]
        M = np.zeros((size, size), dtype=np.complex128)
        b = np.zeros(size, dtype=np.complex128)
    for i in range(size):
        for j in range(i, size):
            value = inner_product(space, products[j], products[i])
            M[i, j] = value
            M[j, i] = value.conjugate()
        b[i] = inner_product(space, one, products[i])
    return M, b


@dataclass
class OpaResult:
    """
    Optimal polynomial approximant p_n^* to 1/f and its distance.

    Attributes:
        space: The ambient space
        f: The polynomial being inverted
        n: Order (the approximant lies in the span of chi_0..chi_n)
        approximant: p_n^*
        nu2: Squared distance ||p_n^* f - 1||^2 (exact in exact mode)
        exact: Whether exact arithmetic was used
        basis: Ranks that entered the reduced system
        grammian: Reduced Grammian
        rhs: Reduced right-hand side
        condition: 2-norm condition number (float mode only)
        residual_ok: Outcome of the residual orthogonality check, None when skipped
    """

    space: SpaceSpec
    f: MPoly
    n: int
    approximant: MPoly
    nu2: Coefficient
    exact: bool
    basis: List[int] = field(default_factory=list)
    grammian: Optional[NDArray[Any]] = None
    rhs: Optional[NDArray[Any]] = None
    condition: Optional[float] = None
    residual_ok: Optional[bool] = None

    @property
    def nu(self) -> float:
        value = to_complex(self.nu2).real
        return float(np.sqrt(max(value, 0.0)))

    def coefficient_vector(self) -> List[Coefficient]:
        """Coefficients of chi_0..chi_n (zeros included)."""
        return [self.approximant.coeff(deglex_unrank(j, self.f.d)) for j in range(self.n + 1)]

    def to_dict(self) -> Dict[str, Any]:
        """Report form; exact entries are None in float mode."""
        from ..core.text import format_scalar

        coeffs = []
        for m, c in self.approximant.items():
            z = to_complex(c)
            coeffs.append(
                {
                    "monomial": list(m),
                    "exact": format_scalar(c) if self.exact else None,
                    "float": [z.real, z.imag],
                }
            )
        return {
            "space": self.space.describe(),
            "f": str(self.f),
            "n": self.n,
            "mode": "exact" if self.exact else "float",
            "approximant": str(self.approximant),
            "coeffs": coeffs,
            "nu2_exact": format_scalar(self.nu2) if self.exact else None,
            "nu_float": self.nu,
            "residual_ok": self.residual_ok,
            "basis_size": len(self.basis),
            "condition": self.condition,
        }


def residual_norm2(space: SpaceSpec, f: MPoly, p: MPoly) -> Coefficient:
    """||p f - 1||^2 in the space."""
    return norm_squared(space, p * f - MPoly.constant(1, f.d))


RESIDUAL_TOL = 1e-8


def check_residual_orthogonality(space: SpaceSpec, f: MPoly, p: MPoly, n: int) -> float:
    """
    Check that p f - 1 is orthogonal to chi_j f for every j <= n.

    Exact inner products must vanish; float ones are compared with
    RESIDUAL_TOL and only logged.

    Returns:
        The largest |<p f - 1, chi_j f>| (0.0 when every exact product vanishes)

    Raises:
        ConsistencyError: Naming the first index where exact orthogonality fails
    """
    residual = p * f - MPoly.constant(1, f.d)
    worst = 0.0
    for j in range(n + 1):
        value = inner_product(space, residual, f.shift(deglex_unrank(j, f.d)))
        if isinstance(value, ExactScalar):
            if not value.is_zero():
                raise ConsistencyError(
                    f"Residual is not orthogonal to chi_{j} f: inner product {value}"
                )
            continue
        worst = max(worst, float(abs(value)))
        if abs(value) > RESIDUAL_TOL:
            logger.warning("Float residual against chi_%d f is %.3e", j, abs(value))
    return worst


def _build_result(
    space: SpaceSpec,
    f: MPoly,
    n: int,
    basis: List[int],
    coeffs: Sequence[Any],
    exact: bool,
    M: NDArray[Any],
    b: NDArray[Any],
    condition: Optional[float],
    verify: bool,
) -> OpaResult:
    p = from_rank_coefficients(list(coeffs), f.d, basis)
    nu2 = residual_norm2(space, f, p)
    residual_ok = None
    if verify:
        residual_ok = bool(check_residual_orthogonality(space, f, p, n) <= RESIDUAL_TOL)
    if exact and verify:
        # ||1 - P1||^2 = ||1||^2 - <1, P1> for the orthogonal projection P
        one = MPoly.constant(1, f.d)
        alt = monomial_weight(space, (0,) * f.d) - inner_product(space, one, p * f)
        if alt != nu2:
            raise ConsistencyError(f"Distance mismatch at order {n}: {nu2} vs {alt}")
    return OpaResult(
        space=space,
        f=f,
        n=n,
        approximant=p,
        nu2=nu2 if exact else float(to_complex(nu2).real),
        exact=exact,
        basis=list(basis),
        grammian=M,
        rhs=b,
        condition=condition,
        residual_ok=residual_ok,
    )


def opa(
    space: SpaceSpec,
    f: MPoly,
    n: int,
    mode: Optional[Mode] = None,
    reduce: bool = True,
    verify: bool = True,
) -> OpaResult:
    """
    Optimal polynomial approximant of order n to 1/f.

    Solves the normal equations in exact arithmetic when the space weights
    and the coefficients of f are exact, and in double precision otherwise.

    Args:
        space: The ambient space
        f: Non-zero polynomial
        n: Order; the approximant is a combination of chi_0..chi_n
        mode: "exact", "float" or None for automatic choice
        reduce: Solve only on the ranks connected to the constant term
        verify: Run the exact consistency checks on the result

    Raises:
        ValueError: If f is zero or n is negative
        ModeError: If exact mode is impossible for this input
        ConsistencyError: If an exact check fails
    """
    _check_inputs(space, f, n)
    exact = resolve_mode(space, f, mode)
    basis = support_component(f, n) if reduce else list(range(n + 1))
    logger.debug("opa order %d in %s: solving on %d of %d ranks", n, space, len(basis), n + 1)
    M, b = grammian(space, f, basis, exact)
    condition = None
    if exact:
        if all(not v for v in b):
            coeffs: Sequence[Any] = [ZERO] * len(basis)
        else:
            coeffs = solve_hermitian_exact(M, list(b), verify=verify)
    else:
        solution, condition = solve_hermitian_float(M, b)
        coeffs = [complex(c) for c in solution]
    return _build_result(space, f, n, basis, coeffs, exact, M, b, condition, verify)


def opa_sequence(
    space: SpaceSpec,
    f: MPoly,
    N: int,
    mode: Optional[Mode] = None,
    reduce: bool = True,
    verify: bool = True,
) -> List[OpaResult]:
    """
    Approximants of every order 0..N from one factorisation.

    The distances must decrease; exact mode asserts it.

    Raises:
        ConsistencyError: If the distances increase in exact mode
    """
    _check_inputs(space, f, N)
    exact = resolve_mode(space, f, mode)
    full_basis = support_component(f, N) if reduce else list(range(N + 1))
    M, b = grammian(space, f, full_basis, exact)
    ldl = HermitianLDL(M) if exact else None
    results: List[OpaResult] = []
    for n in range(N + 1):
        k = bisect_right(full_basis, n)
        basis = full_basis[:k]
        Mk, bk = M[:k, :k], b[:k]
        condition = None
        if ldl is not None:
            coeffs: Sequence[Any] = ldl.solve(list(bk), k)
            if verify and any(r != v for r, v in zip(exact_matvec(Mk, coeffs), bk)):
                raise ConsistencyError(f"Exact solve failed the M c = b check at order {n}")
        else:
            solution, condition = solve_hermitian_float(Mk, bk)
            coeffs = [complex(c) for c in solution]
        result = _build_result(space, f, n, basis, coeffs, exact, Mk, bk, condition, verify)
        if results:
            previous = results[-1].nu2
            if exact:
                if (result.nu2 - previous).real_sign() > 0:
                    raise ConsistencyError(f"Distance increased at order {n}")
            elif result.nu2 > previous * (1 + 1e-9) + 1e-14:
                logger.warning("Float distance increased at order %d", n)
        results.append(result)
    return results


@dataclass
class WeakInnerReport:
    """Outcome of testing <chi_j g, g> = 0 for 1 <= j <= N."""

    weakly_inner: bool
    checked_up_to: int
    offending_index: Optional[int] = None
    offending_value: Optional[Coefficient] = None
    values: List[Coefficient] = field(default_factory=list)


def weak_inner_test(space: SpaceSpec, g: MPoly, N: int, tol: Optional[float] = None) -> WeakInnerReport:
    """
    Test whether g is orthogonal to every chi_j g with 1 <= j <= N.

    Exact polynomials are tested for exact zeros; float polynomials (or any
    input when tol is given) are compared against tol.
    """
    if g.is_zero():
        raise ValueError("The zero polynomial is not weakly inner")
    values: List[Coefficient] = []
    exact_test = tol is None and g.is_exact and space.is_exact
    threshold = 1e-12 if tol is None else tol
    for j in range(1, N + 1):
        value = inner_product(space, g.shift(deglex_unrank(j, g.d)), g)
        values.append(value)
        failed = (not value.is_zero()) if exact_test else abs(to_complex(value)) > threshold
        if failed:
            return WeakInnerReport(False, N, j, value, values)
    return WeakInnerReport(True, N, values=values)


@dataclass
class ConstantOpaReport:
    """Whether every approximant of 1/g up to order N is a constant."""

    holds: bool
    constant: Optional[Coefficient]
    diagnostic: str
    nu2: Optional[Coefficient] = None


def constant_opa_check(space: SpaceSpec, g: MPoly, N: int) -> ConstantOpaReport:
    """
    Check that p_n^* = <1, g> / ||g||^2 for all n <= N.

    This is what weak innerness predicts; for a non-weakly-inner g the
    report explains which orthogonality fails instead.
    """
    report = weak_inner_test(space, g, N)
    if not report.weakly_inner:
        return ConstantOpaReport(
            False,
            None,
            f"not weakly inner: <chi_{report.offending_index} g, g> = {report.offending_value}",
        )
    one = MPoly.constant(1, g.d)
    constant = inner_product(space, one, g) / norm_squared(space, g)
    expected = MPoly.constant(constant, g.d)
    results = opa_sequence(space, g, N)
    for r in results:
        if r.exact and r.approximant != expected:
            return ConstantOpaReport(
                False, constant, f"order {r.n} approximant {r.approximant} is not constant"
            )
        if r.nu2 != results[0].nu2 and r.exact:
            return ConstantOpaReport(
                False, constant, f"distance changed at order {r.n}"
            )
    return ConstantOpaReport(True, constant, "all approximants constant", results[0].nu2)


@dataclass
class SignHistory:
    """Sign of one approximant coefficient across orders."""

    monomial: MultiIndex
    rank: int
    signs: List[int]
    first_appearance: Optional[int]
    first_negative: Optional[int]


def _sign(c: Coefficient) -> int:
    if isinstance(c, ExactScalar):
        if c.is_zero():
            return 0
        if c.is_real():
            return c.real_sign()
    value = to_complex(c).real
    return int(np.sign(value))


def coefficient_sign_history(space: SpaceSpec, f: MPoly, monomial: Sequence[int], N: int) -> SignHistory:
    """Track the sign of the coefficient of z^monomial in p_n^* for n <= N."""
    monomial = tuple(monomial)
    results = opa_sequence(space, f, N)
    signs = [_sign(r.approximant.coeff(monomial)) for r in results]
    first = next((n for n, s in enumerate(signs) if s != 0), None)
    negative = next((n for n, s in enumerate(signs) if s < 0), None)
    return SignHistory(monomial, deglex_rank(monomial), signs, first, negative)


__all__ = [
    "OpaResult",
    "resolve_mode",
    "support_component",
    "grammian",
    "opa",
    "opa_sequence",
    "residual_norm2",
    "check_residual_orthogonality",
    "WeakInnerReport",
    "weak_inner_test",
    "ConstantOpaReport",
    "constant_opa_check",
    "SignHistory",
    "coefficient_sign_history",
]
