from __future__ import annotations

import numbers
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .scalar import ZERO, ExactScalar, to_complex

MultiIndex = Tuple[int, ...]
Coefficient = Union[ExactScalar, complex]


def _check_index(m: Sequence[int]) -> MultiIndex:
    m = tuple(int(e) for e in m)
    if not m:
        raise ValueError("Multi-indices need at least one variable")
    if any(e < 0 for e in m):
        raise ValueError(f"Negative exponent in multi-index {m}")
    return m


def deglex_rank(m: Sequence[int]) -> int:
    """
    Position of z^m in the graded order.

    Monomials are ordered by total degree; within a degree the exponent of
    z1 decreases first, then z2, and so on. For two variables the order
    starts 1, z1, z2, z1^2, z1 z2, z2^2, ...

    Args:
        m: Exponent tuple of length d

    Returns:
        Zero-based rank of the monomial
    """
    m = _check_index(m)
    d = len(m)
    remaining = sum(m)
    rank = comb(remaining - 1 + d, d) if remaining else 0
    for i in range(d - 1):
        free = d - i - 1
        # monomials sharing the prefix but with a larger exponent at i come first
        if remaining > m[i]:
            rank += comb(remaining - m[i] - 1 + free, free)
        remaining -= m[i]
    return rank


def deglex_unrank(j: int, d: int) -> MultiIndex:
    """Inverse of deglex_rank."""
    if j < 0:
        raise ValueError(f"Rank must be non-negative, got {j}")
    if d < 1:
        raise ValueError(f"Dimension must be positive, got {d}")
    degree = 0
    while comb(degree + d, d) <= j:
        degree += 1
    offset = j - (comb(degree - 1 + d, d) if degree else 0)
    exps: List[int] = []
    remaining = degree
    for i in range(d - 1):
        free = d - i - 1
        for e in range(remaining, -1, -1):
            block = comb(remaining - e + free - 1, free - 1)
            if offset < block:
                exps.append(e)
                remaining -= e
                break
            offset -= block
    exps.append(remaining)
    return tuple(exps)


def monomial_count(degree: int, d: int) -> int:
    """Number of monomials in d variables of total degree at most `degree`."""
    return comb(degree + d, d)


def diag_threshold(n: int, d: int) -> int:
    """Rank of the diagonal monomial (z1 ... zd)^n."""
    if n < 0:
        raise ValueError(f"Diagonal power must be non-negative, got {n}")
    return deglex_rank((n,) * d)


@lru_cache(maxsize=64)
def monomials_upto(n: int, d: int) -> Tuple[MultiIndex, ...]:
    """The first n + 1 monomials of the graded order."""
    result: List[MultiIndex] = []
    degree = 0
    while len(result) < n + 1:
        result.extend(_monomials_of_degree(degree, d))
        degree += 1
    return tuple(result[: n + 1])


def _monomials_of_degree(degree: int, d: int) -> Iterator[MultiIndex]:
    if d == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials_of_degree(degree - first, d - 1):
            yield (first,) + rest


def coerce_coefficient(value: Any) -> Coefficient:
    """Normalise a coefficient to ExactScalar (exact) or complex (float mode)."""
    exact = ExactScalar.coerce(value)
    if exact is not None:
        return exact
    if isinstance(value, numbers.Integral):
        return ExactScalar.coerce(int(value))  # type: ignore[return-value]
    if isinstance(value, (numbers.Real, numbers.Complex)):
        return complex(value)
    raise TypeError(f"Unsupported coefficient type {type(value).__name__}")


def _is_zero(c: Coefficient) -> bool:
    if isinstance(c, ExactScalar):
        return c.is_zero()
    return c == 0


class MPoly:
    """
    A sparse polynomial in d complex variables.

    Terms are stored in a dict from exponent tuples to non-zero coefficients.
    Exact polynomials hold ExactScalar coefficients; float-mode polynomials
    hold complex doubles. Instances are treated as immutable.

    Attributes:
        d: Number of variables
    """

    __slots__ = ("d", "_terms")

    def __init__(self, d: int, terms: Optional[Mapping[Sequence[int], Any]] = None) -> None:
        if d < 1:
            raise ValueError(f"Number of variables must be positive, got {d}")
        self.d = d
        self._terms: Dict[MultiIndex, Coefficient] = {}
        for m, c in (terms or {}).items():
            m = _check_index(m)
            if len(m) != d:
                raise ValueError(f"Multi-index {m} does not have {d} entries")
            coeff = coerce_coefficient(c)
            if not _is_zero(coeff):
                self._terms[m] = coeff

    @classmethod
    def _from_dict(cls, d: int, terms: Dict[MultiIndex, Coefficient]) -> "MPoly":
        obj = object.__new__(cls)
        obj.d = d
        obj._terms = {m: c for m, c in terms.items() if not _is_zero(c)}
        return obj

    @classmethod
    def zero(cls, d: int) -> "MPoly":
        return cls._from_dict(d, {})

    @classmethod
    def constant(cls, value: Any, d: int) -> "MPoly":
        return cls(d, {(0,) * d: value})

    @classmethod
    def monomial(cls, m: Sequence[int], coeff: Any = 1) -> "MPoly":
        m = _check_index(m)
        return cls(len(m), {m: coeff})

    @classmethod
    def variable(cls, i: int, d: int) -> "MPoly":
        """The coordinate z_{i+1} (zero-based index i)."""
        if not 0 <= i < d:
            raise ValueError(f"Variable index {i} out of range for d={d}")
        m = [0] * d
        m[i] = 1
        return cls(d, {tuple(m): 1})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Any], var: int = 0, d: int = 1) -> "MPoly":
        """Build sum_k coeffs[k] * z_{var+1}^k."""
        terms: Dict[MultiIndex, Any] = {}
        for k, c in enumerate(coeffs):
            m = [0] * d
            m[var] = k
            terms[tuple(m)] = c
        return cls(d, terms)

    @property
    def terms(self) -> Mapping[MultiIndex, Coefficient]:
        return dict(self._terms)

    def items(self) -> List[Tuple[MultiIndex, Coefficient]]:
        """Terms sorted in the graded order."""
        return sorted(self._terms.items(), key=lambda t: deglex_rank(t[0]))

    def support(self) -> List[MultiIndex]:
        return [m for m, _ in self.items()]

    def coeff(self, m: Sequence[int]) -> Coefficient:
        default: Coefficient = ZERO if self.is_exact else 0j
        return self._terms.get(tuple(m), default)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self._terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, ExactScalar) for c in self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self._terms), default=-1)

    def leading_rank(self) -> int:
        """Largest graded rank in the support; -1 for the zero polynomial."""
        return max((deglex_rank(m) for m in self._terms), default=-1)

    def constant_term(self) -> Coefficient:
        return self.coeff((0,) * self.d)

    def _check_dim(self, other: "MPoly") -> None:
        if other.d != self.d:
            raise ValueError(
                f"Polynomials in {self.d} and {other.d} variables cannot be combined"
            )

    def _lift(self, other: Any) -> Optional["MPoly"]:
        if isinstance(other, MPoly):
            self._check_dim(other)
            return other
        try:
            return MPoly.constant(other, self.d)
        except TypeError:
            return None

    def __add__(self, other: Any) -> "MPoly":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in o._terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return MPoly._from_dict(self.d, terms)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._from_dict(self.d, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> "MPoly":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "MPoly":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: Any) -> "MPoly":
        c = coerce_coefficient(c)
        if _is_zero(c):
            return MPoly.zero(self.d)
        return MPoly._from_dict(self.d, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other: Any) -> "MPoly":
        if not isinstance(other, MPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check_dim(other)
        terms: Dict[MultiIndex, Coefficient] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                terms[m] = terms[m] + prod if m in terms else prod
        return MPoly._from_dict(self.d, terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "MPoly":
        if isinstance(other, MPoly):
            if not other.is_constant() or other.is_zero():
                raise TypeError("Polynomials can only be divided by non-zero constants")
            other = other.constant_term()
        c = coerce_coefficient(other)
        if _is_zero(c):
            raise ZeroDivisionError("Polynomial division by zero")
        return self.scale(1 / c)

    def __pow__(self, k: int) -> "MPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("Polynomial powers must be non-negative integers")
        result = MPoly.constant(1, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, m: Sequence[int]) -> "MPoly":
        """Multiply by the monomial z^m."""
        m = tuple(m)
        return MPoly._from_dict(
            self.d,
            {tuple(a + b for a, b in zip(k, m)): c for k, c in self._terms.items()},
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return self.d == other.d and self._terms == other._terms
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return hash((self.d, frozenset(self._terms.items())))

    def dilate(self, rho: Union[int, Fraction, float]) -> "MPoly":
        """
        Return p(rho * z).

        Raises:
            ValueError: If rho is not positive
        """
        if rho <= 0:
            raise ValueError(f"Dilation factor must be positive, got {rho}")
        if isinstance(rho, float):
            return MPoly._from_dict(
                self.d,
                {m: to_complex(c) * rho ** sum(m) for m, c in self._terms.items()},
            )
        rho = Fraction(rho)
        return MPoly._from_dict(
            self.d, {m: c * rho ** sum(m) for m, c in self._terms.items()}
        )

    def conj_coeffs(self) -> "MPoly":
        return MPoly._from_dict(
            self.d, {m: c.conjugate() for m, c in self._terms.items()}
        )

    def to_float_poly(self) -> "MPoly":
        return MPoly._from_dict(
            self.d, {m: to_complex(c) for m, c in self._terms.items()}
        )

    def dense_coefficients(self, var: int = 0) -> np.ndarray:
        """
        Coefficient matrix with rows indexed by the exponent of z_{var+1}.

        Only defined for d = 2; entry [a, b] is the complex coefficient of
        z_{var+1}^a times the other variable to the power b.
        """
        if self.d != 2:
            raise ValueError("Dense coefficient matrices are only defined for d = 2")
        other = 1 - var
        shape = (max(self.degree_in(var), 0) + 1, max(self.degree_in(other), 0) + 1)
        dense = np.zeros(shape, dtype=np.complex128)
        for m, c in self._terms.items():
            dense[m[var], m[other]] += to_complex(c)
        return dense

    def __call__(self, *z: Any) -> complex:
        return poly_eval(self, z)

    def __str__(self) -> str:
        from .text import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"MPoly(d={self.d}, {self})"


def _horner(terms: Dict[MultiIndex, complex], z: Sequence[complex]) -> complex:
    if len(z) == 1:
        degree = max(m[0] for m in terms)
        coeffs = np.zeros(degree + 1, dtype=np.complex128)
        for m, c in terms.items():
            coeffs[m[0]] += c
        return complex(np.polyval(coeffs[::-1], z[0]))
    groups: Dict[int, Dict[MultiIndex, complex]] = {}
    for m, c in terms.items():
        groups.setdefault(m[0], {})[m[1:]] = c
    degree = max(groups)
    result = 0j
    for k in range(degree, -1, -1):
        inner = _horner(groups[k], z[1:]) if k in groups else 0j
        result = result * z[0] + inner
    return result


def poly_eval(p: MPoly, z: Sequence[Any]) -> complex:
    """
    Evaluate p at a complex point after demoting coefficients to doubles.

    Raises:
        ValueError: If the point has the wrong number of coordinates
    """
    if len(z) != p.d:
        raise ValueError(f"Expected {p.d} coordinates, got {len(z)}")
    if p.is_zero():
        return 0j
    point = [to_complex(v) for v in z]
    terms = {m: to_complex(c) for m, c in p._terms.items()}
    return _horner(terms, point)


def poly_arith(p: MPoly, q: Any, op: str) -> MPoly:
    """
    Combine two polynomials, or a polynomial and a scalar for "scale".

    Args:
        p: Left operand
        q: Right operand (a scalar for "scale")
        op: One of "add", "sub", "mul", "scale"
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"Unknown polynomial operation {op!r}")


def poly_sum(polys: Iterable[MPoly], d: int) -> MPoly:
    terms: Dict[MultiIndex, Coefficient] = {}
    for p in polys:
        for m, c in p._terms.items():
            terms[m] = terms[m] + c if m in terms else c
    return MPoly._from_dict(d, terms)


def from_rank_coefficients(coeffs: Sequence[Any], d: int, basis: Optional[Sequence[int]] = None) -> MPoly:
    """Build sum_i coeffs[i] * chi_{basis[i]} (basis defaults to 0, 1, ...)."""
    ranks = basis if basis is not None else range(len(coeffs))
    return MPoly(d, {deglex_unrank(j, d): c for j, c in zip(ranks, coeffs)})


__all__ = [
    "MultiIndex",
    "Coefficient",
    "MPoly",
    "deglex_rank",
    "deglex_unrank",
    "diag_threshold",
    "monomial_count",
    "monomials_upto",
    "coerce_coefficient",
    "poly_eval",
    "poly_arith",
    "poly_sum",
    "from_rank_coefficients",
]
