from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Sequence, Tuple, Union

import mpmath

from .errors import DomainError, ModeError, ParseError
from .mpoly import Coefficient, MPoly, MultiIndex, monomial_count, monomials_upto
from .scalar import ZERO, ExactScalar, to_complex

Alpha = Union[int, Fraction, float]
Weight = Union[Fraction, float]


class Family(str, enum.Enum):
    DIRICHLET = "dirichlet"
    DRURY_ARVESON = "drury_arveson"
    CUSTOM_OMEGA = "custom_omega"


class KernelFamily(str, enum.Enum):
    SZEGO = "szego"
    BERGMAN_DISK = "bergman_disk"
    PRODUCT_OF_DIRICHLET = "product_of_dirichlet"
    DRURY_ARVESON = "drury_arveson"
    WEIGHTED_SERIES = "weighted_series"


def _normalize_alpha(alpha: Alpha) -> Alpha:
    if isinstance(alpha, bool):
        raise TypeError("Booleans are not valid exponents")
    if isinstance(alpha, float):
        if not math.isfinite(alpha):
            raise ValueError(f"Exponent must be finite, got {alpha}")
        return int(alpha) if alpha.is_integer() else alpha
    if isinstance(alpha, Fraction):
        return alpha.numerator if alpha.denominator == 1 else alpha
    if isinstance(alpha, int):
        return alpha
    raise TypeError(f"Unsupported exponent type {type(alpha).__name__}")


@dataclass(frozen=True)
class SpaceSpec:
    """
    A reproducing kernel Hilbert space with orthogonal monomials.

    Dirichlet-type spaces on the polydisk have weights
    prod_i (k_i + 1)^alpha_i (alpha = 0 is Hardy, alpha = -1 Bergman);
    the Drury-Arveson space on the d-ball has weights k! / |k|!; a custom
    one-variable space takes its weights from an explicit table.

    Attributes:
        family: Which family of weights
        alphas: Exponents per variable (Dirichlet family only)
        d: Number of variables
        omega: Weight table (custom family only)
    """

    family: Family
    d: int
    alphas: Tuple[Alpha, ...] = ()
    omega: Tuple[Weight, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.d < 1:
            raise ValueError(f"Number of variables must be positive, got {self.d}")
        if self.family is Family.DIRICHLET:
            if len(self.alphas) != self.d:
                raise ValueError(f"Need {self.d} exponents, got {len(self.alphas)}")
            object.__setattr__(
                self, "alphas", tuple(_normalize_alpha(a) for a in self.alphas)
            )
        elif self.family is Family.CUSTOM_OMEGA:
            if self.d != 1:
                raise ValueError("Custom weight tables describe one-variable spaces")
            if not self.omega:
                raise ValueError("Custom weight table is empty")
            table = tuple(
                Fraction(w) if isinstance(w, (int, Fraction)) else float(w)
                for w in self.omega
            )
            if any(w <= 0 for w in table):
                raise ValueError("Weights must be strictly positive")
            object.__setattr__(self, "omega", table)

    @classmethod
    def dirichlet_disk(cls, alpha: Alpha) -> "SpaceSpec":
        return cls(Family.DIRICHLET, 1, (alpha,))

    @classmethod
    def dirichlet_bidisk(cls, alpha1: Alpha, alpha2: Alpha) -> "SpaceSpec":
        return cls(Family.DIRICHLET, 2, (alpha1, alpha2))

    @classmethod
    def dirichlet_polydisk(cls, alphas: Sequence[Alpha]) -> "SpaceSpec":
        return cls(Family.DIRICHLET, len(alphas), tuple(alphas))

    @classmethod
    def hardy(cls, d: int = 2) -> "SpaceSpec":
        return cls(Family.DIRICHLET, d, (0,) * d)

    @classmethod
    def bergman(cls, d: int = 2) -> "SpaceSpec":
        return cls(Family.DIRICHLET, d, (-1,) * d)

    @classmethod
    def drury_arveson(cls, d: int) -> "SpaceSpec":
        return cls(Family.DRURY_ARVESON, d)

    @classmethod
    def custom_omega(cls, table: Sequence[Weight]) -> "SpaceSpec":
        return cls(Family.CUSTOM_OMEGA, 1, omega=tuple(table))

    @classmethod
    def parse(cls, text: str) -> "SpaceSpec":
        """
        Parse a space descriptor.

        Accepted forms are "dirichlet:a1,...,ad", "da:d", "omega:[w0,w1,...]"
        and the shorthands "hardy", "hardy2", "bergman", "bergman2",
        "dirichlet2" (alpha = 1 in both variables).

        Raises:
            ParseError: If the descriptor is malformed
        """
        from .text import parse_scalar

        raw = text.strip()
        aliases = {
            "hardy": "dirichlet:0",
            "hardy2": "dirichlet:0,0",
            "bergman": "dirichlet:-1",
            "bergman2": "dirichlet:-1,-1",
            "dirichlet2": "dirichlet:1,1",
        }
        raw = aliases.get(raw.lower(), raw)
        kind, _, body = raw.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "dirichlet":
                values = [_parse_alpha(part) for part in body.split(",")]
                return cls.dirichlet_polydisk(values)
            if kind in ("da", "drury_arveson"):
                return cls.drury_arveson(int(body))
            if kind == "omega":
                inner = body.strip()
                if not (inner.startswith("[") and inner.endswith("]")):
                    raise ValueError("weight table must be written [w0,w1,...]")
                table = []
                for part in inner[1:-1].split(","):
                    value = parse_scalar(part)
                    if isinstance(value, ExactScalar):
                        if not value.is_rational():
                            raise ValueError("weights must be rational or decimal")
                        table.append(value.re.a)
                    else:
                        table.append(value.real)
                return cls.custom_omega(table)
        except ParseError:
            raise
        except (ValueError, TypeError) as e:
            raise ParseError(f"Invalid space descriptor {text!r}: {e}", 0, text) from e
        raise ParseError(f"Unknown space family {kind!r}", 0, text)

    def describe(self) -> str:
        """Canonical descriptor text; SpaceSpec.parse inverts it."""
        if self.family is Family.DIRICHLET:
            return "dirichlet:" + ",".join(_format_alpha(a) for a in self.alphas)
        if self.family is Family.DRURY_ARVESON:
            return f"da:{self.d}"
        return "omega:[" + ",".join(_format_alpha(w) for w in self.omega) + "]"

    def __str__(self) -> str:
        return self.describe()

    @property
    def is_exact(self) -> bool:
        """Whether every monomial weight is rational."""
        if self.family is Family.DIRICHLET:
            return all(isinstance(a, int) for a in self.alphas)
        if self.family is Family.CUSTOM_OMEGA:
            return all(isinstance(w, Fraction) for w in self.omega)
        return True

    @property
    def domain(self) -> str:
        return "ball" if self.family is Family.DRURY_ARVESON else "polydisk"

    @property
    def kernel_family(self) -> KernelFamily:
        if self.family is Family.DRURY_ARVESON:
            return KernelFamily.DRURY_ARVESON
        if self.family is Family.CUSTOM_OMEGA:
            return KernelFamily.WEIGHTED_SERIES
        if self.d == 1 and self.alphas[0] == 0:
            return KernelFamily.SZEGO
        if self.d == 1 and self.alphas[0] == -1:
            return KernelFamily.BERGMAN_DISK
        return KernelFamily.PRODUCT_OF_DIRICHLET


def _parse_alpha(text: str) -> Alpha:
    text = text.strip()
    if re.fullmatch(r"[-+]?\d+(/\d+)?", text):
        return _normalize_alpha(Fraction(text))
    return _normalize_alpha(float(text))


def _format_alpha(a: Alpha) -> str:
    if isinstance(a, Fraction):
        return f"{a.numerator}/{a.denominator}" if a.denominator != 1 else str(a.numerator)
    return repr(a) if isinstance(a, float) else str(a)


@lru_cache(maxsize=65536)
def _exact_weight(space: SpaceSpec, k: MultiIndex) -> Fraction:
    if space.family is Family.DIRICHLET:
        w = Fraction(1)
        for ki, alpha in zip(k, space.alphas):
            w *= Fraction(ki + 1) ** alpha
        return w
    if space.family is Family.DRURY_ARVESON:
        num = 1
        for ki in k:
            num *= math.factorial(ki)
        return Fraction(num, math.factorial(sum(k)))
    return space.omega[k[0]]  # type: ignore[return-value]


@lru_cache(maxsize=65536)
def _float_weight(space: SpaceSpec, k: MultiIndex) -> float:
    if space.family is Family.DIRICHLET:
        w = 1.0
        for ki, alpha in zip(k, space.alphas):
            w *= float(ki + 1) ** float(alpha)
        return w
    if space.family is Family.DRURY_ARVESON:
        return float(_exact_weight(space, k))
    return float(space.omega[k[0]])


def monomial_weight(space: SpaceSpec, k: Sequence[int], exact: Optional[bool] = None) -> Weight:
    """
    The squared norm omega(k) of the monomial z^k.

    Args:
        space: The space
        k: Exponent tuple of length d
        exact: Force exact (Fraction) or float output; defaults to the space's mode

    Raises:
        ModeError: If exact output is requested for irrational weights
        ValueError: If k is beyond a custom weight table
    """
    k = tuple(k)
    if len(k) != space.d:
        raise ValueError(f"Multi-index {k} does not match d={space.d}")
    if space.family is Family.CUSTOM_OMEGA and k[0] >= len(space.omega):
        raise ValueError(
            f"Weight table has {len(space.omega)} entries; index {k[0]} is beyond it"
        )
    if exact is None:
        exact = space.is_exact
    if exact:
        if not space.is_exact:
            raise ModeError(f"Space {space} has irrational weights; use float mode")
        return _exact_weight(space, k)
    return _float_weight(space, k)


def inner_product(space: SpaceSpec, p: MPoly, q: MPoly) -> Coefficient:
    """
    <p, q> = sum_k omega(k) p_k conj(q_k).

    Exact when the space and both polynomials are exact, complex otherwise.
    """
    if p.d != space.d or q.d != space.d:
        raise ValueError(f"Polynomials must have d={space.d} variables")
    exact = space.is_exact and p.is_exact and q.is_exact
    small, large, swapped = (p, q, False) if len(p) <= len(q) else (q, p, True)
    large_terms = large.terms
    if exact:
        total: Coefficient = ZERO
        for m, c in small.terms.items():
            other = large_terms.get(m)
            if other is None:
                continue
            w = monomial_weight(space, m, exact=True)
            pc, qc = (other, c) if swapped else (c, other)
            total = total + pc * qc.conjugate() * w
        return total
    acc = 0j
    for m, c in small.terms.items():
        other = large_terms.get(m)
        if other is None:
            continue
        pc, qc = (other, c) if swapped else (c, other)
        acc += monomial_weight(space, m, exact=False) * to_complex(pc) * to_complex(qc).conjugate()
    return acc


def norm_squared(space: SpaceSpec, p: MPoly) -> Coefficient:
    return inner_product(space, p, p)


def weighted_inner_product(space: SpaceSpec, f: MPoly, p: MPoly, q: MPoly) -> Coefficient:
    """
    <p, q>_f = <p f, q f>.

    Raises:
        ValueError: If f is the zero polynomial
    """
    if f.is_zero():
        raise ValueError("The weight polynomial f must be non-zero")
    return inner_product(space, p * f, q * f)


def _check_domain(space: SpaceSpec, point: Sequence[complex], name: str) -> None:
    if len(point) != space.d:
        raise ValueError(f"{name} must have {space.d} coordinates")
    if space.domain == "ball":
        r2 = sum(abs(c) ** 2 for c in point)
        if r2 >= 1:
            raise DomainError(f"{name}={tuple(point)} is not in the open unit ball")
    elif any(abs(c) >= 1 for c in point):
        raise DomainError(f"{name}={tuple(point)} is not in the open unit polydisk")


def _disk_kernel(alpha: Alpha, w: complex, truncation: Optional[int]) -> complex:
    if isinstance(alpha, int):
        if alpha == 0:
            return 1 / (1 - w)
        if alpha == -1:
            return 1 / (1 - w) ** 2
        if w == 0:
            return 1 + 0j
        # sum_k w^k / (k+1)^alpha = Li_alpha(w) / w
        return complex(mpmath.polylog(alpha, w) / w)
    if truncation is None:
        raise ModeError(
            f"Kernel for non-integer exponent {alpha} needs a truncation degree"
        )
    return sum(w**k / (k + 1) ** float(alpha) for k in range(truncation + 1))


def kernel_eval(space: SpaceSpec, lam: Sequence[Any], z: Sequence[Any], truncation: Optional[int] = None) -> complex:
    """
    Reproducing kernel K_lam(z), so that <p, K_lam> = p(lam).

    Args:
        space: The space
        lam: Kernel centre inside the open domain
        z: Evaluation point inside the open domain
        truncation: Degree of the Taylor sum for non-integer exponents

    Raises:
        DomainError: If lam or z is outside the open domain
        ModeError: For non-integer exponents without a truncation degree
    """
    lam_c = [to_complex(v) for v in lam]
    z_c = [to_complex(v) for v in z]
    _check_domain(space, lam_c, "lambda")
    _check_domain(space, z_c, "z")
    if space.family is Family.DRURY_ARVESON:
        inner = sum(zi * li.conjugate() for zi, li in zip(z_c, lam_c))
        return 1 / (1 - inner)
    if space.family is Family.CUSTOM_OMEGA:
        w = z_c[0] * lam_c[0].conjugate()
        terms = range(len(space.omega) if truncation is None else min(truncation + 1, len(space.omega)))
        return sum(w**k / float(space.omega[k]) for k in terms)
    value = 1 + 0j
    for alpha, li, zi in zip(space.alphas, lam_c, z_c):
        value *= _disk_kernel(alpha, li.conjugate() * zi, truncation)
    return value


def kernel_eval_exact(space: SpaceSpec, lam: Sequence[Any], z: Sequence[Any]) -> Optional[ExactScalar]:
    """
    Kernel value in exact arithmetic when it is a rational function of the data.

    Returns None when no exact closed form exists (for instance alpha = 1,
    whose kernel involves a logarithm) or when a coordinate is not exact.
    """
    lam_e = [ExactScalar.coerce(v) for v in lam]
    z_e = [ExactScalar.coerce(v) for v in z]
    if any(v is None for v in lam_e + z_e):
        return None
    _check_domain(space, [to_complex(v) for v in lam], "lambda")
    _check_domain(space, [to_complex(v) for v in z], "z")
    if space.family is Family.DRURY_ARVESON:
        inner = ZERO
        for zi, li in zip(z_e, lam_e):
            inner = inner + zi * li.conjugate()  # type: ignore[union-attr]
        return 1 / (1 - inner)
    if space.family is Family.CUSTOM_OMEGA:
        if not space.is_exact:
            return None
        w = z_e[0] * lam_e[0].conjugate()  # type: ignore[union-attr]
        total = ZERO
        for k, wk in enumerate(space.omega):
            total = total + w**k / wk
        return total
    value = ExactScalar.coerce(1)
    for alpha, li, zi in zip(space.alphas, lam_e, z_e):
        w = li.conjugate() * zi  # type: ignore[union-attr]
        if alpha == 0:
            value = value / (1 - w)
        elif alpha == -1:
            value = value / ((1 - w) * (1 - w))
        else:
            return None
    return value


def kernel_taylor(space: SpaceSpec, lam: Sequence[Any], degree: int) -> MPoly:
    """
    Taylor polynomial sum_{|k| <= degree} conj(lam^k) / omega(k) z^k of K_lam.

    Exact when lam and the weights are exact, float-mode otherwise.
    """
    if degree < 0:
        raise ValueError(f"Truncation degree must be non-negative, got {degree}")
    count = monomial_count(degree, space.d)
    if space.family is Family.CUSTOM_OMEGA:
        count = min(count, len(space.omega))
    lam_e = [ExactScalar.coerce(v) for v in lam]
    exact = space.is_exact and all(v is not None for v in lam_e)
    terms = {}
    if exact:
        conj = [v.conjugate() for v in lam_e]  # type: ignore[union-attr]
        for k in monomials_upto(count - 1, space.d):
            c = ExactScalar.coerce(1)
            for ci, ki in zip(conj, k):
                c = c * ci**ki
            terms[k] = c / _exact_weight(space, k)
    else:
        conj_c = [to_complex(v).conjugate() for v in lam]
        for k in monomials_upto(count - 1, space.d):
            c = 1 + 0j
            for ci, ki in zip(conj_c, k):
                c *= ci**ki
            terms[k] = c / monomial_weight(space, k, exact=False)
    return MPoly(space.d, terms)


__all__ = [
    "Family",
    "KernelFamily",
    "SpaceSpec",
    "monomial_weight",
    "inner_product",
    "norm_squared",
    "weighted_inner_product",
    "kernel_eval",
    "kernel_eval_exact",
    "kernel_taylor",
]
