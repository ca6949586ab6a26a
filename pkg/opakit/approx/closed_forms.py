from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import mpmath

from ..core.mpoly import MPoly, diag_threshold
from ..core.scalar import ExactScalar, QuadExt
from ..core.spaces import Alpha, SpaceSpec

logger = logging.getLogger(__name__)

Weight = Union[Fraction, float]


def drury_arveson_diag_weight(d: int, k: int) -> Fraction:
    """omega_d(k) = d^(dk) (k!)^d / (dk)!, the norm of (a z1...zd)^k with a = d^(d/2)."""
    if d < 1 or k < 0:
        raise ValueError(f"Need d >= 1 and k >= 0, got d={d}, k={k}")
    return Fraction(d ** (d * k) * math.factorial(k) ** d, math.factorial(d * k))


@dataclass(frozen=True)
class WeightSequence:
    """
    Positive weights omega(k) of a one-variable space with orthogonal monomials.

    Attributes:
        kind: "dirichlet", "da_diagonal" or "table"
        exponent: s for Dirichlet weights (k+1)^s, d for the ball diagonal
        table: Explicit weights for kind "table"
    """

    kind: str
    exponent: Optional[Alpha] = None
    table: Tuple[Weight, ...] = field(default=())

    @classmethod
    def dirichlet(cls, s: Alpha) -> "WeightSequence":
        return cls("dirichlet", s)

    @classmethod
    def hardy(cls) -> "WeightSequence":
        return cls("dirichlet", 0)

    @classmethod
    def drury_arveson_diag(cls, d: int) -> "WeightSequence":
        return cls("da_diagonal", d)

    @classmethod
    def from_table(cls, table: Sequence[Weight]) -> "WeightSequence":
        return cls("table", None, tuple(table))

    @classmethod
    def parse(cls, text: str) -> "WeightSequence":
        """Parse "dirichlet:s", "hardy", "da:d" or "omega:[w0,...]"."""
        text = text.strip()
        if text == "hardy":
            return cls.hardy()
        kind, _, body = text.partition(":")
        if kind == "dirichlet":
            space = SpaceSpec.parse(f"dirichlet:{body}")
            return cls.dirichlet(space.alphas[0])
        if kind == "da":
            return cls.drury_arveson_diag(int(body))
        if kind == "omega":
            return cls.from_table(SpaceSpec.parse(text).omega)
        raise ValueError(f"Unknown weight sequence {text!r}")

    @property
    def is_exact(self) -> bool:
        if self.kind == "dirichlet":
            return isinstance(self.exponent, int)
        if self.kind == "table":
            return all(isinstance(w, Fraction) for w in self.table)
        return True

    def __call__(self, k: int) -> Weight:
        if k < 0:
            raise ValueError(f"Index must be non-negative, got {k}")
        if self.kind == "dirichlet":
            if isinstance(self.exponent, int):
                return Fraction(k + 1) ** self.exponent
            return float(k + 1) ** float(self.exponent)  # type: ignore[arg-type]
        if self.kind == "da_diagonal":
            return drury_arveson_diag_weight(int(self.exponent), k)  # type: ignore[arg-type]
        if k >= len(self.table):
            raise ValueError(f"Weight table has {len(self.table)} entries; index {k} is beyond it")
        return self.table[k]

    def float_value(self, k: int) -> float:
        """omega(k) as a double; the ball diagonal goes through log-gamma."""
        if self.kind == "da_diagonal":
            d = int(self.exponent)  # type: ignore[arg-type]
            return math.exp(d * k * math.log(d) + d * math.lgamma(k + 1) - math.lgamma(d * k + 1))
        return float(self(k))

    def space(self) -> SpaceSpec:
        """The one-variable space carrying these weights."""
        if self.kind == "dirichlet":
            return SpaceSpec.dirichlet_disk(self.exponent)  # type: ignore[arg-type]
        if self.kind == "table":
            return SpaceSpec.custom_omega(self.table)
        raise ValueError("The diagonal ball weights have no table-free space; use a table")

    def describe(self) -> str:
        if self.kind == "dirichlet":
            return f"dirichlet:{self.exponent}"
        if self.kind == "da_diagonal":
            return f"da:{self.exponent}"
        return "omega:[" + ",".join(str(w) for w in self.table) + "]"


@lru_cache(maxsize=256)
def inverse_partial_sums(weights: WeightSequence, n: int) -> Tuple[Weight, ...]:
    """S_0..S_n with S_k = sum_{j<=k} 1 / omega(j)."""
    sums: List[Weight] = []
    acc: Weight = Fraction(0) if weights.is_exact else 0.0
    for k in range(n + 1):
        acc = acc + 1 / weights(k)
        sums.append(acc)
    return tuple(sums)


def fms_opa(weights: WeightSequence, n: int) -> MPoly:
    """
    Approximant of order n to 1/(1 - x) in the space with weights omega.

    The coefficient of x^k is 1 - S_k / S_{n+1}.
    """
    if n < 0:
        raise ValueError(f"Order must be non-negative, got {n}")
    sums = inverse_partial_sums(weights, n + 1)
    total = sums[n + 1]
    return MPoly(1, {(k,): 1 - sums[k] / total for k in range(n + 1)})


@dataclass
class DistanceResult:
    """
    Distance from 1 to (1 - x) * polynomials.

    Attributes:
        nu2_exact: Exact squared distance (finite orders with exact weights)
        nu: The distance as a double
        cyclic: Whether the limit distance is zero
        tail_bound: Error bound of a truncated series, if one was used
    """

    nu: float
    nu2_exact: Optional[Fraction] = None
    cyclic: Optional[bool] = None
    tail_bound: Optional[float] = None
    method: str = "partial_sum"


def tail_corrected_inverse_sum(weights: WeightSequence, terms: int) -> Tuple[float, float]:
    """
    sum_k 1/omega(k) estimated from `terms` terms plus a power-law tail.

    The tail is fitted from the last term and the decay exponent measured
    between k = terms/2 and k = terms.

    Returns:
        (estimate, size of the tail correction); the estimate is inf when the
        fitted exponent is at most 1
    """
    if terms < 4:
        raise ValueError("Need at least four terms to fit a tail")
    partial = 0.0
    for k in range(terms + 1):
        partial += 1 / weights.float_value(k)
    t_last = 1 / weights.float_value(terms)
    t_half = 1 / weights.float_value(terms // 2)
    p = math.log(t_half / t_last) / math.log(terms / (terms // 2))
    if p <= 1:
        return math.inf, math.inf
    tail = t_last * terms / (p - 1)
    return partial + tail, tail


def fms_distance(weights: WeightSequence, n: Optional[int] = None, terms: int = 500) -> DistanceResult:
    """
    Distance nu_n for finite n, or its limit when n is None.

    Finite orders use nu_n^2 = 1 / S_{n+1}. The limit is 1 / sqrt(sum 1/omega);
    Dirichlet weights use the zeta function, other weights a tail-corrected
    series of `terms` terms.
    """
    if n is not None:
        total = inverse_partial_sums(weights, n + 1)[n + 1]
        nu2 = 1 / total
        exact = nu2 if isinstance(nu2, Fraction) else None
        return DistanceResult(math.sqrt(float(nu2)), exact, None, None, "partial_sum")
    if weights.kind == "dirichlet":
        s = float(weights.exponent)  # type: ignore[arg-type]
        if s <= 1:
            return DistanceResult(0.0, None, True, None, "zeta")
        return DistanceResult(float(1 / mpmath.sqrt(mpmath.zeta(s))), None, False, 0.0, "zeta")
    if weights.kind == "table":
        raise ValueError("A finite weight table has no limit distance")
    estimate, tail = tail_corrected_inverse_sum(weights, terms)
    if math.isinf(estimate):
        return DistanceResult(0.0, None, True, None, "tail_corrected")
    return DistanceResult(1 / math.sqrt(estimate), None, False, tail, "tail_corrected")


@dataclass(frozen=True)
class DiagonalTarget:
    """
    1 - a z1...zd in a bidisk Dirichlet space or the Drury-Arveson ball.

    Attributes:
        kind: "bidisk" or "ball"
        alphas: Exponents (bidisk only)
        d: Number of variables
    """

    kind: str
    d: int = 2
    alphas: Tuple[Alpha, ...] = ()

    @classmethod
    def bidisk(cls, alpha1: Alpha, alpha2: Alpha) -> "DiagonalTarget":
        return cls("bidisk", 2, (alpha1, alpha2))

    @classmethod
    def ball(cls, d: int) -> "DiagonalTarget":
        if d < 1:
            raise ValueError(f"Dimension must be positive, got {d}")
        return cls("ball", d)

    @classmethod
    def parse(cls, text: str) -> "DiagonalTarget":
        """"bidisk:a1,a2" or "ball:d"."""
        kind, _, body = text.strip().partition(":")
        if kind == "bidisk":
            space = SpaceSpec.parse(f"dirichlet:{body}")
            if space.d != 2:
                raise ValueError("bidisk targets need two exponents")
            return cls.bidisk(*space.alphas)
        if kind == "ball":
            return cls.ball(int(body))
        raise ValueError(f"Unknown diagonal target {text!r}")

    def space(self) -> SpaceSpec:
        if self.kind == "bidisk":
            return SpaceSpec.dirichlet_bidisk(*self.alphas)
        return SpaceSpec.drury_arveson(self.d)

    def weights(self) -> WeightSequence:
        """Weights of the one-variable space that x = a z1...zd lives in."""
        if self.kind == "bidisk":
            a1, a2 = self.alphas
            s = a1 + a2
            if isinstance(s, Fraction) and s.denominator == 1:
                s = s.numerator
            return WeightSequence.dirichlet(s)
        return WeightSequence.drury_arveson_diag(self.d)

    def scale(self) -> Union[ExactScalar, float]:
        """a = 1 on the bidisk, d^(d/2) on the ball (exact when rational)."""
        if self.kind == "bidisk":
            return ExactScalar.coerce(1)  # type: ignore[return-value]
        if self.d % 2 == 0:
            return ExactScalar.coerce(self.d ** (self.d // 2))  # type: ignore[return-value]
        root = math.isqrt(self.d)
        if root * root == self.d:
            return ExactScalar.coerce(root**self.d)  # type: ignore[return-value]
        return float(self.d) ** (self.d / 2)

    def target_poly(self) -> MPoly:
        mono = (1,) * self.d
        return MPoly(self.d, {(0,) * self.d: 1, mono: -self.scale()})


def substitute_diagonal(q: MPoly, a: Union[ExactScalar, float], d: int) -> MPoly:
    """q(a z1...zd) for a one-variable q."""
    if q.d != 1:
        raise ValueError("Expected a one-variable polynomial")
    terms: Dict[Tuple[int, ...], Any] = {}
    for (k,), c in q.terms.items():
        terms[(k,) * d] = c * a**k
    return MPoly(d, terms)


@dataclass
class DiagEmbedResult:
    """
    Approximant to 1/(1 - a z1...zd) through the one-variable formula.

    Attributes:
        approximant: p_n^* in d variables
        order: n in the one-variable formula
        valid_ranks: The approximant is optimal for every rank in [start, stop)
        weights: One-variable weights used
    """

    approximant: MPoly
    order: int
    valid_ranks: Tuple[int, int]
    weights: WeightSequence


def diag_embed_opa(target: DiagonalTarget, n: int) -> DiagEmbedResult:
    """
    Approximants to 1/(1 - a z1...zd) from the one-variable closed form.

    The result is p_N^* for every N with diag(n) <= N < diag(n+1), where
    diag(n) is the rank of (z1...zd)^n.
    """
    weights = target.weights()
    q = fms_opa(weights, n)
    a = target.scale()
    if not weights.is_exact or isinstance(a, float):
        q = q.to_float_poly()
    p = substitute_diagonal(q, a, target.d)
    valid = (diag_threshold(n, target.d), diag_threshold(n + 1, target.d))
    logger.debug("diagonal approximant of order %d valid for ranks %s", n, valid)
    return DiagEmbedResult(p, n, valid, weights)


@dataclass
class CyclicityResult:
    classification: str  # "cyclic" or "non_cyclic"
    nu_limit: float
    method: str


def cyclicity_classify(target: DiagonalTarget, terms: int = 4000) -> CyclicityResult:
    """
    Whether 1 - a z1...zd is cyclic, with the limit distance otherwise.

    Bidisk: cyclic iff alpha1 + alpha2 <= 1; otherwise the limit is
    1 / sqrt(zeta(alpha1 + alpha2)). Ball: cyclic iff d <= 3.
    """
    if target.kind == "bidisk":
        s = float(sum(target.alphas))
        if s <= 1:
            return CyclicityResult("cyclic", 0.0, "zeta")
        return CyclicityResult("non_cyclic", float(1 / mpmath.sqrt(mpmath.zeta(s))), "zeta")
    if target.d <= 3:
        return CyclicityResult("cyclic", 0.0, "growth")
    result = fms_distance(target.weights(), None, terms)
    return CyclicityResult("non_cyclic", result.nu, "tail_corrected")


@dataclass
class AsymptoticRow:
    k: int
    weight: float
    ratio: float  # omega_d(k) / k^((d-1)/2)


@dataclass
class AsymptoticTable:
    d: int
    rows: List[AsymptoticRow]
    drift: float  # relative spread of the ratio over [kmax/2, kmax]


def da_weight_asymptotic(d: int, kmax: int) -> AsymptoticTable:
    """
    omega_d(k) against k^((d-1)/2) for k = 1..kmax.

    Raises:
        ValueError: If kmax < 10
    """
    if kmax < 10:
        raise ValueError(f"kmax must be at least 10, got {kmax}")
    if d < 1:
        raise ValueError(f"Dimension must be positive, got {d}")
    rows: List[AsymptoticRow] = []
    power = (d - 1) / 2
    for k in range(1, kmax + 1):
        w = float(drury_arveson_diag_weight(d, k))
        rows.append(AsymptoticRow(k, w, w / k**power))
    tail = [r.ratio for r in rows if r.k >= kmax // 2]
    drift = (max(tail) - min(tail)) / min(tail)
    return AsymptoticTable(d, rows, drift)


def hardy_one_variable_opa(n: int) -> MPoly:
    """q_n(x) = sum_k (1 - (k+1)/(n+2)) x^k, the Hardy approximant to 1/(1 - x)."""
    return fms_opa(WeightSequence.hardy(), n)


def _ball_degree(N: int) -> int:
    n = 0
    while n * (n + 3) // 2 < N:
        n += 1
    if n * (n + 3) // 2 != N:
        raise ValueError(
            f"N={N} is not of the form n(n+3)/2; the rotated approximant needs complete degrees"
        )
    return n


def ball_rotation_opa(N: int) -> MPoly:
    """
    Approximant to 1/(1 - (z1 + z2)/sqrt 2) in Drury-Arveson on the 2-ball.

    Unitary invariance maps it to q_n((z1 + z2)/sqrt 2) with q_n the Hardy
    approximant; valid when the first N+1 monomials are all those of degree
    at most n, i.e. N = n(n+3)/2.

    Raises:
        ValueError: If N is not of that form
    """
    n = _ball_degree(N)
    q = hardy_one_variable_opa(n)
    inv_sqrt2 = ExactScalar._raw(QuadExt(0, Fraction(1, 2)), QuadExt(0))
    x = (MPoly.variable(0, 2) + MPoly.variable(1, 2)).scale(inv_sqrt2)
    result = MPoly.zero(2)
    for k in range(q.degree(), -1, -1):
        result = result * x + MPoly.constant(q.coeff((k,)), 2)
    return result


def ball_rotation_target() -> MPoly:
    inv_sqrt2 = ExactScalar._raw(QuadExt(0, Fraction(1, 2)), QuadExt(0))
    return MPoly(2, {(0, 0): 1, (1, 0): -inv_sqrt2, (0, 1): -inv_sqrt2})


@dataclass
class RateRow:
    n: int
    rotated: float  # 1/(n+2): distance for the rotated target in degree n
    diagonal: float  # distance for 1 - 2 z1 z2 at the same rank


def ball_distance_rates(max_degree: int) -> List[RateRow]:
    """
    Squared distances of two non-cyclic-looking targets in Drury-Arveson(2).

    The rotated target reaches nu^2 = 1/(n+2) with all monomials of degree
    <= n; the diagonal target 1 - 2 z1 z2 at the same rank only sees
    diagonal powers up to floor(n/2), giving nu^2 = 1 / S_{floor(n/2)+1}.
    """
    rows: List[RateRow] = []
    weights = WeightSequence.drury_arveson_diag(2)
    for n in range(max_degree + 1):
        diag = fms_distance(weights, n // 2)
        rows.append(RateRow(n, 1 / (n + 2), diag.nu**2))
    return rows


def stirling_check(d: int, k: int) -> float:
    """Relative error of the Stirling estimate omega_d(k) ~ (2 pi k)^((d-1)/2) / sqrt(d)."""
    exact = float(drury_arveson_diag_weight(d, k))
    estimate = (2 * math.pi * k) ** ((d - 1) / 2) / math.sqrt(d)
    return abs(exact - estimate) / exact


__all__ = [
    "WeightSequence",
    "drury_arveson_diag_weight",
    "inverse_partial_sums",
    "fms_opa",
    "DistanceResult",
    "fms_distance",
    "tail_corrected_inverse_sum",
    "DiagonalTarget",
    "DiagEmbedResult",
    "diag_embed_opa",
    "substitute_diagonal",
    "CyclicityResult",
    "cyclicity_classify",
    "AsymptoticTable",
    "da_weight_asymptotic",
    "hardy_one_variable_opa",
    "ball_rotation_opa",
    "ball_rotation_target",
    "ball_distance_rates",
    "stirling_check",
]
