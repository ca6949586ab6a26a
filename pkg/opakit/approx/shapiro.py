from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, List, Sequence, Tuple

import numpy as np

from ..core.errors import DegenerateConfigurationError
from ..core.linalg import determinant_exact, exact_matrix
from ..core.mpoly import Coefficient, MPoly, deglex_unrank, poly_sum
from ..core.scalar import to_complex
from ..core.spaces import (
    Family,
    SpaceSpec,
    inner_product,
    kernel_eval,
    kernel_eval_exact,
    kernel_taylor,
    monomial_weight,
)

logger = logging.getLogger(__name__)

Point = Tuple[Any, ...]

_EPS = float(np.finfo(np.float64).eps)


def _kernel_gram(space: SpaceSpec, points: Sequence[Point]) -> Tuple[List[List[Any]], bool]:
    """G[i][j] = K_{lam_i}(lam_j), exact when every entry has a closed form."""
    exact_rows: List[List[Any]] = []
    for li in points:
        row = []
        for lj in points:
            value = kernel_eval_exact(space, li, lj)
            if value is None:
                break
            row.append(value)
        else:
            exact_rows.append(row)
            continue
        break
    if len(exact_rows) == len(points):
        return exact_rows, True
    return [[kernel_eval(space, li, lj) for lj in points] for li in points], False


@dataclass
class ShapiroShieldsFunction:
    """
    s(z) = A_0 + sum_m A_m K_{lam_m}(z), the bordered-determinant expansion.

    s vanishes at every lam_m and its zero set stays away from the rest of
    the domain, so s (normalised) is weakly inner.

    Attributes:
        space: The ambient space
        points: The prescribed zeros lam_1..lam_n
        cofactors: A_0 (the kernel Gram determinant) followed by A_1..A_n
        exact: Whether the cofactors are exact scalars
        scale: Factor applied by normalized()
    """

    space: SpaceSpec
    points: List[Point]
    cofactors: List[Coefficient]
    exact: bool
    scale: Coefficient = 1

    def evaluate(self, z: Sequence[Any]) -> complex:
        """Evaluate s through the closed-form kernels."""
        value = to_complex(self.cofactors[0])
        for lam, a in zip(self.points, self.cofactors[1:]):
            value += to_complex(a) * kernel_eval(self.space, lam, z)
        return value * to_complex(self.scale)

    def truncation(self, N: int, exact: bool = False) -> MPoly:
        """Taylor polynomial of degree N; exact only on request and when possible."""
        use_exact = exact and self.exact
        constant = self.cofactors[0] if use_exact else to_complex(self.cofactors[0])
        parts = [MPoly.constant(constant, self.space.d)]
        for lam, a in zip(self.points, self.cofactors[1:]):
            if use_exact:
                parts.append(kernel_taylor(self.space, lam, N).scale(a))
            else:
                lam_c = [to_complex(v) for v in lam]
                parts.append(kernel_taylor(self.space, lam_c, N).scale(to_complex(a)))
        poly = poly_sum(parts, self.space.d)
        scale = self.scale if use_exact else to_complex(self.scale)
        return poly.scale(scale)

    def norm_bound(self) -> float:
        """|A_0| ||1|| + sum |A_m| ||K_m||, an upper bound for ||s||."""
        total = abs(to_complex(self.cofactors[0])) * math.sqrt(
            float(monomial_weight(self.space, (0,) * self.space.d, exact=False))
        )
        for lam, a in zip(self.points, self.cofactors[1:]):
            total += abs(to_complex(a)) * math.sqrt(abs(kernel_eval(self.space, lam, lam)))
        return total * abs(to_complex(self.scale))

    def norm2(self) -> float:
        """||s||^2 from the kernel Gram matrix."""
        a0 = to_complex(self.cofactors[0])
        coeffs = [to_complex(a) for a in self.cofactors[1:]]
        w0 = float(monomial_weight(self.space, (0,) * self.space.d, exact=False))
        total = abs(a0) ** 2 * w0
        # <1, K_m> = 1 and <K_m, K_l> = K_m(lam_l)
        total += 2 * (a0 * sum(c.conjugate() for c in coeffs)).real
        for lm, am in zip(self.points, coeffs):
            for ll, al in zip(self.points, coeffs):
                total += (am * al.conjugate() * kernel_eval(self.space, lm, ll)).real
        return total * abs(to_complex(self.scale)) ** 2

    def normalized(self) -> "ShapiroShieldsFunction":
        """The same function scaled to unit norm."""
        norm = math.sqrt(self.norm2())
        return ShapiroShieldsFunction(
            self.space, self.points, self.cofactors, self.exact, to_complex(self.scale) / norm
        )

    def tail_envelope(self, degree: int, max_shells: int = 2000) -> float:
        """
        Bound on sum_m |A_m| |K_m(z) - K_m^{(degree)}(z)| for z among the points.

        Shells |k| = t contribute at most R^{2t} in Drury-Arveson (R the largest
        point norm) and sum_{|k|=t} prod r_i^{2 k_i} / omega(k) on the polydisk
        (r_i the largest modulus of coordinate i).
        """
        coeff_sum = sum(abs(to_complex(a)) for a in self.cofactors[1:])
        coeff_sum *= abs(to_complex(self.scale))
        if degree < 0:
            degree = -1
        if self.space.family is Family.DRURY_ARVESON:
            R2 = max(sum(abs(to_complex(c)) ** 2 for c in lam) for lam in self.points)
            return coeff_sum * R2 ** (degree + 1) / (1 - R2)
        r2 = [
            max(abs(to_complex(lam[i])) ** 2 for lam in self.points)
            for i in range(self.space.d)
        ]
        tail = 0.0
        previous = 0.0
        shell = 0.0
        for t in range(degree + 1, degree + 1 + max_shells):
            shell = 0.0
            for k in _shell(t, self.space.d):
                if self.space.family is Family.CUSTOM_OMEGA and k[0] >= len(self.space.omega):
                    continue
                term = 1.0
                for ri, ki in zip(r2, k):
                    term *= ri**ki
                shell += term / float(monomial_weight(self.space, k, exact=False))
            tail += shell
            if shell == 0.0 and self.space.family is Family.CUSTOM_OMEGA:
                break
            if previous > 0 and shell < previous and shell <= 1e-18 * tail:
                ratio = shell / previous
                tail += shell * ratio / (1 - ratio)
                break
            previous = shell
        else:
            ratio = shell / previous if previous > 0 else 1.0
            if ratio >= 1:
                return math.inf
            tail += shell * ratio / (1 - ratio)
        return coeff_sum * tail

    def rounding_floor(self) -> float:
        return 1e3 * _EPS * max(self.norm_bound(), 1.0) ** 2


def _shell(t: int, d: int) -> List[Tuple[int, ...]]:
    if d == 1:
        return [(t,)]
    out = []
    for first in range(t, -1, -1):
        for rest in _shell(t - first, d - 1):
            out.append((first,) + rest)
    return out


def _check_points(space: SpaceSpec, points: Sequence[Point]) -> List[Point]:
    checked: List[Point] = []
    for lam in points:
        lam = tuple(lam)
        if len(lam) != space.d:
            raise ValueError(f"Point {lam} does not have {space.d} coordinates")
        if all(to_complex(c) == 0 for c in lam):
            raise ValueError("The origin cannot be a prescribed zero")
        checked.append(lam)
    for i, a in enumerate(checked):
        for b in checked[i + 1 :]:
            if all(to_complex(x) == to_complex(y) for x, y in zip(a, b)):
                raise ValueError(f"Repeated point {a}")
    # domain errors surface from the kernel evaluations
    for lam in checked:
        kernel_eval(space, lam, lam)
    return checked


def shapiro_shields(space: SpaceSpec, points: Sequence[Point]) -> ShapiroShieldsFunction:
    """
    Weakly inner function vanishing at the given points.

    The bordered matrix has first row (1, 1, ..., 1) and rows
    (K_{lam_i}(z), K_{lam_i}(lam_1), ..., K_{lam_i}(lam_n)); expanding its
    determinant along the first column gives the cofactors A_0..A_n.

    Raises:
        ValueError: For an empty, repeated or zero point
        DomainError: For a point outside the open domain
        DegenerateConfigurationError: If the kernel Gram determinant vanishes
    """
    if not points:
        raise ValueError("Need at least one point")
    pts = _check_points(space, points)
    G, exact = _kernel_gram(space, pts)
    n = len(pts)
    cofactors: List[Coefficient] = []
    if exact:
        det_g = determinant_exact(exact_matrix(G))
        if not det_g:
            raise DegenerateConfigurationError("Kernel Gram determinant vanishes")
        cofactors.append(det_g)
        for m in range(1, n + 1):
            rows = [[1] * n] + [G[i] for i in range(n) if i != m - 1]
            minor = determinant_exact(exact_matrix(rows))
            cofactors.append(minor if m % 2 == 0 else -minor)
    else:
        Gc = np.array(G, dtype=np.complex128)
        det_g = complex(np.linalg.det(Gc))
        if abs(det_g) <= 1e-14 * max(1.0, float(np.abs(Gc).max()) ** n):
            raise DegenerateConfigurationError("Kernel Gram determinant vanishes")
        cofactors.append(det_g)
        for m in range(1, n + 1):
            rows = np.vstack([np.ones((1, n), dtype=np.complex128), np.delete(Gc, m - 1, axis=0)])
            minor = complex(np.linalg.det(rows))
            cofactors.append(minor if m % 2 == 0 else -minor)
    logger.debug("Shapiro-Shields cofactors (%s): %s", "exact" if exact else "float", cofactors)
    return ShapiroShieldsFunction(space, pts, cofactors, exact)


@dataclass
class SSReport:
    """
    Residuals of a truncated Shapiro-Shields function.

    Attributes:
        degree: Truncation degree N
        weak_residuals: (j, |<chi_j s_N, s_N>|, bound) for 1 <= j <= Jmax
        point_residuals: (i, |s_N(lam_i)|, bound)
        determinant_residuals: |s(lam_i)| from the closed-form kernels
    """

    degree: int
    weak_residuals: List[Tuple[int, float, float]] = field(default_factory=list)
    point_residuals: List[Tuple[int, float, float]] = field(default_factory=list)
    determinant_residuals: List[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v <= b for _, v, b in self.weak_residuals) and all(
            v <= b for _, v, b in self.point_residuals
        )

    @property
    def tail_bound(self) -> float:
        bounds = [b for _, _, b in self.weak_residuals + self.point_residuals]
        return max(bounds) if bounds else 0.0


def ss_verify(ssf: ShapiroShieldsFunction, N: int, Jmax: int, exact: bool = False) -> SSReport:
    """
    Check weak innerness and the prescribed zeros on the degree-N truncation.

    Float residuals are compared with the truncation tail envelope plus a
    rounding floor; an exact truncation of exact data is checked as is.
    """
    s_N = ssf.truncation(N, exact=exact)
    floor = 0.0 if (exact and s_N.is_exact) else ssf.rounding_floor()
    coeff_sum = sum(abs(to_complex(a)) for a in ssf.cofactors[1:]) * abs(to_complex(ssf.scale))
    report = SSReport(N)
    for j in range(1, Jmax + 1):
        e = deglex_unrank(j, ssf.space.d)
        value = inner_product(ssf.space, s_N.shift(e), s_N)
        bound = coeff_sum * ssf.tail_envelope(N - sum(e)) + floor
        report.weak_residuals.append((j, abs(to_complex(value)), bound))
    point_bound = ssf.tail_envelope(N) + floor
    for i, lam in enumerate(ssf.points):
        report.point_residuals.append((i, abs(s_N(*lam)), point_bound))
        report.determinant_residuals.append(abs(ssf.evaluate(lam)))
    return report


def hardy_bidisk_closed_form(lam: Sequence[complex], z: Sequence[complex], printed_sign: bool = False) -> complex:
    """
    Single-point Shapiro-Shields function of H^2 on the bidisk.

    [conj(l1)(l1 - z1) + conj(l2)(l2 - z2) - conj(l1 l2)(l1 l2 - z1 z2)]
    / [(1 - |l1|^2)(1 - |l2|^2)(1 - conj(l1) z1)(1 - conj(l2) z2)].
    With printed_sign the middle term reads conj(l2)(z2 - l2), the form
    that disagrees with the determinant.
    """
    l1, l2 = (complex(v) for v in lam)
    z1, z2 = (complex(v) for v in z)
    u, v = l1.conjugate(), l2.conjugate()
    middle = v * (z2 - l2) if printed_sign else v * (l2 - z2)
    num = u * (l1 - z1) + middle - u * v * (l1 * l2 - z1 * z2)
    den = (1 - abs(l1) ** 2) * (1 - abs(l2) ** 2) * (1 - u * z1) * (1 - v * z2)
    return num / den


def bergman_bidisk_closed_form(lam: Sequence[complex], z: Sequence[complex]) -> complex:
    """Single-point Shapiro-Shields function of the Bergman space of the bidisk."""
    l1, l2 = (complex(v) for v in lam)
    z1, z2 = (complex(v) for v in z)
    u, v = l1.conjugate(), l2.conjugate()
    num = (
        (u * v) ** 2 * (z1**2 * z2**2 - l1**2 * l2**2)
        + 2 * u**2 * v * (l1**2 * l2 - z1**2 * z2)
        + 2 * u * v**2 * (l1 * l2**2 - z1 * z2**2)
        + u**2 * (z1**2 - l1**2)
        + 4 * u * v * (z1 * z2 - l1 * l2)
        + v**2 * (z2**2 - l2**2)
        + 2 * u * (l1 - z1)
        + 2 * v * (l2 - z2)
    )
    den = (
        (1 - abs(l1) ** 2) ** 2
        * (1 - abs(l2) ** 2) ** 2
        * (1 - u * z1) ** 2
        * (1 - v * z2) ** 2
    )
    return num / den


def drury_arveson_closed_form(lam: Sequence[complex], z: Sequence[complex]) -> complex:
    """<lam - z, lam> / ((1 - |lam|^2)(1 - <z, lam>)) in Drury-Arveson."""
    lam_c = [complex(v) for v in lam]
    z_c = [complex(v) for v in z]
    norm2 = sum(abs(v) ** 2 for v in lam_c)
    inner = sum(zi * li.conjugate() for zi, li in zip(z_c, lam_c))
    num = sum((li - zi) * li.conjugate() for li, zi in zip(lam_c, z_c))
    return num / ((1 - norm2) * (1 - inner))


def closed_form_ratios(ssf: ShapiroShieldsFunction, closed_form: Any, samples: Sequence[Sequence[complex]]) -> np.ndarray:
    """s(z) / closed_form(lam, z) over sample points (constant when they agree)."""
    if len(ssf.points) != 1:
        raise ValueError("Closed forms are single-point formulas")
    lam = [to_complex(c) for c in ssf.points[0]]
    return np.array([ssf.evaluate(z) / closed_form(lam, z) for z in samples])


__all__ = [
    "ShapiroShieldsFunction",
    "shapiro_shields",
    "SSReport",
    "ss_verify",
    "hardy_bidisk_closed_form",
    "bergman_bidisk_closed_form",
    "drury_arveson_closed_form",
    "closed_form_ratios",
]
