from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from ..core.errors import ConsistencyError
from ..core.mpoly import Coefficient, MPoly, MultiIndex, deglex_unrank
from ..core.scalar import ZERO, ExactScalar
from ..core.spaces import SpaceSpec, inner_product, monomial_weight
from .opa import OpaResult

logger = logging.getLogger(__name__)

MONIC = "monic"
DIFFERENCE = "opa_difference"


@dataclass
class OrthoFamily:
    """
    Orthogonal polynomials phi_0..phi_N for <p, q>_f = <p f, q f>.

    Attributes:
        space: The ambient space
        f: The weight polynomial
        members: phi_0..phi_N, each monic in its leading monomial chi_n
        norms: <phi_n, phi_n>_f
        convention: Normalization of the members; "monic" means coefficient 1
            on chi_n, unlike the approximant differences p_n - p_{n-1}
    """

    space: SpaceSpec
    f: MPoly
    members: List[MPoly]
    norms: List[Coefficient] = field(default_factory=list)
    convention: str = MONIC

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, n: int) -> MPoly:
        return self.members[n]


def weighted_gram_schmidt(space: SpaceSpec, f: MPoly, N: int) -> OrthoFamily:
    """
    Gram-Schmidt on chi_0..chi_N for the f-weighted inner product.

    phi_n = chi_n - sum_{k<n} <chi_n, phi_k>_f / <phi_k, phi_k>_f phi_k, so
    each phi_n has coefficient 1 on chi_n.

    Raises:
        ValueError: If f is zero
        ConsistencyError: If a member has zero weighted norm
    """
    if f.is_zero():
        raise ValueError("The weight polynomial f must be non-zero")
    if f.d != space.d:
        raise ValueError(f"f has {f.d} variables but the space has d={space.d}")
    members: List[MPoly] = []
    weighted: List[MPoly] = []  # phi_k * f
    norms: List[Coefficient] = []
    for n in range(N + 1):
        chi = MPoly.monomial(deglex_unrank(n, f.d))
        chi_f = chi * f
        phi = chi
        for phi_k, phi_k_f, norm_k in zip(members, weighted, norms):
            proj = inner_product(space, chi_f, phi_k_f)
            if proj:
                phi = phi - phi_k.scale(proj / norm_k)
        phi_f = phi * f
        norm = inner_product(space, phi_f, phi_f)
        if not norm:
            raise ConsistencyError(f"phi_{n} has zero weighted norm")
        members.append(phi)
        weighted.append(phi_f)
        norms.append(norm)
    return OrthoFamily(space, f, members, norms)


def opa_differences(sequence: Sequence[OpaResult]) -> List[MPoly]:
    """
    p_0^*, p_1^* - p_0^*, ..., p_N^* - p_{N-1}^*.

    Entry n >= 1 is the component of p_n^* along phi_n.
    """
    diffs: List[MPoly] = []
    previous: Optional[MPoly] = None
    for result in sequence:
        p = result.approximant
        diffs.append(p if previous is None else p - previous)
        previous = p
    return diffs


@dataclass
class RecoveryEntry:
    n: int
    kind: str  # "collinear" or "zero"
    scalar: Optional[Coefficient]
    ok: bool
    detail: str = ""


@dataclass
class RecoveryReport:
    entries: List[RecoveryEntry]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def verify_recovery(family: OrthoFamily, differences: Sequence[MPoly]) -> RecoveryReport:
    """
    Check that every approximant difference determines the orthogonal member.

    For n >= 1, p_n^* - p_{n-1}^* = <1, f phi_n> / <phi_n, phi_n>_f phi_n.
    Either the difference is a non-zero multiple of phi_n, or it vanishes and
    then <1, f phi_n> = 0 (in a Dirichlet space, phi_n f has no constant
    term).
    """
    space, f = family.space, family.f
    one = MPoly.constant(1, f.d)
    entries: List[RecoveryEntry] = []
    for n in range(1, min(len(family), len(differences))):
        phi, diff = family.members[n], differences[n]
        overlap = inner_product(space, one, phi * f)
        scalar = overlap / family.norms[n]
        if diff.is_zero():
            ok = not overlap
            entries.append(
                RecoveryEntry(n, "zero", None, bool(ok), "" if ok else f"<1, f phi_{n}> = {overlap}")
            )
            continue
        ok = bool(scalar) and diff == phi.scale(scalar)
        entries.append(
            RecoveryEntry(n, "collinear", scalar, ok, "" if ok else "difference not collinear with phi")
        )
    return RecoveryReport(entries)


@dataclass
class DiagonalEntry:
    """
    Structure of one orthogonal polynomial for f depending on z1 z2 only.

    phi_N = z_axis^gap * r(z1 z2), with r returned as a one-variable polynomial.
    """

    index: int
    leading: MultiIndex
    axis: int
    gap: int
    r: MPoly


def _diagonal_profile(f: MPoly) -> MPoly:
    for m in f.terms:
        if m[0] != m[1]:
            raise ValueError(f"f must be a polynomial in z1 z2; found monomial {m}")
    return MPoly(1, {(m[0],): c for m, c in f.terms.items()})


def diagonal_structure(space: SpaceSpec, f: MPoly, N: int) -> List[DiagonalEntry]:
    """
    Orthogonal polynomials for f(z) = q(z1 z2) split into diagonal rows.

    Every phi_n with leading monomial z1^A z2^B is z1^(A-B) r(z1 z2) when
    A >= B (or the mirror image), since monomials are orthogonal in every
    supported space.

    Raises:
        ValueError: If d != 2, f depends on more than z1 z2, or f(0) = 0
        ConsistencyError: If a member leaves its diagonal row
    """
    if space.d != 2 or f.d != 2:
        raise ValueError("Diagonal structure is defined for two variables")
    profile = _diagonal_profile(f)
    a0 = profile.constant_term()
    if not a0:
        raise ValueError("f must have a non-zero constant term")
    if a0 != 1:
        logger.debug("Normalising f by its constant term %s", a0)
        f = f / a0
    family = weighted_gram_schmidt(space, f, N)
    entries: List[DiagonalEntry] = []
    for n, phi in enumerate(family.members):
        A, B = deglex_unrank(n, 2)
        axis = 1 if A >= B else 2
        gap = abs(A - B)
        r_terms: Dict[MultiIndex, Coefficient] = {}
        for m, c in phi.terms.items():
            if axis == 1:
                ok = m[0] - m[1] == gap
                j = m[1]
            else:
                ok = m[1] - m[0] == gap
                j = m[0]
            if not ok:
                raise ConsistencyError(
                    f"phi_{n} contains z^{m}, outside the row z{axis}^{gap} (z1 z2)^j"
                )
            r_terms[(j,)] = c
        entries.append(DiagonalEntry(n, (A, B), axis, gap, MPoly(1, r_terms)))
    return entries


def weighted_orthogonal_r(m: int) -> MPoly:
    """
    r_m(x) = (1 / (m+1)) sum_{k=0}^m (k+1) x^k.

    These are orthogonal for the weight 1 - x in the one-variable Hardy space.
    """
    if m < 0:
        raise ValueError(f"Index must be non-negative, got {m}")
    scale = Fraction(1, m + 1)
    return MPoly(1, {(k,): scale * (k + 1) for k in range(m + 1)})


def hardy_diag_basis(M: int, m: int, axis: int = 1) -> MPoly:
    """
    z_axis^M r_m(z1 z2): orthogonal in H^2 of the bidisk for f = 1 - z1 z2.

    Raises:
        ValueError: If M or m is negative or axis is not 1 or 2
    """
    if M < 0:
        raise ValueError(f"Row offset must be non-negative, got {M}")
    if axis not in (1, 2):
        raise ValueError(f"Axis must be 1 or 2, got {axis}")
    r = weighted_orthogonal_r(m)
    shift = (M, 0) if axis == 1 else (0, M)
    return MPoly(2, {(j + shift[0], j + shift[1]): c for (j,), c in r.terms.items()})


def weighted_monomial_product(space: SpaceSpec, a: Sequence[Any], k: Sequence[int], l: Sequence[int]) -> Coefficient:
    """
    <z^k, z^l>_f for f(z) = sum_n a_n (z1 z2)^n, by the closed form.

    Non-zero only when k - l = (J, J); then it equals
    sum_{n=0}^{N-J} a_n conj(a_{n+J}) ||z^(k+n)||^2 (for J >= 0).
    """
    if space.d != 2:
        raise ValueError("The closed form is stated for two variables")
    coeffs = [ExactScalar.coerce(c) if ExactScalar.coerce(c) is not None else complex(c) for c in a]
    k, l = tuple(k), tuple(l)
    if k[0] - l[0] != k[1] - l[1]:
        return ZERO if space.is_exact else 0j
    J = k[0] - l[0]
    if J < 0:
        return weighted_monomial_product(space, a, l, k).conjugate()
    total: Coefficient = ZERO if space.is_exact else 0j
    for n in range(len(coeffs) - J):
        w = monomial_weight(space, (k[0] + n, k[1] + n))
        term = coeffs[n] * coeffs[n + J].conjugate() * w
        total = total + term
    return total


__all__ = [
    "MONIC",
    "DIFFERENCE",
    "OrthoFamily",
    "weighted_gram_schmidt",
    "opa_differences",
    "RecoveryEntry",
    "RecoveryReport",
    "verify_recovery",
    "DiagonalEntry",
    "diagonal_structure",
    "weighted_orthogonal_r",
    "hardy_diag_basis",
    "weighted_monomial_product",
]
