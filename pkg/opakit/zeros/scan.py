from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..core.errors import ConvergenceError
from ..core.mpoly import MPoly
from .roots import aberth_ehrlich

logger = logging.getLogger(__name__)

WITNESS_TOLERANCE = 1e-10
# slices whose coefficients are all below this are treated as identically zero
DEGENERATE_THRESHOLD = 1e-14


def _check_bivariate(p: MPoly) -> None:
    if p.d != 2:
        raise ValueError(f"Zero scans are defined for two variables, got d={p.d}")


def _check_face(face: int) -> int:
    if face not in (1, 2):
        raise ValueError(f"Face must be 1 or 2 (the variable on the torus), got {face}")
    return face


def slice_coefficients(p: MPoly, free: int, fixed: complex) -> NDArray[np.complex128]:
    """
    Ascending coefficients of p restricted to a line, as a polynomial in z_free.

    Args:
        p: Polynomial in two variables
        free: 1 or 2, the variable left free
        fixed: Value of the other variable
    """
    dense = p.dense_coefficients(var=free - 1)
    powers = np.asarray(fixed, dtype=np.complex128) ** np.arange(dense.shape[1])
    return dense @ powers


def _polyval(c: NDArray[np.complex128], z: complex) -> complex:
    return complex(np.polyval(c[::-1], z))


def newton_polish(c: NDArray[np.complex128], root: complex, steps: int = 8) -> complex:
    """A few Newton steps on the ascending coefficients c starting from root."""
    deriv = np.polyder(c[::-1])
    z = complex(root)
    for _ in range(steps):
        dp = complex(np.polyval(deriv, z))
        if dp == 0:
            break
        step = _polyval(c, z) / dp
        z -= step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return z


def _slice_roots(c: NDArray[np.complex128], seed: int) -> Tuple[NDArray[np.complex128], bool]:
    """Roots of one slice and whether the slice vanished identically."""
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale <= DEGENERATE_THRESHOLD:
        return np.zeros(0, dtype=np.complex128), True
    nonzero = np.nonzero(np.abs(c) > DEGENERATE_THRESHOLD * scale)[0]
    if nonzero[-1] == 0:
        return np.zeros(0, dtype=np.complex128), False
    return aberth_ehrlich(c, seed=seed).roots, False


@dataclass
class ProfileSample:
    """
    One slice of a facial profile.

    Attributes:
        t: Angle of the torus variable
        roots: Roots of the slice in the free variable
        min_modulus: Smallest root modulus (inf when the slice has no roots)
        degree: Number of roots returned
        degenerate: True when the slice vanishes identically
    """

    t: float
    roots: NDArray[np.complex128]
    min_modulus: float
    degree: int
    degenerate: bool = False


@dataclass
class FaceProfile:
    """
    Root moduli of p(z_free, e^{it}) over a uniform grid of t in (0, 2 pi).

    face is the variable placed on the torus; the other one is solved for.
    """

    poly: MPoly
    face: int
    samples: List[ProfileSample] = field(default_factory=list)

    @property
    def free(self) -> int:
        return 3 - self.face

    @property
    def global_min(self) -> float:
        finite = [s.min_modulus for s in self.samples if not s.degenerate]
        return min(finite) if finite else float("inf")

    @property
    def argmin(self) -> Optional[ProfileSample]:
        candidates = [s for s in self.samples if not s.degenerate and s.roots.size]
        if not candidates:
            return None
        return min(candidates, key=lambda s: s.min_modulus)

    @property
    def degenerate_count(self) -> int:
        return sum(s.degenerate for s in self.samples)

    def to_rows(self) -> List[Tuple[float, float]]:
        """(t, min_modulus) rows, the plottable data of the profile."""
        return [(s.t, s.min_modulus) for s in self.samples]

    def to_dict(self) -> Dict[str, Any]:
        best = self.argmin
        return {
            "poly": str(self.poly),
            "face": f"z{self.face}",
            "free": f"z{self.free}",
            "grid": len(self.samples),
            "global_min": self.global_min,
            "argmin_t": None if best is None else best.t,
            "degenerate_samples": self.degenerate_count,
        }


def profile_angles(grid: int) -> NDArray[np.float64]:
    """t_k = 2 pi (k + 1/2) / grid, symmetric under t -> 2 pi - t."""
    if grid < 1:
        raise ValueError(f"Invalid grid size: {grid}")
    return 2 * np.pi * (np.arange(grid) + 0.5) / grid


def face_profile(p: MPoly, face: int, grid: int = 1024, seed: int = 0) -> FaceProfile:
    """
    Solve p(., e^{it}) = 0 (face 2) or p(e^{it}, .) = 0 (face 1) on a grid.

    Args:
        p: Polynomial in two variables, exact or float
        face: 1 or 2, the variable swept on the unit circle
        grid: Number of samples of t
        seed: Seed for root finder restarts

    Raises:
        ValueError: If d != 2, the face is invalid or grid < 1
        ConvergenceError: If a slice cannot be solved
    """
    _check_bivariate(p)
    _check_face(face)
    free = 3 - face
    profile = FaceProfile(p, face)
    for t in profile_angles(grid):
        c = slice_coefficients(p, free, np.exp(1j * t))
        roots, degenerate = _slice_roots(c, seed)
        min_mod = float(np.min(np.abs(roots))) if roots.size else float("inf")
        profile.samples.append(ProfileSample(float(t), roots, min_mod, int(roots.size), degenerate))
    if profile.degenerate_count:
        logger.debug("Face z%d: %d degenerate slices", face, profile.degenerate_count)
    logger.debug("Face z%d profile of %s: global min %.6g", face, p, profile.global_min)
    return profile


@dataclass
class ZeroVerdict:
    """
    Outcome of the closed-bidisk zero scan.

    Attributes:
        status: "zero_free_closed", "zero_found" or "inconclusive"
        witness: A point of the closed bidisk where |p| < 1e-10 (zero_found only)
        residual: |p(witness)|
        stage: Which test decided ("affine", "anchor", "face", "grid")
        grid: Samples per face
        margin: Required excess of the face minima over 1
        face_minima: Global minimum modulus per face
        anchor_minima: Smallest root modulus of each anchor slice
        advisory_radius: Optional zero-free radius for diagonal-factor approximants
        detail: Human-readable note
    """

    status: str
    witness: Optional[Tuple[complex, complex]] = None
    residual: Optional[float] = None
    stage: str = ""
    grid: int = 0
    margin: float = 0.0
    face_minima: Dict[str, float] = field(default_factory=dict)
    anchor_minima: Dict[str, float] = field(default_factory=dict)
    advisory_radius: Optional[float] = None
    detail: str = ""

    @property
    def zero_free(self) -> bool:
        return self.status == "zero_free_closed"

    @property
    def zero_found(self) -> bool:
        return self.status == "zero_found"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [list(_pair(z)) for z in self.witness],
            "residual": self.residual,
            "stage": self.stage,
            "grid": self.grid,
            "margin": self.margin,
            "face_minima": dict(self.face_minima),
            "anchor_minima": dict(self.anchor_minima),
            "advisory_radius": self.advisory_radius,
            "detail": self.detail,
        }


def _pair(z: complex) -> Tuple[float, float]:
    return (float(z.real), float(z.imag))


def _affine_parts(p: MPoly) -> Tuple[complex, complex, complex]:
    a = complex(p(0, 0))
    b = complex(p(1, 0)) - a
    c = complex(p(0, 1)) - a
    return a, b, c


def _affine_verdict(p: MPoly, grid: int, margin: float) -> ZeroVerdict:
    """
    a + b z1 + c z2 vanishes on the closed bidisk iff |a| <= |b| + |c|.

    The witness puts both linear terms opposite to a with modulus s = |a|/(|b|+|c|).
    """
    a, b, c = _affine_parts(p)
    reach = abs(b) + abs(c)
    base = dict(stage="affine", grid=grid, margin=margin)
    if abs(a) > reach + 1e-12 * max(abs(a), 1.0):
        return ZeroVerdict(
            "zero_free_closed",
            detail=f"|a| = {abs(a):.6g} > |b| + |c| = {reach:.6g}",
            **base,  # type: ignore[arg-type]
        )
    if reach == 0:
        # a vanishes too, so p is identically zero
        return ZeroVerdict("zero_found", (0j, 0j), 0.0, detail="p is identically zero", **base)  # type: ignore[arg-type]
    s = min(abs(a) / reach, 1.0)
    u = a / abs(a) if a != 0 else 1.0
    z1 = -s * u * np.conj(b) / abs(b) if b != 0 else 0j
    z2 = -s * u * np.conj(c) / abs(c) if c != 0 else 0j
    witness = (complex(z1), complex(z2))
    residual = abs(p(*witness))
    interior = "open" if s < 1 else "closed"
    return ZeroVerdict(
        "zero_found",
        witness,
        residual,
        detail=f"|a| = {abs(a):.6g} <= |b| + |c| = {reach:.6g}; zero in the {interior} bidisk",
        **base,  # type: ignore[arg-type]
    )


def _point(free: int, value: complex, other: complex) -> Tuple[complex, complex]:
    return (value, other) if free == 1 else (other, value)


def _check_anchor(
    p: MPoly, free: int, seed: int
) -> Tuple[float, Optional[Tuple[complex, complex]], Optional[float]]:
    """
    Smallest root modulus of p on the line z_other = 0, falling back to 1/2.

    Returns (min modulus, witness or None, residual or None).
    """
    min_mod = float("inf")
    for anchor in (0.0, 0.5):
        c = slice_coefficients(p, free, anchor)
        roots, degenerate = _slice_roots(c, seed)
        if degenerate:
            witness = _point(free, 0j, complex(anchor))
            return 0.0, witness, abs(p(*witness))
        if roots.size:
            k = int(np.argmin(np.abs(roots)))
            min_mod = min(min_mod, float(abs(roots[k])))
            if abs(roots[k]) <= 1:
                r = newton_polish(c, roots[k])
                witness = _point(free, r, complex(anchor))
                return min_mod, witness, abs(p(*witness))
            break
        # constant in the free variable; try the second anchor
    return min_mod, None, None


def polydisk_zero_free(
    p: MPoly,
    grid: int = 2048,
    margin: float = 1e-3,
    seed: int = 0,
    alphas: Optional[Sequence[float]] = None,
) -> ZeroVerdict:
    """
    Grid verdict on whether p vanishes somewhere in the closed bidisk.

    Affine polynomials are decided exactly by comparing |a| with |b| + |c|.
    Otherwise the scan solves the anchor slices p(., 0) and p(0, .) and then
    both facial profiles. A root of modulus <= 1 is polished by Newton and
    reported as a witness when |p| < 1e-10 there. zero_free_closed requires
    both anchors zero-free on the closed disk and every face sample to have
    its roots beyond 1 + margin. It is a grid certificate, not a proof.

    Args:
        p: Polynomial in two variables
        grid: Samples per face
        margin: Required excess over 1 of the face minima
        seed: Root finder seed
        alphas: Optional space exponents; attaches advisory_diag_radius

    Raises:
        ValueError: If d != 2
    """
    _check_bivariate(p)
    if grid < 1:
        raise ValueError(f"Invalid grid size: {grid}")
    if margin < 0:
        raise ValueError(f"Margin must be non-negative, got {margin}")
    advisory = advisory_diag_radius(*alphas) if alphas is not None else None

    if p.degree() <= 1:
        verdict = _affine_verdict(p, grid, margin)
        verdict.advisory_radius = advisory
        logger.debug("Affine certificate for %s: %s", p, verdict.status)
        return verdict

    base: Dict[str, Any] = dict(grid=grid, margin=margin, advisory_radius=advisory)
    anchor_minima: Dict[str, float] = {}
    face_minima: Dict[str, float] = {}
    try:
        for free in (1, 2):
            min_mod, witness, residual = _check_anchor(p, free, seed)
            anchor_minima[f"z{free}"] = min_mod
            if witness is not None:
                if residual is not None and residual < WITNESS_TOLERANCE:
                    logger.debug("Anchor slice in z%d has a zero at %s", free, witness)
                    return ZeroVerdict(
                        "zero_found", witness, residual, "anchor",
                        anchor_minima=anchor_minima,
                        detail=f"root of the anchor slice in z{free} inside the closed disk",
                        **base,
                    )
                return ZeroVerdict(
                    "inconclusive", None, residual, "anchor",
                    anchor_minima=anchor_minima,
                    detail=f"anchor root in z{free} did not polish below {WITNESS_TOLERANCE:g}",
                    **base,
                )

        for face in (2, 1):
            profile = face_profile(p, face, grid, seed)
            face_minima[f"z{face}"] = profile.global_min
            for sample in profile.samples:
                if sample.degenerate:
                    witness = _point(profile.free, 0j, complex(np.exp(1j * sample.t)))
                    return ZeroVerdict(
                        "zero_found", witness, abs(p(*witness)), "face",
                        anchor_minima=anchor_minima, face_minima=face_minima,
                        detail=f"slice at t = {sample.t:.6g} vanishes identically",
                        **base,
                    )
            best = profile.argmin
            if best is not None and best.min_modulus <= 1:
                k = int(np.argmin(np.abs(best.roots)))
                fixed = complex(np.exp(1j * best.t))
                c = slice_coefficients(p, profile.free, fixed)
                r = newton_polish(c, best.roots[k])
                witness = _point(profile.free, r, fixed)
                residual = abs(p(*witness))
                if residual < WITNESS_TOLERANCE and abs(r) <= 1 + 1e-12:
                    return ZeroVerdict(
                        "zero_found", witness, residual, "face",
                        anchor_minima=anchor_minima, face_minima=face_minima,
                        detail=f"face z{face} root of modulus {abs(r):.6g}",
                        **base,
                    )
                return ZeroVerdict(
                    "inconclusive", None, residual, "face",
                    anchor_minima=anchor_minima, face_minima=face_minima,
                    detail=f"face z{face} root of modulus {abs(r):.6g} did not polish",
                    **base,
                )
    except ConvergenceError as err:
        logger.warning("Root finder failed during zero scan: %s", err)
        return ZeroVerdict(
            "inconclusive", stage="roots", anchor_minima=anchor_minima,
            face_minima=face_minima, detail=str(err), **base,
        )

    worst = min(face_minima.values())
    if worst > 1 + margin:
        return ZeroVerdict(
            "zero_free_closed", stage="grid",
            anchor_minima=anchor_minima, face_minima=face_minima,
            detail=f"face minima {worst:.6g} > 1 + {margin:g}",
            **base,
        )
    return ZeroVerdict(
        "inconclusive", stage="grid",
        anchor_minima=anchor_minima, face_minima=face_minima,
        detail=f"face minimum {worst:.6g} within the margin {margin:g} of the torus",
        **base,
    )


def advisory_diag_radius(alpha1: float, alpha2: float) -> float:
    """
    Zero-free radius for approximants carrying a (w0 - z1 z2) factor.

    2^((alpha1 + alpha2)/2) for negative exponents, capped at 1, which is the
    whole bidisk when both exponents are non-negative.
    """
    if alpha1 >= 0 and alpha2 >= 0:
        return 1.0
    return float(min(1.0, 2.0 ** ((alpha1 + alpha2) / 2)))


__all__ = [
    "WITNESS_TOLERANCE",
    "slice_coefficients",
    "newton_polish",
    "ProfileSample",
    "FaceProfile",
    "profile_angles",
    "face_profile",
    "ZeroVerdict",
    "polydisk_zero_free",
    "advisory_diag_radius",
]
