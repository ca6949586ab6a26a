from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from ..core.errors import ConvergenceError

logger = logging.getLogger(__name__)

# coefficients below this fraction of the largest one are dropped from the top
TRIM_THRESHOLD = 1e-14
RESIDUAL_TOLERANCE = 1e-10


@dataclass
class RootResult:
    """
    Roots of a one-variable polynomial.

    Attributes:
        roots: Complex roots (degree many after trimming)
        residuals: Backward errors |q(r)| / sum_k |c_k| |r|^k, one per root, checked
            against RESIDUAL_TOLERANCE (scaled_residuals gives |q(r)| / max_k |c_k|)
        degree: Degree after trimming
        trimmed: Number of leading coefficients dropped
        trim_threshold: Absolute threshold used for trimming
        iterations: Iterations of the final attempt
        restarts: Perturbed restarts that were needed
    """

    roots: NDArray[np.complex128]
    residuals: NDArray[np.float64]
    degree: int
    trimmed: int
    trim_threshold: float
    iterations: int = 0
    restarts: int = 0


def trim_coefficients(coeffs: Sequence[complex], threshold: float = TRIM_THRESHOLD) -> tuple:
    """
    Drop negligible top-degree coefficients.

    Args:
        coeffs: Ascending coefficients c_0..c_n
        threshold: Relative size below which a leading coefficient is dropped

    Returns:
        (trimmed ascending coefficients, number dropped, absolute threshold)
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size == 0:
        return c, 0, 0.0
    scale = float(np.max(np.abs(c)))
    cutoff = threshold * scale
    top = c.size - 1
    while top > 0 and abs(c[top]) <= cutoff:
        top -= 1
    return c[: top + 1], c.size - 1 - top, cutoff


def _backward_residuals(c: NDArray[np.complex128], roots: NDArray[np.complex128]) -> NDArray[np.float64]:
    values = np.abs(np.polyval(c[::-1], roots))
    scale = np.polyval(np.abs(c[::-1]), np.abs(roots))
    return values / np.where(scale > 0, scale, 1.0)


def scaled_residuals(coeffs: Sequence[complex], roots: Sequence[complex]) -> NDArray[np.float64]:
    """|q(r)| / max_k |c_k| for every root r of q = sum_k coeffs[k] z^k."""
    c = np.asarray(coeffs, dtype=np.complex128)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    values = np.abs(np.polyval(c[::-1], np.asarray(roots, dtype=np.complex128)))
    return values / (scale if scale > 0 else 1.0)


def _initial_guesses(c: NDArray[np.complex128], rng: Optional[np.random.Generator]) -> NDArray[np.complex128]:
    n = c.size - 1
    lead = c[-1]
    # Cauchy bound
    radius = 1.0 + float(np.max(np.abs(c[:-1] / lead)))
    # lower estimate from the constant term keeps guesses near small roots
    inner = abs(c[0] / lead) ** (1.0 / n) if c[0] != 0 else radius / 2
    r = min(radius, max(inner, 1e-3))
    offset = 0.4 if rng is None else rng.uniform(0, 2 * np.pi)
    angles = 2 * np.pi * np.arange(n) / n + offset
    guesses = r * np.exp(1j * angles)
    if rng is not None:
        guesses *= 1 + 0.1 * rng.standard_normal(n)
    return guesses.astype(np.complex128)


def aberth_ehrlich(
    coeffs: Sequence[complex],
    tol: float = 1e-12,
    max_iter: int = 200,
    restarts: int = 10,
    seed: int = 0,
) -> RootResult:
    """
    Simultaneous root iteration of Aberth and Ehrlich.

    Each estimate x_i moves by w_i / (1 - w_i sum_{j != i} 1/(x_i - x_j))
    with w_i = q(x_i) / q'(x_i). Non-converged runs restart from randomly
    perturbed guesses drawn from a seeded generator.

    Args:
        coeffs: Ascending coefficients
        tol: Relative step size declaring convergence
        max_iter: Iteration cap per attempt
        restarts: Perturbed restarts allowed
        seed: Seed for numpy.random.default_rng

    Raises:
        ValueError: If the polynomial has degree < 1 after trimming
        ConvergenceError: If some roots never meet the residual tolerance
    """
    c, trimmed, cutoff = trim_coefficients(coeffs)
    n = c.size - 1
    if n < 1:
        raise ValueError("Root finding needs a polynomial of degree at least 1")
    low = int(np.nonzero(c)[0][0])
    if low:
        # exact zero roots are split off before iterating
        zeros = np.zeros(low, dtype=np.complex128)
        if low == n:
            return RootResult(zeros, np.zeros(low), n, trimmed, cutoff)
        rest = aberth_ehrlich(c[low:], tol, max_iter, restarts, seed)
        return RootResult(
            np.concatenate([zeros, rest.roots]),
            np.concatenate([np.zeros(low), rest.residuals]),
            n,
            trimmed,
            cutoff,
            rest.iterations,
            rest.restarts,
        )
    if n == 1:
        roots = np.array([-c[0] / c[1]], dtype=np.complex128)
        return RootResult(roots, _backward_residuals(c, roots), 1, trimmed, cutoff)

    desc = c[::-1]
    deriv = np.polyder(desc)
    rng = np.random.default_rng(seed)
    best: Optional[NDArray[np.complex128]] = None
    best_res: Optional[NDArray[np.float64]] = None
    for attempt in range(restarts + 1):
        x = _initial_guesses(c, None if attempt == 0 else rng)
        iterations = 0
        for iterations in range(1, max_iter + 1):
            p = np.polyval(desc, x)
            dp = np.polyval(deriv, x)
            with np.errstate(divide="ignore", invalid="ignore"):
                w = p / dp
                diff = x[:, None] - x[None, :]
                np.fill_diagonal(diff, 1.0)
                inv = 1.0 / diff
                np.fill_diagonal(inv, 0.0)
                step = w / (1 - w * inv.sum(axis=1))
            bad = ~np.isfinite(step)
            if bad.any():
                step[bad] = (rng.standard_normal(bad.sum()) + 1j * rng.standard_normal(bad.sum())) * 1e-3
            x = x - step
            if np.all(np.abs(step) <= tol * (1 + np.abs(x))):
                break
        residuals = _backward_residuals(c, x)
        if best_res is None or residuals.max() < best_res.max():
            best, best_res = x.copy(), residuals
        if np.all(residuals <= RESIDUAL_TOLERANCE):
            if attempt:
                logger.debug("Root iteration converged after %d restarts", attempt)
            return RootResult(x, residuals, n, trimmed, cutoff, iterations, attempt)
    assert best is not None and best_res is not None
    failed = np.nonzero(best_res > RESIDUAL_TOLERANCE)[0]
    raise ConvergenceError(failed.tolist())


def univariate_roots(coeffs: Sequence[complex], seed: int = 0) -> NDArray[np.complex128]:
    """
    All complex roots of sum_k coeffs[k] z^k.

    Near-zero top coefficients are trimmed first (see trim_coefficients).
    """
    return aberth_ehrlich(coeffs, seed=seed).roots


__all__ = [
    "RootResult",
    "TRIM_THRESHOLD",
    "trim_coefficients",
    "scaled_residuals",
    "aberth_ehrlich",
    "univariate_roots",
]
