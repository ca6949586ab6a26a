from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..approx.opa import OpaResult, opa
from ..core.mpoly import Coefficient, MPoly, MultiIndex, monomial_count, monomials_upto
from ..core.scalar import ZERO, ExactScalar, to_complex, to_exact
from ..core.spaces import SpaceSpec
from ..zeros.scan import ZeroVerdict, polydisk_zero_free

logger = logging.getLogger(__name__)


def _normalize(value: Any) -> Any:
    return int(value) if isinstance(value, np.integer) else value


def _is_exact_value(value: Any) -> bool:
    return ExactScalar.coerce(_normalize(value)) is not None


@dataclass(frozen=True)
class FilterSpec:
    """
    Two-dimensional recursive filter F = A / B.

    Coefficients use the 1-based convention a_{j,k}: the coefficient of
    z1^(j-1) z2^(k-1).

    Attributes:
        A: Numerator polynomial in two variables
        B: Denominator polynomial in two variables with b_{1,1} != 0
    """

    A: MPoly
    B: MPoly

    def __post_init__(self) -> None:
        if self.A.d != 2 or self.B.d != 2:
            raise ValueError(f"Filters need polynomials in two variables, got d={self.A.d}, {self.B.d}")
        if not self.B.constant_term():
            raise ValueError("The constant term b_{1,1} of the denominator must be non-zero")

    @property
    def exact(self) -> bool:
        return self.A.is_exact and self.B.is_exact

    @property
    def b11(self) -> Coefficient:
        return self.B.constant_term()

    def a(self, j: int, k: int) -> Coefficient:
        return self.A.coeff((j - 1, k - 1))

    def b(self, j: int, k: int) -> Coefficient:
        return self.B.coeff((j - 1, k - 1))

    @property
    def numerator_size(self) -> Tuple[int, int]:
        """(M_A, N_A)"""
        return (max(self.A.degree_in(0), 0) + 1, max(self.A.degree_in(1), 0) + 1)

    @property
    def denominator_size(self) -> Tuple[int, int]:
        """(M_B, N_B)"""
        return (self.B.degree_in(0) + 1, self.B.degree_in(1) + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"A": str(self.A), "B": str(self.B), "exact": self.exact}


class DataArray:
    """
    Finite two-dimensional array d_{j,k}, indexed from (1, 1).

    Reads outside the stored rectangle return zero. Exact arrays hold
    ExactScalar entries in an object array, float arrays hold complex doubles.
    """

    def __init__(self, entries: Any, exact: Optional[bool] = None) -> None:
        raw = np.asarray(entries, dtype=object)
        if raw.ndim != 2:
            raise ValueError(f"Data arrays must be two-dimensional, got shape {raw.shape}")
        if exact is None:
            exact = all(_is_exact_value(v) for v in raw.flat)
        if exact:
            data = np.empty(raw.shape, dtype=object)
            for idx, v in np.ndenumerate(raw):
                data[idx] = to_exact(_normalize(v))
        else:
            data = np.array([[to_complex(v) for v in row] for row in raw], dtype=np.complex128).reshape(raw.shape)
        self.entries: NDArray[Any] = data
        self.exact = bool(exact)

    @classmethod
    def zeros(cls, rows: int, cols: int, exact: bool = True) -> "DataArray":
        return cls(np.full((rows, cols), 0, dtype=object), exact=exact)

    @classmethod
    def impulse(cls, rows: int, cols: int, exact: bool = True) -> "DataArray":
        """Unit impulse at (1, 1)."""
        if rows < 1 or cols < 1:
            raise ValueError(f"Invalid array size: {rows}x{cols}")
        values = np.full((rows, cols), 0, dtype=object)
        values[0, 0] = 1
        return cls(values, exact=exact)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]

    def get(self, j: int, k: int) -> Any:
        rows, cols = self.shape
        if 1 <= j <= rows and 1 <= k <= cols:
            return self.entries[j - 1, k - 1]
        return ZERO if self.exact else 0j

    def to_float(self) -> NDArray[np.float64]:
        """Real parts as doubles (imaginary parts are dropped)."""
        return np.array([[to_complex(v).real for v in row] for row in self.entries], dtype=np.float64).reshape(
            self.shape
        )

    def to_complex(self) -> NDArray[np.complex128]:
        return np.array([[to_complex(v) for v in row] for row in self.entries], dtype=np.complex128).reshape(
            self.shape
        )

    def abs_max(self) -> float:
        return float(np.max(np.abs(self.to_complex()))) if self.entries.size else 0.0

    def __add__(self, other: "DataArray") -> "DataArray":
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch: {self.shape} vs {other.shape}")
        if self.exact and other.exact:
            return DataArray(self.entries + other.entries, exact=True)
        return DataArray(self.to_complex() + other.to_complex(), exact=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataArray) or self.shape != other.shape:
            return NotImplemented
        return all(a == b for a, b in zip(self.entries.flat, other.entries.flat))

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"DataArray({self.shape[0]}x{self.shape[1]}, {kind})"


def _coefficient_lists(
    fs: FilterSpec, exact: bool
) -> Tuple[List[Tuple[MultiIndex, Any]], List[Tuple[MultiIndex, Any]], Any]:
    convert = to_exact if exact else to_complex
    b11 = convert(fs.b11)
    a_terms = [(m, convert(c)) for m, c in fs.A.items()]
    b_terms = [(m, convert(c)) for m, c in fs.B.items() if any(m)]
    return a_terms, b_terms, b11


def run_recursion(fs: FilterSpec, D: DataArray, out_rows: int, out_cols: int) -> DataArray:
    """
    Output array R of the filter A/B driven by D.

    r_{m,n} = sum a_{j,k}/b_{1,1} d_{m-j+1,n-k+1} - sum' b_{j,k}/b_{1,1} r_{m-j+1,n-k+1},
    where the second sum skips (j, k) = (1, 1). Entries are computed
    row-major with increasing (m, n); out-of-range d and r terms are zero.
    Arithmetic is exact when A, B and D are all exact.

    Raises:
        ValueError: If the output size is invalid
    """
    if out_rows < 1 or out_cols < 1:
        raise ValueError(f"Invalid output size: {out_rows}x{out_cols}")
    exact = fs.exact and D.exact
    a_terms, b_terms, b11 = _coefficient_lists(fs, exact)
    zero: Any = ZERO if exact else 0j
    data_rows, data_cols = D.shape
    data = D.entries if exact else D.to_complex()
    R = np.empty((out_rows, out_cols), dtype=object if exact else np.complex128)
    for m in range(out_rows):
        for n in range(out_cols):
            acc = zero
            for (j, k), a in a_terms:
                p, q = m - j, n - k
                if 0 <= p < data_rows and 0 <= q < data_cols:
                    v = data[p, q]
                    if v:
                        acc = acc + a * v
            for (j, k), b in b_terms:
                p, q = m - j, n - k
                if p >= 0 and q >= 0:
                    v = R[p, q]
                    if v:
                        acc = acc - b * v
            R[m, n] = acc / b11
    logger.debug("Ran recursion of %s on a %dx%d window (%s)", fs.B, out_rows, out_cols, "exact" if exact else "float")
    return DataArray(R, exact=exact)


@dataclass
class ImpulseReport:
    """
    Impulse response of a filter with a boundedness estimate.

    frame_maxima[k] is max |r| over entries with max(m, n) = k + 1 (1-based);
    decay_ratio is exp of the slope of a log-linear fit of the frame maxima
    over the last quarter of the window. It is a report, not a verdict.
    """

    response: DataArray
    frame_maxima: List[float]
    max_abs: float
    decay_ratio: Optional[float]
    growth: bool

    def to_dict(self) -> Dict[str, Any]:
        rows, cols = self.response.shape
        return {
            "window": [rows, cols],
            "max_abs": self.max_abs,
            "frame_maxima": list(self.frame_maxima),
            "decay_ratio": self.decay_ratio,
            "growth": self.growth,
        }


def frame_maxima(values: NDArray[np.float64]) -> List[float]:
    rows, cols = values.shape
    maxima = []
    for k in range(max(rows, cols)):
        frame = []
        if k < rows:
            frame.append(values[k, : min(k + 1, cols)])
        if k < cols:
            frame.append(values[: min(k + 1, rows), k])
        maxima.append(float(max(np.max(part) for part in frame if part.size)))
    return maxima


def decay_ratio(maxima: Sequence[float]) -> Optional[float]:
    """Geometric ratio fitted to the last quarter of the frame maxima."""
    K = len(maxima)
    tail = max(2, K // 4)
    ks = [k for k in range(max(K - tail, 0), K) if maxima[k] > 0]
    if len(ks) < 2:
        return None
    slope, _ = np.polyfit(ks, np.log([maxima[k] for k in ks]), 1)
    return float(np.exp(slope))


def impulse_response(fs: FilterSpec, rows: int, cols: int) -> ImpulseReport:
    """
    Response to the unit impulse at (1, 1) over a rows x cols window.

    Raises:
        ValueError: If the window is empty
    """
    response = run_recursion(fs, DataArray.impulse(rows, cols, exact=fs.exact), rows, cols)
    magnitudes = np.abs(response.to_complex())
    maxima = frame_maxima(magnitudes)
    ratio = decay_ratio(maxima)
    growth = ratio is not None and ratio > 1 + 1e-9
    if growth:
        logger.info("Impulse response of 1/(%s) grows with ratio %.6g", fs.B, ratio)
    return ImpulseReport(response, maxima, float(magnitudes.max()), ratio, growth)


@dataclass
class StabilityVerdict:
    """stable, unstable (with a witness zero of B) or inconclusive."""

    status: str
    scan: ZeroVerdict

    @property
    def witness(self) -> Optional[Tuple[complex, complex]]:
        return self.scan.witness

    @property
    def stable(self) -> bool:
        return self.status == "stable"

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, "scan": self.scan.to_dict()}


_STATUS = {"zero_free_closed": "stable", "zero_found": "unstable", "inconclusive": "inconclusive"}


def stability_check(B: MPoly, grid: int = 2048, margin: float = 1e-3, seed: int = 0) -> StabilityVerdict:
    """
    1/B is stable iff B has no zeros on the closed bidisk.

    Decided by the grid scan of polydisk_zero_free.

    Raises:
        ValueError: If B does not have two variables
    """
    scan = polydisk_zero_free(B, grid=grid, margin=margin, seed=seed)
    verdict = StabilityVerdict(_STATUS[scan.status], scan)
    logger.debug("Stability of 1/(%s): %s", B, verdict.status)
    return verdict


@dataclass
class StabilizationReport:
    """
    Outcome of replacing 1/B by 1/p_n^*.

    Attributes:
        B: Original denominator
        result: Hardy-bidisk approximant of order n to 1/B
        original: Stability verdict for 1/B
        verdict: Stability verdict for 1/p_n^*
        original_response: Impulse response of 1/B
        stabilized_response: Impulse response of 1/p_n^*
    """

    B: MPoly
    result: OpaResult
    original: StabilityVerdict
    verdict: StabilityVerdict
    original_response: ImpulseReport
    stabilized_response: ImpulseReport

    @property
    def p_n_star(self) -> MPoly:
        return self.result.approximant

    @property
    def succeeded(self) -> bool:
        return self.verdict.stable

    def to_dict(self) -> Dict[str, Any]:
        return {
            "B": str(self.B),
            "n": self.result.n,
            "p_n_star": str(self.p_n_star),
            "succeeded": self.succeeded,
            "original": self.original.to_dict(),
            "stabilized": self.verdict.to_dict(),
            "original_response": self.original_response.to_dict(),
            "stabilized_response": self.stabilized_response.to_dict(),
        }


def stabilize(
    B: MPoly,
    n: int,
    window: int = 12,
    grid: int = 2048,
    margin: float = 1e-3,
    mode: Optional[str] = None,
) -> StabilizationReport:
    """
    Replace 1/B by 1/p_n^*, with p_n^* the H^2(D^2) approximant to 1/B.

    Stabilization need not succeed; the report says whether p_n^* is
    zero-free on the closed bidisk and compares both impulse responses on
    a window x window grid.

    Raises:
        ValueError: If B(0, 0) = 0 or B does not have two variables
    """
    if B.d != 2:
        raise ValueError(f"Filters need polynomials in two variables, got d={B.d}")
    if not B.constant_term():
        raise ValueError("B(0, 0) must be non-zero")
    result = opa(SpaceSpec.hardy(2), B, n, mode=mode)
    p = result.approximant
    original = stability_check(B, grid, margin)
    verdict = stability_check(p, grid, margin)
    one = MPoly.constant(1, 2)
    original_response = impulse_response(FilterSpec(one, B), window, window)
    stabilized_response = impulse_response(FilterSpec(one, p), window, window)
    report = StabilizationReport(B, result, original, verdict, original_response, stabilized_response)
    logger.info("Stabilization of 1/(%s) with p_%d^*: %s", B, n, "succeeded" if report.succeeded else "failed")
    return report


def series_division(A: MPoly, B: MPoly, order: int) -> MPoly:
    """
    Taylor coefficients of A/B through total degree order.

    Solves (B Q)_m = A_m monomial by monomial in deglex order:
    q_m = (a_m - sum_{k != 0} b_k q_{m-k}) / b_0.

    Raises:
        ValueError: If B(0) = 0, the dimensions differ or order < 0
    """
    if A.d != B.d:
        raise ValueError(f"Dimension mismatch: {A.d} vs {B.d}")
    if order < 0:
        raise ValueError(f"Invalid order: {order}")
    b0 = B.constant_term()
    if not b0:
        raise ValueError("Series division needs B(0) != 0")
    exact = A.is_exact and B.is_exact
    convert = to_exact if exact else to_complex
    inv_b0 = convert(1) / convert(b0)
    b_terms = [(m, convert(c)) for m, c in B.items() if any(m)]
    q: Dict[MultiIndex, Any] = {}
    for m in monomials_upto(monomial_count(order, A.d) - 1, A.d):
        acc = convert(A.coeff(m))
        for k, b in b_terms:
            rest = tuple(mi - ki for mi, ki in zip(m, k))
            if min(rest) >= 0 and rest in q:
                acc = acc - b * q[rest]
        value = acc * inv_b0
        if value:
            q[m] = value
    return MPoly(A.d, q)


__all__ = [
    "FilterSpec",
    "DataArray",
    "run_recursion",
    "ImpulseReport",
    "frame_maxima",
    "decay_ratio",
    "impulse_response",
    "StabilityVerdict",
    "stability_check",
    "StabilizationReport",
    "stabilize",
    "series_division",
]
