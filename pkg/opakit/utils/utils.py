from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.mpoly import MPoly, monomials_upto, monomial_count

DEFAULT_SEED = 20240


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Seeded generator; None uses the package default seed."""
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def random_fraction(rng: np.random.Generator, bound: int = 5, max_den: int = 4, nonzero: bool = False) -> Fraction:
    """Uniform numerator in [-bound, bound] over a denominator in [1, max_den]."""
    while True:
        value = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, max_den + 1)))
        if value or not nonzero:
            return value


def random_rational_poly(
    rng: np.random.Generator,
    d: int = 2,
    max_degree: int = 3,
    density: float = 0.5,
    bound: int = 5,
) -> MPoly:
    """
    Random polynomial with rational coefficients and non-zero constant term.

    Args:
        rng: Random generator
        d: Number of variables
        max_degree: Largest total degree
        density: Probability that a non-constant monomial is present
        bound: Numerator bound of the coefficients
    """
    if max_degree < 0:
        raise ValueError(f"Invalid degree: {max_degree}")
    terms = {}
    for m in monomials_upto(monomial_count(max_degree, d) - 1, d):
        if not any(m):
            terms[m] = random_fraction(rng, bound, nonzero=True)
        elif rng.random() < density:
            terms[m] = random_fraction(rng, bound)
    return MPoly(d, terms)


def random_diagonal_weight(rng: np.random.Generator, bound: int = 3) -> MPoly:
    """1 + a1 z1 z2 + a2 (z1 z2)^2 with small random rationals a1, a2."""
    return MPoly(2, {(0, 0): 1, (1, 1): random_fraction(rng, bound), (2, 2): random_fraction(rng, bound)})


def random_interior_points(
    rng: np.random.Generator,
    count: int,
    d: int = 2,
    domain: str = "polydisk",
    radius: float = 0.9,
) -> List[Tuple[complex, ...]]:
    """
    Random points strictly inside the polydisk or the ball.

    Polydisk coordinates are uniform in the disk of the given radius; ball
    points are uniform directions scaled to a norm at most radius.
    """
    if not 0 < radius < 1:
        raise ValueError(f"Radius must lie in (0, 1), got {radius}")
    points: List[Tuple[complex, ...]] = []
    for _ in range(count):
        if domain == "polydisk":
            r = radius * np.sqrt(rng.random(d))
            theta = rng.uniform(0, 2 * np.pi, d)
            z = r * np.exp(1j * theta)
        elif domain == "ball":
            v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            z = v / np.linalg.norm(v) * radius * rng.random() ** (1 / (2 * d))
        else:
            raise ValueError(f"Unknown domain {domain!r}")
        points.append(tuple(complex(c) for c in z))
    return points


def random_data_array(rng: np.random.Generator, rows: int, cols: int, bound: int = 5) -> List[List[Fraction]]:
    """rows x cols array of small random rationals."""
    return [[random_fraction(rng, bound) for _ in range(cols)] for _ in range(rows)]


def parse_points(text: str) -> List[Tuple[str, ...]]:
    """
    Split "(1/2,1/3);(1/4,0)" into coordinate strings.

    Commas inside nested parentheses, as in complex literals, are kept.

    Raises:
        ValueError: If a point is not wrapped in parentheses
    """
    points: List[Tuple[str, ...]] = []
    for chunk in _split_top(text.strip(), ";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"Points must look like (a,b): {chunk!r}")
        points.append(tuple(part.strip() for part in _split_top(chunk[1:-1], ",")))
    return points


def _split_top(text: str, sep: str) -> Sequence[str]:
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    parts.append(text[start:])
    return parts


__all__ = [
    "DEFAULT_SEED",
    "make_rng",
    "random_fraction",
    "random_rational_poly",
    "random_diagonal_weight",
    "random_interior_points",
    "random_data_array",
    "parse_points",
]
