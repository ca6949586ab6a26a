import logging
import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..approx.closed_forms import (
    DiagonalTarget,
    WeightSequence,
    ball_distance_rates,
    ball_rotation_opa,
    cyclicity_classify,
    diag_embed_opa,
    drury_arveson_diag_weight,
    fms_distance,
    stirling_check,
    tail_corrected_inverse_sum,
)
from ..approx.opa import (
    check_residual_orthogonality,
    coefficient_sign_history,
    constant_opa_check,
    opa,
    opa_sequence,
    weak_inner_test,
)
from ..approx.ortho import (
    diagonal_structure,
    hardy_diag_basis,
    opa_differences,
    verify_recovery,
    weighted_gram_schmidt,
    weighted_monomial_product,
)
from ..approx.shapiro import (
    bergman_bidisk_closed_form,
    closed_form_ratios,
    drury_arveson_closed_form,
    hardy_bidisk_closed_form,
    shapiro_shields,
    ss_verify,
)
from ..core.errors import ConsistencyError, OpakitError
from ..core.mpoly import MPoly, diag_threshold, monomial_count
from ..core.scalar import to_complex
from ..core.spaces import SpaceSpec, inner_product
from ..core.text import parse_poly, parse_scalar
from ..filters.recursive import (
    DataArray,
    FilterSpec,
    impulse_response,
    run_recursion,
    series_division,
    stability_check,
    stabilize,
)
from ..utils.utils import (
    make_rng,
    random_data_array,
    random_diagonal_weight,
    random_interior_points,
    random_rational_poly,
)
from ..zeros.scan import face_profile, polydisk_zero_free
from .loader import FixtureStore

logger = logging.getLogger(__name__)

CheckFunc = Callable[[FixtureStore], str]


class CheckFailure(AssertionError):
    """Raised inside a check when a computed value disagrees with its fixture."""


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


@dataclass(frozen=True)
class Check:
    name: str
    tags: Tuple[str, ...]
    func: CheckFunc

    def matches(self, selector: Optional[str]) -> bool:
        return selector is None or selector == self.name or selector in self.tags


@dataclass
class CheckResult:
    name: str
    tags: Tuple[str, ...]
    passed: bool
    detail: str
    seconds: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "tags": list(self.tags),
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class LedgerNote:
    """A printed value the computations replace, with the resolution."""

    key: str
    printed: str
    computed: str
    resolution: str

    def to_dict(self) -> Dict[str, str]:
        return {
            "key": self.key,
            "printed": self.printed,
            "computed": self.computed,
            "resolution": self.resolution,
        }


@dataclass
class FixtureReport:
    results: List[CheckResult] = field(default_factory=list)
    ledger: List[LedgerNote] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return f"{self.passed} passed, {self.failed} failed, {len(self.ledger)} ledger notes"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "summary": self.summary(),
            "passed": self.passed,
            "failed": self.failed,
            "checks": [r.to_dict() for r in self.results],
            "ledger": [n.to_dict() for n in self.ledger],
        }


CHECKS: List[Check] = []


def check(name: str, *tags: str) -> Callable[[CheckFunc], CheckFunc]:
    """Register a fixture check under a name and tags."""

    def register(func: CheckFunc) -> CheckFunc:
        CHECKS.append(Check(name, tags, func))
        return func

    return register


def _poly(text: str) -> MPoly:
    return parse_poly(text, 2)


def _space(data: Dict[str, str]) -> SpaceSpec:
    return SpaceSpec.parse(data["space"])


def _indexed(data: Dict[str, str], prefix: str) -> Dict[int, MPoly]:
    pattern = re.compile(rf"{prefix}(\d+)$")
    found = {}
    for key, value in data.items():
        m = pattern.match(key)
        if m:
            found[int(m.group(1))] = _poly(value)
    return found


# ---------------------------------------------------------------------------
# Exact tables
# ---------------------------------------------------------------------------


def _table(store: FixtureStore, section: str) -> str:
    data = store.section("opa_tables", section)
    space, f = _space(data), _poly(data["f"])
    approximants = _indexed(data, "p")
    differences = _indexed(data, "phi")
    N = max(list(approximants) + list(differences))
    sequence = opa_sequence(space, f, N)
    for n, expected in sorted(approximants.items()):
        got = sequence[n].approximant
        _expect(got == expected, f"{section} p{n}: computed {got}, expected {expected}")
    diffs = opa_differences(sequence)
    for n, expected in sorted(differences.items()):
        _expect(diffs[n] == expected, f"{section} phi{n}: computed {diffs[n]}, expected {expected}")
    family = weighted_gram_schmidt(space, f, N)
    recovery = verify_recovery(family, diffs)
    _expect(recovery.ok, f"{section}: orthogonal members not recovered from the differences")
    return f"p0..p{N} and {len(differences)} differences"


@check("table_hardy", "tables", "hardy")
def check_table_hardy(store: FixtureStore) -> str:
    return _table(store, "hardy")


@check("table_dirichlet", "tables", "dirichlet")
def check_table_dirichlet(store: FixtureStore) -> str:
    return _table(store, "dirichlet")


@check("table_bergman", "tables", "bergman")
def check_table_bergman(store: FixtureStore) -> str:
    return _table(store, "bergman")


@check("table_drury_arveson", "tables", "drury_arveson")
def check_table_drury_arveson(store: FixtureStore) -> str:
    detail = _table(store, "drury_arveson")
    approximants = _indexed(store.section("opa_tables", "drury_arveson"), "p")
    for N in (2, 5):
        rotated = ball_rotation_opa(N)
        _expect(rotated == approximants[N], f"rotated approximant of rank {N} is {rotated}")
    return detail + ", rotation formula at ranks 2 and 5"


# ---------------------------------------------------------------------------
# Decimal tables and coefficient signs
# ---------------------------------------------------------------------------


def _decimals(store: FixtureStore, section: str) -> str:
    data = store.section("decimals", section)
    space, f = _space(data), _poly(data["f"])
    n, rel_tol = int(data["n"]), float(data["rel_tol"])
    p = opa(space, f, n).approximant
    printed = _poly(data["p"])
    _expect(set(p.support()) == set(printed.support()), f"{section} p{n}: support differs from the table")
    worst = 0.0
    for m, c in printed.items():
        want = to_complex(c).real
        got = to_complex(p.coeff(m)).real
        worst = max(worst, abs(got - want) / abs(want))
    _expect(worst <= rel_tol, f"{section} p{n}: relative error {worst:.2e} above {rel_tol:.0e}")
    monomial = tuple(int(v) for v in data["sign_monomial"].split(","))
    history = coefficient_sign_history(space, f, monomial, int(data["first_negative"]))
    _expect(
        history.first_appearance == int(data["first_appearance"]),
        f"{section}: z^{monomial} first appears at {history.first_appearance}",
    )
    _expect(history.signs[history.first_appearance] > 0, f"{section}: z^{monomial} does not enter positive")
    _expect(
        history.first_negative == int(data["first_negative"]),
        f"{section}: z^{monomial} first negative at {history.first_negative}",
    )
    return f"p{n} within {worst:.1e}; z^{monomial} enters at {history.first_appearance}, negative at {history.first_negative}"


@check("decimals_hardy", "decimals", "hardy")
def check_decimals_hardy(store: FixtureStore) -> str:
    return _decimals(store, "hardy")


@check("decimals_dirichlet", "decimals", "dirichlet")
def check_decimals_dirichlet(store: FixtureStore) -> str:
    return _decimals(store, "dirichlet")


# ---------------------------------------------------------------------------
# Diagonal targets
# ---------------------------------------------------------------------------


@check("diagonal_drury_arveson", "diagonal", "drury_arveson")
def check_diagonal_drury_arveson(store: FixtureStore) -> str:
    data = store.section("diagonal", "drury_arveson")
    space, f = _space(data), _poly(data["f"])
    expected = _indexed(data, "order")
    top = max(expected)
    sequence = opa_sequence(space, f, diag_threshold(top + 1, 2) - 1)
    target = DiagonalTarget.ball(2)
    _expect(target.target_poly() == f, f"ball target is {target.target_poly()}")
    for k, want in sorted(expected.items()):
        embedded = diag_embed_opa(target, k)
        _expect(embedded.approximant == want, f"order {k}: closed form gives {embedded.approximant}")
        start, stop = embedded.valid_ranks
        for N in range(start, stop):
            got = sequence[N].approximant
            _expect(got == want, f"rank {N}: approximant {got}, expected {want}")
    return f"orders 0..{top} constant on ranks 0..{len(sequence) - 1}"


@check("diagonal_dirichlet_distance", "diagonal", "distances", "dirichlet")
def check_diagonal_dirichlet_distance(store: FixtureStore) -> str:
    data = store.section("diagonal", "dirichlet")
    space, f = _space(data), _poly(data["f"])
    max_order = int(data["max_order"])
    orders = sorted(set(range(0, 11)) | set(range(10, max_order + 1, 10)))
    for n in orders:
        result = opa(space, f, diag_threshold(n, 2))
        expected = 1 / sum(Fraction(1, (k + 1) ** 2) for k in range(n + 2))
        _expect(result.nu2 == expected, f"order {n}: nu^2 = {result.nu2}, expected {expected}")
    estimate, _ = tail_corrected_inverse_sum(WeightSequence.dirichlet(2), int(data["limit_terms"]))
    limit = math.sqrt(6) / math.pi
    error = abs(1 / math.sqrt(estimate) - limit)
    _expect(error <= float(data["limit_tol"]), f"limit distance off by {error:.2e}")
    zeta = fms_distance(WeightSequence.dirichlet(2))
    _expect(abs(zeta.nu - limit) <= 1e-12, f"zeta limit {zeta.nu}")
    return f"nu^2 exact for {len(orders)} orders up to {max_order}; limit within {error:.1e}"


# ---------------------------------------------------------------------------
# Zeros of approximants
# ---------------------------------------------------------------------------


def _inside(witness: Optional[Tuple[complex, complex]]) -> bool:
    return witness is not None and all(abs(w) < 1 for w in witness)


@check("shanks_genin_kamp", "shanks", "hardy", "filter")
def check_shanks_genin_kamp(store: FixtureStore) -> str:
    data = store.section("shanks", "genin_kamp")
    space, f = _space(data), _poly(data["f"])
    p2 = opa(space, f, 2).approximant
    expected = _poly(data["p2"])
    _expect(p2 == expected, f"p2 = {p2}, expected {expected}")
    # the printed point lies on the line z2 = -z1 - shift
    shift = parse_scalar(data["witness_shift"])
    c0, c1, c2 = p2.coeff((0, 0)), p2.coeff((1, 0)), p2.coeff((0, 1))
    on_line = MPoly(1, {(0,): c0 - c2 * shift, (1,): c1 - c2})
    _expect(on_line.is_zero(), f"p2 restricted to the witness line is {on_line}")
    w1 = float(Fraction(data["witness_radius"])) * np.exp(1j * float(data["witness_angle"]))
    w2 = -w1 - to_complex(shift)
    _expect(abs(p2(w1, w2)) < 1e-12 and abs(w2) < 1, f"printed point ({w1}, {w2}) is not a zero inside")
    verdict = polydisk_zero_free(p2)
    _expect(verdict.zero_found and _inside(verdict.witness), f"scan verdict {verdict.status}")
    original = stability_check(f)
    _expect(original.status == "unstable", f"1/f judged {original.status}")
    report = stabilize(f, 2)
    _expect(not report.succeeded, "stabilization with p2 reported success")
    return f"p2 vanishes at |z2| = {abs(w2):.4f}; stabilization fails"


def _bergman_zero(p: MPoly, label: str) -> float:
    profile = face_profile(p, 2, grid=512)
    _expect(profile.global_min < 1, f"{label}: face minimum {profile.global_min:.4f}")
    verdict = polydisk_zero_free(p)
    _expect(verdict.zero_found and _inside(verdict.witness), f"{label}: scan verdict {verdict.status}")
    return profile.global_min


@check("shanks_bergman", "shanks", "bergman")
def check_shanks_bergman(store: FixtureStore) -> str:
    data = store.section("shanks", "bergman")
    space, b = _space(data), _poly(data["f"])
    p2 = opa(space, b, 2).approximant
    expected = _poly(data["p2"])
    _expect(p2 == expected, f"p2 = {p2}, expected {expected}")
    low = _bergman_zero(p2, "bergman p2")

    dilated = store.section("shanks", "bergman_dilated")
    b_tilde = b.dilate(Fraction(dilated["dilation"]))
    p2_tilde = opa(space, b_tilde, 2).approximant
    expected_tilde = _poly(dilated["p2"])
    _expect(p2_tilde == expected_tilde, f"dilated p2 = {p2_tilde}, expected {expected_tilde}")
    low_tilde = _bergman_zero(p2_tilde, "dilated p2")
    target = polydisk_zero_free(b_tilde)
    _expect(target.zero_free, f"dilated target judged {target.status}")
    return f"face minima {low:.4f} and {low_tilde:.4f}; dilated target zero-free"


@check("shanks_remarks", "shanks", "dirichlet")
def check_shanks_remarks(store: FixtureStore) -> str:
    b = _poly(store.section("shanks", "bergman")["f"])
    data = store.section("shanks", "remarks")
    mixed = SpaceSpec.parse(data["mixed_space"])
    verdict = polydisk_zero_free(opa(mixed, b, 2).approximant)
    _expect(verdict.zero_found, f"{mixed.describe()}: p2 judged {verdict.status}")
    # order 2 misses the closed bidisk for the fractional exponents, see the ledger
    fractional = SpaceSpec.parse(data["fractional_space"])
    p2 = opa(fractional, b, 2).approximant
    shift = abs(to_complex(p2.constant_term()) / to_complex(p2.coeff((1, 0))))
    _expect(2 < shift < 2.01, f"{fractional.describe()}: p2 vanishes on z1 + z2 = -{shift:.4f}")
    return f"{mixed.describe()}: {verdict.status}; {fractional.describe()}: zero line at -{shift:.4f}"


# ---------------------------------------------------------------------------
# Structural properties on random input
# ---------------------------------------------------------------------------


def _property_spaces() -> List[SpaceSpec]:
    return [SpaceSpec.hardy(2), SpaceSpec.dirichlet_bidisk(1, 1), SpaceSpec.bergman(2), SpaceSpec.drury_arveson(2)]


@check("residual_orthogonality", "properties")
def check_residual_orthogonality_random(store: FixtureStore) -> str:
    rng = make_rng()
    spaces = _property_spaces()
    count, N = 50, 12
    for i in range(count):
        f = random_rational_poly(rng, 2, 3)
        space = spaces[i % len(spaces)]
        # opa_sequence asserts orthogonality of every residual and decreasing distances
        sequence = opa_sequence(space, f, N)
        check_residual_orthogonality(space, f, sequence[-1].approximant, N)
    return f"{count} random targets through order {N}"


@check("diagonal_orthogonality", "orthogonality", "properties")
def check_diagonal_orthogonality(store: FixtureStore) -> str:
    rng = make_rng()
    spaces = [SpaceSpec.hardy(2), SpaceSpec.dirichlet_bidisk(1, 1), SpaceSpec.bergman(2)]
    N = monomial_count(6, 2) - 1
    for i in range(10):
        f = random_diagonal_weight(rng)
        space = spaces[i % len(spaces)]
        # raises ConsistencyError when a member leaves its diagonal row
        diagonal_structure(space, f, N)
        a = [f.coeff((k, k)) for k in range(3)]
        for k, l in [((0, 0), (0, 0)), ((2, 1), (1, 0)), ((3, 1), (1, 1)), ((1, 3), (0, 2)), ((2, 0), (0, 1))]:
            direct = inner_product(space, f.shift(k), f.shift(l))
            closed = weighted_monomial_product(space, a, k, l)
            _expect(direct == closed, f"<z^{k}, z^{l}>_f: {direct} vs closed form {closed}")
    return f"10 diagonal weights through rank {N}"


@check("hardy_diagonal_basis", "orthogonality", "hardy")
def check_hardy_diagonal_basis(store: FixtureStore) -> str:
    space = SpaceSpec.hardy(2)
    f = _poly("1-z1*z2")
    basis = [hardy_diag_basis(M, m, 1) for M in range(5) for m in range(5)]
    basis += [hardy_diag_basis(M, m, 2) for M in range(1, 5) for m in range(5)]
    weighted = [q * f for q in basis]
    for (i, p), (j, q) in combinations(enumerate(weighted), 2):
        value = inner_product(space, p, q)
        _expect(not value, f"basis members {i} and {j} have product {value}")
    N = 12
    family = weighted_gram_schmidt(space, f, N)
    diffs = opa_differences(opa_sequence(space, f, N))
    report = verify_recovery(family, diffs)
    _expect(report.ok, "orthogonal members not recovered from the differences")
    zeros = [e.n for e in report.entries if e.kind == "zero"]
    for n in zeros:
        _expect(not family.members[n].constant_term(), f"phi_{n}(0) != 0 although the difference vanishes")
    return f"{len(basis)} members pairwise orthogonal; {len(zeros)} vanishing differences"


@check("weakly_inner", "weakly_inner", "hardy")
def check_weakly_inner(store: FixtureStore) -> str:
    space = SpaceSpec.hardy(2)
    monomial = constant_opa_check(space, _poly("z1*z2"), 12)
    _expect(monomial.holds and not monomial.constant, f"z1 z2: {monomial.diagnostic}")
    constant = constant_opa_check(space, _poly("3"), 12)
    _expect(constant.holds and constant.constant == Fraction(1, 3), f"3: {constant.diagnostic}")
    other = weak_inner_test(space, _poly("1-z1*z2"), 4)
    _expect(not other.weakly_inner and other.offending_index == 4, "1 - z1 z2 passed the weak inner test")
    return "z1 z2 and 3 have constant approximants; 1 - z1 z2 fails at index 4"


@check("shapiro_shields", "shapiro")
def check_shapiro_shields(store: FixtureStore) -> str:
    lam = (Fraction(1, 2), Fraction(1, 3))
    rng = make_rng()
    cases = [
        ("hardy2", hardy_bidisk_closed_form, "polydisk"),
        ("bergman2", bergman_bidisk_closed_form, "polydisk"),
        ("da:2", drury_arveson_closed_form, "ball"),
    ]
    spreads = []
    for name, closed_form, domain in cases:
        space = SpaceSpec.parse(name)
        ssf = shapiro_shields(space, [lam])
        samples = random_interior_points(rng, 20, 2, domain)
        spread = _relative_spread(closed_form_ratios(ssf, closed_form, samples))
        _expect(spread <= 1e-10, f"{name}: closed-form ratio varies by {spread:.1e}")
        report = ss_verify(ssf, 60, 10)
        _expect(report.passed, f"{name}: truncated function fails its residual bounds")
        spreads.append(spread)
        if name == "hardy2":
            printed = partial(hardy_bidisk_closed_form, printed_sign=True)
            wrong = _relative_spread(closed_form_ratios(ssf, printed, samples))
            _expect(wrong > 1e-6, "the other sign also matches the determinant")
    return f"closed forms match to {max(spreads):.1e}"


def _relative_spread(ratios: Sequence[complex]) -> float:
    ratios = np.asarray(ratios)
    return float(np.max(np.abs(ratios - ratios[0])) / abs(ratios[0]))


# ---------------------------------------------------------------------------
# Filters and asymptotics
# ---------------------------------------------------------------------------


@check("filter_recursion", "filter")
def check_filter_recursion(store: FixtureStore) -> str:
    rng = make_rng()
    one = MPoly.constant(1, 2)
    for _ in range(5):
        A = random_rational_poly(rng, 2, 2)
        raw = random_data_array(rng, 4, 4)
        D = DataArray(raw)
        rows, cols = 4 + A.degree_in(0), 4 + A.degree_in(1)
        R = run_recursion(FilterSpec(A, one), D, rows, cols)
        product = A * MPoly(2, {(j, k): raw[j][k] for j in range(4) for k in range(4)})
        for j in range(rows):
            for k in range(cols):
                _expect(R.get(j + 1, k + 1) == product.coeff((j, k)), f"FIR output differs at ({j + 1}, {k + 1})")
    pascal = impulse_response(FilterSpec(one, _poly("1-z1/2-z2/2")), 12, 12).response
    for m in range(1, 13):
        for n in range(1, 13):
            want = Fraction(math.comb(m + n - 2, m - 1), 2 ** (m + n - 2))
            _expect(pascal.get(m, n) == want, f"impulse response at ({m}, {n})")
    A, B = _poly("1+z1-z2/3"), _poly("1-z1/2-z2/4")
    series = series_division(A, B, 10)
    response = impulse_response(FilterSpec(A, B), 11, 11).response
    for (j, k), c in series.items():
        _expect(response.get(j + 1, k + 1) == c, f"series coefficient {(j, k)} differs from the recursion")
    return "FIR convolution, binomial impulse response and series division agree"


@check("asymptotics", "asymptotics", "drury_arveson")
def check_asymptotics(store: FixtureStore) -> str:
    for k in range(100, 401, 25):
        ratio = float(drury_arveson_diag_weight(2, k)) / math.sqrt(math.pi * k)
        _expect(0.95 <= ratio <= 1.05, f"omega_2({k}) / sqrt(pi k) = {ratio:.4f}")
    for d in (2, 3, 4):
        error = stirling_check(d, 400)
        _expect(error < 1e-2, f"Stirling estimate for d={d} off by {error:.1e}")
    for alphas in [(0, 0), (1, 0), (Fraction(1, 2), Fraction(1, 2)), (-1, 3), (1, 1), (2, 0)]:
        result = cyclicity_classify(DiagonalTarget.bidisk(*alphas))
        want = "non_cyclic" if sum(alphas) > 1 else "cyclic"
        _expect(result.classification == want, f"bidisk {alphas}: {result.classification}")
    for d in range(1, 7):
        result = cyclicity_classify(DiagonalTarget.ball(d))
        want = "non_cyclic" if d >= 4 else "cyclic"
        _expect(result.classification == want, f"ball d={d}: {result.classification}")
    rates = ball_distance_rates(10)
    _expect(all(r.diagonal >= r.rotated for r in rates[1:]), "diagonal target converges faster than the rotated one")
    return "weights follow Stirling; cyclicity thresholds at alpha1 + alpha2 = 1 and d = 4"


# ---------------------------------------------------------------------------
# Ledger
# ---------------------------------------------------------------------------


@check("ledger_consistency", "ledger")
def check_ledger(store: FixtureStore) -> str:
    ledger = store.load("ledger")
    diag = ledger["diag2_coefficient"]
    space = SpaceSpec.drury_arveson(2)
    f = _poly("1-2*z1*z2")
    rank = diag_threshold(1, 2)
    check_residual_orthogonality(space, f, _poly(diag["computed"]), rank)
    try:
        check_residual_orthogonality(space, f, _poly(diag["printed"]), rank)
    except ConsistencyError:
        pass
    else:
        raise CheckFailure("the printed diagonal approximant passes residual orthogonality")
    _expect(drury_arveson_diag_weight(2, 2) == Fraction(8, 3), "omega_2(2) is not 8/3")
    _expect(DiagonalTarget.ball(2).scale() == 2, "ball scale for d=2 is not 2")
    bergman = store.section("opa_tables", "bergman")
    sequence = opa_sequence(SpaceSpec.bergman(2), _poly(bergman["f"]), 3)
    phi3 = opa_differences(sequence)[3]
    _expect(phi3 != _poly(ledger["bergman_phi3"]["printed"]), "printed Bergman phi3 now matches")
    hardy = store.section("opa_tables", "hardy")
    phi5 = opa_differences(opa_sequence(SpaceSpec.hardy(2), _poly(hardy["f"]), 5))[5]
    entry = ledger["hardy_phi5"]
    _expect(phi5 == _poly(entry["computed"]) and phi5 != _poly(entry["printed"]), "Hardy phi5 ledger entry is stale")
    da = store.section("opa_tables", "drury_arveson")
    space, f = _space(da), _poly(da["f"])
    entry = ledger["da_phi0"]
    _expect(opa_differences(opa_sequence(space, f, 0))[0] == _poly(entry["computed"]), "DA p0 is not 1/2")
    _expect(weighted_gram_schmidt(space, f, 0)[0] == _poly(entry["printed"]), "DA monic phi0 is not 1")
    return f"{len(ledger)} ledger entries confirmed"


def ledger_notes(store: FixtureStore) -> List[LedgerNote]:
    return [
        LedgerNote(key, entry["printed"], entry["computed"], entry["resolution"])
        for key, entry in store.load("ledger").items()
    ]


class FixtureRunner:
    """
    Runs the registered fixture checks and collects ledger notes.

    Args:
        store: Fixture store; the default verifies the embedded checksums
        checks: Checks to run, defaults to every registered check
    """

    def __init__(self, store: Optional[FixtureStore] = None, checks: Optional[Sequence[Check]] = None) -> None:
        self.store = store if store is not None else FixtureStore()
        self.checks = list(CHECKS if checks is None else checks)

    def select(self, selector: Optional[str] = None) -> List[Check]:
        selected = [c for c in self.checks if c.matches(selector)]
        if not selected:
            raise ValueError(f"No fixture check matches {selector!r}")
        return selected

    def run(self, selector: Optional[str] = None) -> FixtureReport:
        report = FixtureReport(ledger=ledger_notes(self.store))
        for item in self.select(selector):
            start = time.perf_counter()
            try:
                detail = item.func(self.store)
                passed = True
            except (CheckFailure, OpakitError) as exc:
                detail = f"{type(exc).__name__}: {exc}"
                passed = False
            seconds = time.perf_counter() - start
            if passed:
                logger.info("PASS %s (%.2fs): %s", item.name, seconds, detail)
            else:
                logger.error("FAIL %s (%.2fs): %s", item.name, seconds, detail)
            report.results.append(CheckResult(item.name, item.tags, passed, detail, seconds))
        for note in report.ledger:
            logger.info("ledger %s: printed %s, computed %s", note.key, note.printed, note.computed)
        logger.info(report.summary())
        return report


__all__ = [
    "CHECKS",
    "Check",
    "CheckFailure",
    "CheckResult",
    "FixtureReport",
    "FixtureRunner",
    "LedgerNote",
    "check",
    "ledger_notes",
]
