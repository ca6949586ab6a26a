"""
Command-line driver.

Every subcommand prints (or saves with --out) a JSON report holding the full
run configuration next to the result; face profiles and filter outputs are
CSV tables. Exit codes: 0 success, 1 fixture failures, 2 parse or usage
error, 3 mode error, 4 fixture integrity error, 5 any other library error.
"""

import argparse
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .approx.closed_forms import (
    DiagonalTarget,
    WeightSequence,
    ball_distance_rates,
    cyclicity_classify,
    da_weight_asymptotic,
    diag_embed_opa,
    fms_distance,
)
from .approx.opa import opa, opa_sequence
from .approx.ortho import DIFFERENCE, opa_differences, verify_recovery, weighted_gram_schmidt
from .approx.shapiro import shapiro_shields, ss_verify
from .core.errors import FixtureIntegrityError, ModeError, OpakitError, ParseError
from .core.spaces import SpaceSpec
from .core.text import parse_poly, parse_scalar
from .filters.recursive import DataArray, FilterSpec, impulse_response, run_recursion, stability_check, stabilize
from .fixtures.loader import FixtureStore
from .fixtures.runner import FixtureRunner
from .utils.serialization import ReportSaver
from .utils.utils import parse_points
from .zeros.scan import face_profile, polydisk_zero_free

logger = logging.getLogger("opakit")

OUTPUT_DIR_ENV = "OPAKIT_OUTPUT_DIR"

EXIT_OK = 0
EXIT_FIXTURE_FAILURES = 1
EXIT_USAGE = 2
EXIT_MODE = 3
EXIT_INTEGRITY = 4
EXIT_LIBRARY = 5


class UsageError(OpakitError, ValueError):
    """Raised for option combinations argparse cannot reject on its own."""


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; emitted with every result."""

    command: str
    space: Optional[str] = None
    target: Optional[str] = None
    orders: Tuple[int, ...] = ()
    mode: Optional[str] = None
    grid: Optional[int] = None
    margin: Optional[float] = None
    output: str = "json"
    out: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["orders"] = list(self.orders)
        return data


def resolve_output(out: Optional[str]) -> Optional[Path]:
    """A bare file name goes to $OPAKIT_OUTPUT_DIR when that is set."""
    if out is None:
        return None
    path = Path(out)
    directory = os.environ.get(OUTPUT_DIR_ENV)
    if directory and path.parent == Path("."):
        return Path(directory) / path
    return path


def _emit_json(cfg: RunConfig, result: Any) -> None:
    path = resolve_output(cfg.out)
    if path is None:
        sys.stdout.write(ReportSaver.to_json(cfg.to_dict(), result))
    else:
        ReportSaver.save_json(cfg.to_dict(), result, path)
        logger.info("Wrote %s", path)


def _emit_csv(cfg: RunConfig, rows: Sequence[Sequence[Any]], header: Optional[Sequence[str]] = None) -> None:
    path = resolve_output(cfg.out)
    if path is None:
        sys.stdout.write(ReportSaver.csv_text(rows, header))
    else:
        ReportSaver.save_csv(rows, path, header)
        logger.info("Wrote %s", path)


def _space(cfg: RunConfig) -> SpaceSpec:
    return SpaceSpec.parse(cfg.space or "hardy2")


def _target(cfg: RunConfig, d: int) -> Any:
    return parse_poly(cfg.target or "1", d)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_opa(cfg: RunConfig) -> int:
    space = _space(cfg)
    f = _target(cfg, space.d)
    n = cfg.orders[0]
    reduce = not cfg.options.get("no_reduce", False)
    if cfg.options.get("sequence"):
        results = opa_sequence(space, f, n, mode=cfg.mode, reduce=reduce)
        _emit_json(cfg, {"space": space.describe(), "f": str(f), "sequence": results})
    else:
        _emit_json(cfg, opa(space, f, n, mode=cfg.mode, reduce=reduce))
    return EXIT_OK


def cmd_ortho(cfg: RunConfig) -> int:
    space = _space(cfg)
    f = _target(cfg, space.d)
    N = cfg.orders[0]
    family = weighted_gram_schmidt(space, f, N)
    diffs = opa_differences(opa_sequence(space, f, N, mode=cfg.mode))
    recovery = verify_recovery(family, diffs)
    _emit_json(
        cfg,
        {
            "space": space.describe(),
            "f": str(f),
            "convention": {"members": family.convention, "differences": DIFFERENCE},
            "members": [str(p) for p in family.members],
            "norms": family.norms,
            "differences": [str(p) for p in diffs],
            "recovery": [
                {"n": e.n, "kind": e.kind, "scalar": e.scalar, "ok": e.ok, "detail": e.detail}
                for e in recovery.entries
            ],
            "recovered": recovery.ok,
        },
    )
    return EXIT_OK if recovery.ok else EXIT_LIBRARY


def cmd_closed_form(cfg: RunConfig) -> int:
    kind = cfg.options["kind"]
    if kind == "diag":
        target = DiagonalTarget.parse(cfg.target or "ball:2")
        n = cfg.orders[0]
        embedded = diag_embed_opa(target, n)
        result: Dict[str, Any] = {
            "target": str(target.target_poly()),
            "order": n,
            "approximant": str(embedded.approximant),
            "valid_ranks": list(embedded.valid_ranks),
            "distance": asdict(fms_distance(embedded.weights, n)),
            "cyclicity": asdict(cyclicity_classify(target)),
        }
    elif kind == "distance":
        weights = WeightSequence.parse(cfg.options["weights"])
        n = cfg.orders[0] if cfg.orders else None
        result = {"weights": weights.describe(), "n": n, "distance": asdict(fms_distance(weights, n, cfg.options["terms"]))}
    elif kind == "asymptotic":
        table = da_weight_asymptotic(cfg.options["d"], cfg.options["kmax"])
        result = {"d": table.d, "drift": table.drift, "rows": [asdict(r) for r in table.rows]}
    else:
        result = {"rates": [asdict(r) for r in ball_distance_rates(cfg.orders[0])]}
    _emit_json(cfg, result)
    return EXIT_OK


def cmd_shapiro(cfg: RunConfig) -> int:
    space = _space(cfg)
    points = [tuple(parse_scalar(c) for c in pt) for pt in parse_points(cfg.options["points"])]
    ssf = shapiro_shields(space, points)
    if cfg.options.get("normalize"):
        ssf = ssf.normalized()
    report = ss_verify(ssf, cfg.orders[0], cfg.options["jmax"], exact=cfg.mode == "exact")
    _emit_json(
        cfg,
        {
            "space": space.describe(),
            "points": [list(pt) for pt in ssf.points],
            "cofactors": ssf.cofactors,
            "exact": ssf.exact,
            "norm2": ssf.norm2(),
            "weak_residuals": [list(r) for r in report.weak_residuals],
            "point_residuals": [list(r) for r in report.point_residuals],
            "determinant_residuals": report.determinant_residuals,
            "tail_bound": report.tail_bound,
            "passed": report.passed,
        },
    )
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    p = _target(cfg, 2)
    face = cfg.options["face"]
    profile = face_profile(p, face, grid=cfg.grid or 1024, seed=cfg.options["seed"])
    logger.info("face z%d: global minimum %.6g over %d samples", face, profile.global_min, len(profile.samples))
    if cfg.output == "json":
        _emit_json(cfg, profile)
    else:
        _emit_csv(cfg, profile.to_rows(), ["t", "min_modulus"])
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    p = _target(cfg, 2)
    verdict = polydisk_zero_free(p, grid=cfg.grid or 2048, margin=cfg.margin or 1e-3, seed=cfg.options["seed"])
    _emit_json(cfg, {"p": str(p), "verdict": verdict})
    return EXIT_OK


def cmd_filter(cfg: RunConfig) -> int:
    action = cfg.options["action"]
    B = parse_poly(cfg.options["B"], 2)
    if action == "stability":
        _emit_json(cfg, {"B": str(B), "verdict": stability_check(B, cfg.grid or 2048, cfg.margin or 1e-3)})
        return EXIT_OK
    if action == "stabilize":
        report = stabilize(B, cfg.orders[0], window=cfg.options["window"], grid=cfg.grid or 2048,
                           margin=cfg.margin or 1e-3, mode=cfg.mode)
        _emit_json(cfg, report)
        return EXIT_OK
    fs = FilterSpec(parse_poly(cfg.options["A"], 2), B)
    if action == "impulse":
        window = cfg.options["window"]
        _emit_json(cfg, {"filter": fs, "impulse": impulse_response(fs, window, window)})
        return EXIT_OK
    data = DataArray(ReportSaver.load_csv_array(cfg.options["data"]))
    rows, cols = data.shape
    rows = cfg.options.get("rows") or rows
    cols = cfg.options.get("cols") or cols
    R = run_recursion(fs, data, rows, cols)
    _emit_csv(cfg, R.entries.tolist())
    return EXIT_OK


def cmd_fixtures(cfg: RunConfig) -> int:
    runner = FixtureRunner(FixtureStore())
    try:
        checks = runner.select(cfg.options.get("filter"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = runner.run(cfg.options.get("filter"))
    logger.debug("ran %d fixture checks", len(checks))
    for r in report.results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.seconds:.2f}s): {r.detail}")
    for note in report.ledger:
        print(f"ledger {note.key}: printed {note.printed}; computed {note.computed}; {note.resolution}")
    print(report.summary())
    if cfg.out is not None:
        ReportSaver.save_json(cfg.to_dict(), report, resolve_output(cfg.out))  # type: ignore[arg-type]
    return EXIT_OK if report.ok else EXIT_FIXTURE_FAILURES


COMMANDS = {
    "opa": cmd_opa,
    "ortho": cmd_ortho,
    "closed-form": cmd_closed_form,
    "shapiro": cmd_shapiro,
    "profile": cmd_profile,
    "scan": cmd_scan,
    "filter": cmd_filter,
    "fixtures": cmd_fixtures,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _face(text: str) -> int:
    value = text.strip().lower().lstrip("z")
    if value not in ("1", "2"):
        raise argparse.ArgumentTypeError(f"face must be z1 or z2, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opakit", description="Optimal polynomial approximants in several variables.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, space: bool = True, mode: bool = True) -> None:
        if space:
            p.add_argument("--space", default="hardy2", help="Space descriptor, e.g. hardy2, dirichlet:1,1, da:2")
        if mode:
            p.add_argument("--mode", choices=["exact", "float"], default=None, help="Arithmetic (default: automatic)")
        p.add_argument("--out", default=None, help=f"Output file (bare names go to ${OUTPUT_DIR_ENV})")

    p = sub.add_parser("opa", help="Optimal approximant to 1/f")
    common(p)
    p.add_argument("--f", required=True, help="Target polynomial, e.g. 2-z1-z2")
    p.add_argument("--n", type=int, required=True, help="Order")
    p.add_argument("--sequence", action="store_true", help="Report every order 0..n")
    p.add_argument("--no-reduce", action="store_true", help="Solve on every rank, not only the connected ones")

    p = sub.add_parser("ortho", help="Weighted orthogonal polynomials and approximant differences")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("closed-form", help="One-variable closed forms for diagonal targets")
    common(p, space=False, mode=False)
    p.add_argument("kind", choices=["diag", "distance", "asymptotic", "rates"])
    p.add_argument("--target", default="ball:2", help="bidisk:a1,a2 or ball:d (diag)")
    p.add_argument("--weights", default="dirichlet:2", help="Weight sequence (distance)")
    p.add_argument("--n", type=int, default=None, help="Order; the limit when omitted (distance)")
    p.add_argument("--terms", type=int, default=500, help="Series terms for tail-corrected limits")
    p.add_argument("--d", type=int, default=2, help="Dimension (asymptotic)")
    p.add_argument("--kmax", type=int, default=400, help="Largest k (asymptotic)")

    p = sub.add_parser("shapiro", help="Shapiro-Shields function and its truncation residuals")
    common(p)
    p.add_argument("--points", required=True, help='Zeros, e.g. "(1/2,1/3);(1/4,0)"')
    p.add_argument("--trunc", type=int, default=60, help="Truncation degree")
    p.add_argument("--jmax", type=int, default=10, help="Largest j in the weak inner test")
    p.add_argument("--normalize", action="store_true", help="Scale to unit norm")

    p = sub.add_parser("profile", help="Minimum root modulus over one face of the torus")
    common(p, space=False, mode=False)
    p.add_argument("--f", required=True)
    p.add_argument("--face", type=_face, default=2, help="Variable on the torus (z1 or z2)")
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("scan", help="Zero-free verdict on the closed bidisk")
    common(p, space=False, mode=False)
    p.add_argument("--f", required=True)
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--margin", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("filter", help="Two-dimensional recursive filters")
    common(p, space=False)
    p.add_argument("action", choices=["run", "impulse", "stability", "stabilize"])
    p.add_argument("--A", default="1", help="Numerator polynomial")
    p.add_argument("--B", required=True, help="Denominator polynomial")
    p.add_argument("--data", default=None, help="CSV data array (run)")
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--cols", type=int, default=None)
    p.add_argument("--n", type=int, default=2, help="Approximant order (stabilize)")
    p.add_argument("--window", type=int, default=12, help="Impulse response window")
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--margin", type=float, default=1e-3)

    p = sub.add_parser("fixtures", help="Run the embedded regression tables")
    p.add_argument("--filter", default=None, help="Run only checks with this name or tag")
    p.add_argument("--out", default=None, help="Save the report as JSON")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    command = args.command

    def get(name: str) -> Any:
        return getattr(args, name, None)

    n = get("n")
    orders: Tuple[int, ...] = () if n is None else (n,)
    options: Dict[str, Any] = {}
    target = get("f")
    output = "json"
    if command == "opa":
        options = {"sequence": args.sequence, "no_reduce": args.no_reduce}
    elif command == "closed-form":
        options = {"kind": args.kind, "weights": args.weights, "terms": args.terms, "d": args.d, "kmax": args.kmax}
        target = args.target
        if args.kind in ("diag", "rates") and n is None:
            raise UsageError(f"closed-form {args.kind} needs --n")
    elif command == "shapiro":
        options = {"points": args.points, "jmax": args.jmax, "normalize": args.normalize}
        orders = (args.trunc,)
    elif command == "profile":
        options = {"face": args.face, "seed": args.seed}
        output = args.format
    elif command == "scan":
        options = {"seed": args.seed}
    elif command == "filter":
        options = {"action": args.action, "A": args.A, "B": args.B, "data": args.data,
                   "rows": args.rows, "cols": args.cols, "window": args.window}
        target = args.B
        if args.action == "run" and args.data is None:
            raise UsageError("filter run needs --data")
    elif command == "fixtures":
        options = {"filter": args.filter}
    return RunConfig(
        command=command,
        space=get("space"),
        target=target,
        orders=orders,
        mode=get("mode"),
        grid=get("grid"),
        margin=get("margin"),
        output=output,
        out=get("out"),
        options=options,
    )


def _report_parse_error(exc: ParseError) -> None:
    print(f"opakit: parse error: {exc}", file=sys.stderr)
    if exc.text:
        print(f"  {exc.text}", file=sys.stderr)
        print(f"  {' ' * exc.position}^", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        _report_parse_error(exc)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"opakit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModeError as exc:
        print(f"opakit: mode error: {exc}", file=sys.stderr)
        return EXIT_MODE
    except FixtureIntegrityError as exc:
        print(f"opakit: fixture integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (OpakitError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"opakit: error: {exc}", file=sys.stderr)
        return EXIT_LIBRARY


__all__ = ["RunConfig", "build_parser", "make_config", "main", "resolve_output"]
