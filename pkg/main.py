"""
Command-line entry point.

Usage:
    python3 main.py beta specs/example9.json --set 0,1,2
    python3 main.py kappa0 specs/example6.json --mode numeric --format json
    python3 main.py kappa0 specs/symbolic9.json --mode symbolic
    python3 main.py kappa0 specs/example5.json --mode oracle --max-diameter 4
    python3 main.py verify-examples [--only example6]
    python3 main.py simulate specs/example9.json --set 0,1,2 --walks 100000

Exit codes: 0 success, 2 the solver stopped at its state budget, 1 error.
"""

import argparse
import asyncio
import os
import sys

from dotenv import load_dotenv

from lattice.graph import SpecError, VertexSet, load_spec, with_overrides
from report import formatter
from report.progress import log, reporter
from search.formula import FORMATS
from search.frontier import solve_numeric, solve_symbolic
from search.oracle import EnumerationBudget, collect_sc_masks, front_of_masks, kappa0_of_masks
from walks.simulate import DEFAULT_CAP, estimate_visits, visit_report


load_dotenv()

EXIT_OK, EXIT_ERROR, EXIT_INEXACT = 0, 1, 2


def _parse_alpha(items: list) -> dict:
    overrides = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SpecError(f"--alpha expects i=p/q, got {item!r}")
        try:
            overrides[int(key)] = value
        except ValueError as exc:
            raise SpecError(f"--alpha offset must be an integer, got {key!r}") from exc
    return overrides


def _parse_set(text: str) -> VertexSet:
    try:
        return VertexSet.of(int(z) for z in text.split(",") if z.strip())
    except ValueError as exc:
        raise SpecError(f"--set expects comma-separated integers, got {text!r}") from exc


def _load(args):
    spec, weights = with_overrides(*load_spec(args.spec), _parse_alpha(args.alpha))
    if args.float and weights is not None:
        weights = weights.as_float()
    return spec, weights


def _require_weights(weights, command: str):
    if weights is None:
        raise SpecError(f"{command} needs weights; give them in the spec file or with --alpha")


# ── Commands ─────────────────────────────────────────────────────

def cmd_beta(args) -> tuple:
    spec, weights = _load(args)
    return formatter.build_beta_report(spec, weights, _parse_set(args.set)), EXIT_OK


def cmd_kappa0(args) -> tuple:
    spec, weights = _load(args)
    mode = args.mode or ("numeric" if weights is not None else "symbolic")
    log("kappa0", f"{mode} mode on {args.spec}")

    if mode == "numeric":
        _require_weights(weights, "numeric mode")
        result = solve_numeric(spec, weights, max_states=args.max_states, progress=reporter("solver"))
        report = formatter.build_kappa0_report(result, mode, format=args.format)
        return report, EXIT_OK if result.exact else EXIT_INEXACT

    if mode == "symbolic":
        front = solve_symbolic(spec, max_labels=args.max_states, progress=reporter("solver"))
        report = formatter.build_kappa0_report(None, mode, front=front, format=args.format)
        return report, EXIT_OK if front.exact else EXIT_INEXACT

    budget = EnumerationBudget(args.max_diameter)
    masks = collect_sc_masks(spec, budget, args.workers)
    log("oracle", f"{len(masks)} strongly connected sets within diameter {budget.max_diameter}")
    front = front_of_masks(spec, masks, diameter_bound=budget.max_diameter)
    result = kappa0_of_masks(spec, weights, masks, budget.max_diameter) if weights is not None else None
    return formatter.build_kappa0_report(result, mode, front=front, format=args.format), EXIT_OK


def cmd_verify_examples(args) -> tuple:
    from verify import VerifyOptions, verify_examples

    opts = VerifyOptions(
        draws=args.draws,
        seed=args.seed,
        max_states=args.max_states,
        fallback_diameter=args.max_diameter,
        workers=args.workers or int(os.environ.get("KAPPA0_WORKERS", "1")),
    )
    outcomes = asyncio.run(verify_examples(args.golden, args.only, opts))
    report = formatter.build_verify_report(outcomes, sum(o.fallbacks for o in outcomes))
    return report, EXIT_OK if report["passed"] else EXIT_ERROR


def cmd_simulate(args) -> tuple:
    spec, weights = _load(args)
    _require_weights(weights, "simulate")
    S = _parse_set(args.set)
    log("simulate", f"{args.walks} walks on {S}, cap {args.cap}, seed {args.seed}")
    stats = estimate_visits(spec, weights, S, args.walks, cap=args.cap, seed=args.seed, workers=args.workers)
    if stats.censored:
        log("simulate", f"{stats.censored} walks reached the cap")
    visits = visit_report(spec, weights, S, stats)
    return formatter.build_simulate_report(visits, S, args.seed), EXIT_OK


# ── Argument parsing ─────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--quiet", action="store_true", help="no progress lines on stderr")
    common.add_argument("--workers", type=int, default=None, help="default: $KAPPA0_WORKERS or 1")
    common.add_argument("--seed", type=int, default=42)

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("spec", help="graph-spec JSON file")
    graph.add_argument("--alpha", action="append", metavar="i=p/q", help="weight override, repeatable")
    graph.add_argument("--float", action="store_true", help="floating-point weights instead of rationals")

    parser = argparse.ArgumentParser(prog="kappa0", description="Exit weights and kappa_0 of shift-invariant graphs on Z")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beta", parents=[common, graph], help="exit vector and exit weight of a set")
    p.add_argument("--set", required=True, help="comma-separated vertices, e.g. 0,1,2")
    p.set_defaults(run=cmd_beta)

    p = sub.add_parser("kappa0", parents=[common, graph], help="minimal exit weight over strongly connected sets")
    p.add_argument("--mode", choices=("numeric", "symbolic", "oracle"), default=None)
    p.add_argument("--max-diameter", type=int, default=20)
    p.add_argument("--max-states", type=int, default=None, help="default: $KAPPA0_MAX_STATES")
    p.set_defaults(run=cmd_kappa0)

    p = sub.add_parser("verify-examples", parents=[common], help="run the golden suite")
    p.add_argument("--only", default=None, help="run a single case, e.g. example6")
    p.add_argument("--golden", default=None, help="default: $KAPPA0_GOLDEN_PATH")
    p.add_argument("--draws", type=int, default=200)
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--max-diameter", type=int, default=33, help="oracle diameter for budget fallbacks")
    p.set_defaults(run=cmd_verify_examples)

    p = sub.add_parser("simulate", parents=[common, graph], help="visits to 0 before leaving a set")
    p.add_argument("--set", required=True)
    p.add_argument("--walks", type=int, default=10_000)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(run=cmd_simulate)
    return parser


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.quiet:
        os.environ["KAPPA0_QUIET"] = "1"
    try:
        report, code = args.run(args)
    except Exception as exc:
        log(args.command, f"ERROR: {exc}")
        report, code = formatter.build_error_report(str(exc), args.command), EXIT_ERROR
    print(formatter.format_report(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
