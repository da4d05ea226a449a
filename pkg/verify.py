"""
Golden-suite runner for the worked examples.

Each case in the golden file names a graph-spec file and the expected kappa_0
formula as a list of exit vectors. A case passes when the computed answer
agrees with that formula at the file's weights and at random weight draws,
and when every listed witness, exit weight and numeric value checks out.

Usage:
    python3 verify.py [--only example6] [--golden specs/golden.json]

Configuration via environment variables (see .env.example):
    KAPPA0_GOLDEN_PATH  golden file, default "specs/golden.json"
    KAPPA0_WORKERS      worker processes for cases and enumeration, default 1
    KAPPA0_MAX_STATES   solver state budget, default 2000000
"""

import asyncio
import difflib
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

from dotenv import load_dotenv

from lattice.graph import (
    ExitVector,
    VertexSet,
    exit_vector,
    is_strongly_connected,
    load_spec,
    parse_weight,
    random_weights,
    set_beta,
)
from report.progress import log, reporter
from search.claims import EXAMPLE6, example6_claims
from search.formula import evaluate, from_front, from_vectors, render
from search.frontier import solve_numeric, solve_symbolic
from search.oracle import EnumerationBudget, collect_sc_masks, front_of_masks, mask_exit_values


load_dotenv()


@dataclass
class VerifyOptions:
    draws: int = 200
    seed: int = 42
    max_states: int | None = None
    draw_states: int = 200_000
    fallback_diameter: int = 33
    claims_diameter: int = 24
    claims_draws: int = 100
    workers: int = 1


@dataclass
class CaseOutcome:
    name: str
    passed: bool
    expected: str
    actual: str
    note: str = ""
    diff: str = ""
    fallbacks: int = 0
    failures: list = field(default_factory=list)


def load_golden(path: str | None = None) -> list:
    path = path or os.environ.get("KAPPA0_GOLDEN_PATH", "specs/golden.json")
    with open(path) as f:
        return json.load(f)["cases"]


def _diff(expected: str, actual: str) -> str:
    lines = difflib.unified_diff(
        expected.splitlines(), actual.splitlines(), "expected", "computed", lineterm=""
    )
    return "\n".join(lines)


@lru_cache(maxsize=None)
def _fallback_front(spec_path: str, diameter: int, workers: int):
    spec, _ = load_spec(spec_path)
    log("verify", f"building oracle front at diameter {diameter} for {spec_path}")
    masks = collect_sc_masks(spec, EnumerationBudget(diameter), workers)
    return from_front(front_of_masks(spec, masks, diameter_bound=diameter))


def run_case(case: dict, opts: VerifyOptions) -> CaseOutcome:
    """Run every check a golden case asks for; failures are collected, not raised."""
    name = case["name"]
    spec, weights = load_spec(case["spec"])
    terms = [ExitVector.from_counts({int(i): n for i, n in t.items()}) for t in case["formula"]]
    expected_formula = from_vectors(spec.offsets, [t.values for t in terms])
    expected = render(expected_formula)
    actual = expected
    failures = []
    fallbacks = 0
    rng = random.Random(opts.seed)
    log("verify", f"{name}: {spec.L=} {spec.R=} support={list(spec.offsets)}")

    for members, term in zip(case.get("witnesses", []), terms):
        S = VertexSet(tuple(members))
        if not is_strongly_connected(spec, S):
            failures.append(f"witness {S} is not strongly connected")
        elif exit_vector(spec, S) != term:
            failures.append(f"witness {S} has exit vector {exit_vector(spec, S)}, expected {term}")

    for key, value in case.get("beta", {}).items():
        S = VertexSet.of(int(z) for z in key.split(","))
        got = set_beta(spec, weights, S)
        if got != parse_weight(value):
            failures.append(f"beta{S} = {got}, expected {value}")

    if case.get("mode", "symbolic") == "symbolic":
        front = solve_symbolic(spec, max_labels=opts.max_states, progress=reporter("solver"))
        computed = from_front(front)
        actual = render(computed)
        if not front.exact:
            failures.append("symbolic search stopped at its label budget")
        for w in [weights] + [random_weights(spec, rng) for _ in range(opts.draws)]:
            if evaluate(computed, w) != evaluate(expected_formula, w):
                failures.append(
                    f"formulas disagree at alpha={w.alpha}: "
                    f"{evaluate(computed, w)} vs {evaluate(expected_formula, w)}"
                )
                break

    if "kappa0" in case:
        result = solve_numeric(spec, weights, max_states=opts.max_states, progress=reporter("solver"))
        want = parse_weight(case["kappa0"])
        if not result.exact:
            failures.append(f"numeric search stopped at its state budget, gap {result.gap}")
        elif result.value != want:
            failures.append(f"kappa0 = {result.value}, expected {want}")
        if "witness" in case and result.witness != VertexSet(tuple(case["witness"])):
            failures.append(f"witness {result.witness}, expected {VertexSet(tuple(case['witness']))}")
        if case.get("mode") == "numeric":
            expected = f"kappa0 = {want}"
            actual = f"kappa0 = {result.value}"

    if case.get("mode") == "numeric" and opts.draws:
        for n in range(opts.draws):
            w = random_weights(spec, rng)
            result = solve_numeric(spec, w, max_states=opts.draw_states)
            if result.exact:
                got = result.value
            else:
                fallbacks += 1
                got = evaluate(_fallback_front(case["spec"], opts.fallback_diameter, opts.workers), w)
            if got != evaluate(expected_formula, w):
                failures.append(f"draw {n}: kappa0 = {got}, formula gives {evaluate(expected_formula, w)}")
                break
        if fallbacks:
            log("verify", f"{name}: {fallbacks} of {opts.draws} draws used the oracle front")

    passed = not failures
    diff = "" if passed else _diff(expected, actual)
    if failures:
        diff = "\n".join(failures) + ("\n" + diff if diff else "")
    return CaseOutcome(name, passed, expected, actual, case.get("note", ""), diff, fallbacks, failures)


def run_claims(opts: VerifyOptions) -> CaseOutcome:
    """Exhaustive check of the exit-vector bounds over sets of diameter <= claims_diameter."""
    D = opts.claims_diameter
    log("verify", f"enumerating strongly connected sets of diameter <= {D}")
    masks = collect_sc_masks(EXAMPLE6, EnumerationBudget(D), opts.workers)
    vectors = {mask_exit_values(EXAMPLE6.offsets, m) for m in masks}
    for x in vectors:
        if any(n < 1 for i, n in zip(EXAMPLE6.offsets, x) if i != 0):
            return CaseOutcome("example6_claims", False, "x_i >= 1", f"vector {x} has a zero count")
    violations = example6_claims(vectors, draws=opts.claims_draws, rng=random.Random(opts.seed))
    actual = f"{len(masks)} sets, {len(vectors)} distinct vectors, {len(violations)} violations"
    return CaseOutcome(
        "example6_claims",
        not violations,
        "no violations",
        actual,
        diff="\n".join(str(v) for v in violations[:20]),
    )


async def _run_cases_in_pool(cases: list, opts: VerifyOptions, workers: int) -> list:
    """Cases run in worker processes, one case per process at a time; outcomes keep case order."""
    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(workers)
    case_opts = replace(opts, workers=1)

    with ProcessPoolExecutor(max_workers=workers) as pool:

        async def run_with_limit(case):
            async with semaphore:
                return await loop.run_in_executor(pool, run_case, case, case_opts)

        return list(await asyncio.gather(*[run_with_limit(c) for c in cases]))


async def verify_examples(
    golden_path: str | None = None,
    only: str | None = None,
    opts: VerifyOptions | None = None,
) -> list:
    """Run the golden suite; `only` restricts it to one case (example6 adds the claim checks)."""
    opts = opts or VerifyOptions()
    cases = load_golden(golden_path)
    if only:
        cases = [c for c in cases if c["name"] == only]
        if not cases:
            raise KeyError(f"no golden case named {only!r}")

    workers = min(max(opts.workers, 1), len(cases))
    if workers <= 1:
        outcomes = [await asyncio.to_thread(run_case, case, opts) for case in cases]
    else:
        outcomes = await _run_cases_in_pool(cases, opts, workers)
    if only and any(c.get("claims") for c in cases):
        outcomes.append(await asyncio.to_thread(run_claims, opts))

    for outcome in outcomes:
        log("verify", f"{outcome.name}: {'PASS' if outcome.passed else 'FAIL'}")
    return outcomes


if __name__ == "__main__":
    import sys

    from main import main

    sys.exit(main(["verify-examples", *sys.argv[1:]]))
