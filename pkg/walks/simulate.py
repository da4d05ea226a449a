"""
Monte Carlo for the reinforced walk: visits to 0 before leaving a finite set.

Each walk draws from its own Philox stream keyed by (seed, walk index), so the
sample is the same whether the walks run in one process or in many.
"""

import asyncio
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from lattice.graph import (
    GraphSpec,
    InvalidSet,
    VertexSet,
    Weights,
    format_weight,
    is_strongly_connected,
    set_beta,
)


DEFAULT_CAP = 10**6
DEFAULT_KS = tuple(2**j for j in range(4, 13))
_BATCH = 4096
_CHUNK = 2000


@dataclass(frozen=True)
class VisitStats:
    """Visits to 0 before the first exit; censored walks keep their count at the cap."""

    samples: tuple
    cap: int
    censored: int
    seed: int

    @property
    def n_walks(self) -> int:
        return len(self.samples)

    def mean(self) -> float:
        return float(np.mean(self.samples)) if self.samples else math.nan


def walk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _one_walk(members: frozenset, offsets: tuple, alpha: tuple, cap: int, rng) -> tuple:
    weights_at = {}
    totals = {}
    x, visits, steps = 0, 1, 0
    uniforms, used = rng.random(_BATCH).tolist(), 0
    while steps < cap:
        if used == _BATCH:
            uniforms, used = rng.random(_BATCH).tolist(), 0
        w = weights_at.get(x)
        if w is None:
            w = weights_at[x] = list(alpha)
            totals[x] = sum(alpha)
        u = uniforms[used] * totals[x]
        used += 1
        k, acc = len(w) - 1, 0.0
        for j, wj in enumerate(w):
            acc += wj
            if u < acc:
                k = j
                break
        w[k] += 1
        totals[x] += 1
        steps += 1
        x += offsets[k]
        if x not in members:
            return visits, False
        if x == 0:
            visits += 1
    return visits, True


def _run_chunk(members: frozenset, offsets: tuple, alpha: tuple, cap: int, seed: int,
               start: int, stop: int) -> list:
    return [_one_walk(members, offsets, alpha, cap, walk_rng(seed, n)) for n in range(start, stop)]


async def _gather_chunks(args: tuple, n_walks: int, workers: int) -> list:
    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(workers)
    bounds = [(s, min(s + _CHUNK, n_walks)) for s in range(0, n_walks, _CHUNK)]

    with ProcessPoolExecutor(max_workers=workers) as pool:

        async def run_with_limit(start, stop):
            async with semaphore:
                return await loop.run_in_executor(pool, _run_chunk, *args, start, stop)

        parts = await asyncio.gather(*[run_with_limit(a, b) for a, b in bounds])
    return [walk for part in parts for walk in part]


def estimate_visits(
    spec: GraphSpec,
    weights: Weights,
    S: VertexSet,
    n_walks: int,
    cap: int = DEFAULT_CAP,
    seed: int = 42,
    workers: int | None = None,
) -> VisitStats:
    """Run n_walks reinforced walks from 0 and record visits to 0 before leaving S."""
    weights.check(spec)
    if 0 not in S:
        raise InvalidSet(f"the walk starts at 0, which is not in {S}")
    if not is_strongly_connected(spec, S):
        raise InvalidSet(f"{S} is not strongly connected")

    offsets = spec.offsets
    alpha = tuple(float(weights[i]) for i in offsets)
    args = (frozenset(S), offsets, alpha, cap, seed)
    workers = workers or int(os.environ.get("KAPPA0_WORKERS", "1"))
    if workers <= 1 or n_walks <= _CHUNK:
        walks = _run_chunk(*args, 0, n_walks)
    else:
        walks = asyncio.run(_gather_chunks(args, n_walks, workers))

    return VisitStats(
        samples=tuple(v for v, _ in walks),
        cap=cap,
        censored=sum(1 for _, c in walks if c),
        seed=seed,
    )


def survival_counts(stats: VisitStats, ks=DEFAULT_KS) -> list:
    samples = np.asarray(stats.samples)
    return [(int(k), int(np.count_nonzero(samples > k))) for k in ks]


def tail_slope(stats: VisitStats, ks=DEFAULT_KS) -> float:
    """Least-squares slope of log P(N0 > k) against log k over the nonzero points."""
    points = [(k, c) for k, c in survival_counts(stats, ks) if c > 0]
    if len(points) < 2:
        return math.nan
    k, c = np.array(points, dtype=float).T
    return float(np.polyfit(np.log(k), np.log(c / stats.n_walks), 1)[0])


def visit_report(spec: GraphSpec, weights: Weights, S: VertexSet, stats: VisitStats,
                 ks=DEFAULT_KS) -> dict:
    return {
        "beta_S": format_weight(set_beta(spec, weights, S)),
        "n_walks": stats.n_walks,
        "cap": stats.cap,
        "censored": stats.censored,
        "mean": stats.mean(),
        "survival": [list(p) for p in survival_counts(stats, ks)],
        "slope": tail_slope(stats, ks),
    }
