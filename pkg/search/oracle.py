"""
Brute-force oracle over canonical strongly connected sets of bounded diameter.

Sets are packed into int bitmasks (bit z <=> z in S, leftmost member 0).
Enumeration is a depth-first scan of positions 1..m-1 for each maximum m,
including a position before excluding it, so the stream comes out ordered by
max and then lexicographically by membership. A vertex is dropped as soon as
all of its out-neighbours (or all of its in-neighbours) are decided and none
is a member; complete candidates get a full reachability check.

The oracle never claims exactness: its values are restricted to diameter <= D.
"""

import asyncio
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from lattice.graph import (
    ExitVector,
    GraphSpec,
    Number,
    VertexSet,
    Weights,
)
from search.pareto import FrontEntry, ParetoFront, minimal_filter


class BudgetExhausted(RuntimeError):
    """The enumeration cap was hit before the family was exhausted."""


class EmptyFamily(ValueError):
    """No strongly connected set fits inside the budget."""


@dataclass(frozen=True)
class EnumerationBudget:
    max_diameter: int
    max_sets: int | None = None

    def __post_init__(self):
        if self.max_diameter < 0:
            raise ValueError(f"max_diameter must be >= 0, got {self.max_diameter}")
        if self.max_sets is not None and self.max_sets < 1:
            raise ValueError(f"max_sets must be positive, got {self.max_sets}")


@dataclass(frozen=True)
class OracleResult:
    value: Number
    witness: VertexSet
    diameter_bound: int
    sets_examined: int
    exact: bool = False


# ── Bitmask primitives ───────────────────────────────────────────

def _shift(mask: int, i: int) -> int:
    """Move every bit z to z+i (bits pushed below 0 are dropped)."""
    return mask << i if i >= 0 else mask >> -i


def _closure(mask: int, steps: tuple, start: int = 1) -> int:
    reach = start
    while True:
        grown = reach
        for i in steps:
            grown |= _shift(reach, i) & mask
        if grown == reach:
            return reach
        reach = grown


def mask_is_strongly_connected(spec: GraphSpec, mask: int) -> bool:
    """Forward and backward closure from vertex 0 must both cover the set."""
    if mask == 1:
        return spec.has_loop
    steps = tuple(i for i in spec.offsets if i != 0)
    if _closure(mask, steps) != mask:
        return False
    return _closure(mask, tuple(-i for i in steps)) == mask


def mask_exit_values(offsets: tuple, mask: int) -> tuple:
    """Exit counts x_i in the order of `offsets`."""
    out = []
    for i in offsets:
        if i == 0:
            out.append(0)
        else:
            out.append((mask & ~_shift(mask, -i)).bit_count())
    return tuple(out)


def mask_exit_vector(spec: GraphSpec, mask: int) -> ExitVector:
    offsets = spec.offsets
    return ExitVector(offsets, mask_exit_values(offsets, mask))


# ── Enumeration ──────────────────────────────────────────────────

class _Scanner:
    """Depth-first generator of strongly connected masks with a fixed maximum."""

    def __init__(self, spec: GraphSpec):
        self.spec = spec
        self.steps = tuple(i for i in spec.offsets if i != 0)

    def _has_out(self, z: int, mask: int) -> bool:
        return any(z + i >= 0 and mask >> (z + i) & 1 for i in self.steps)

    def _has_in(self, z: int, mask: int) -> bool:
        return any(z - i >= 0 and mask >> (z - i) & 1 for i in self.steps)

    def _locally_ok(self, p: int, mask: int) -> bool:
        z = p - self.spec.R
        if z >= 0 and mask >> z & 1 and not self._has_out(z, mask):
            return False
        z = p - self.spec.L
        if z >= 0 and mask >> z & 1 and not self._has_in(z, mask):
            return False
        return True

    def masks(self, m: int) -> Iterator[int]:
        if m == 0:
            if self.spec.has_loop:
                yield 1
            return
        yield from self._extend(1, m, 1 | 1 << m)

    def _extend(self, p: int, m: int, mask: int) -> Iterator[int]:
        if p == m:
            if mask_is_strongly_connected(self.spec, mask):
                yield mask
            return
        with_p = mask | 1 << p
        if self._locally_ok(p, with_p):
            yield from self._extend(p + 1, m, with_p)
        if self._locally_ok(p, mask):
            yield from self._extend(p + 1, m, mask)


def iter_sc_masks(spec: GraphSpec, max_diameter: int) -> Iterator[int]:
    scanner = _Scanner(spec)
    for m in range(max_diameter + 1):
        yield from scanner.masks(m)


def enumerate_sc_sets(spec: GraphSpec, budget: EnumerationBudget) -> Iterator[VertexSet]:
    """Every canonical strongly connected set with max <= D, each exactly once."""
    count = 0
    for mask in iter_sc_masks(spec, budget.max_diameter):
        if budget.max_sets is not None and count >= budget.max_sets:
            raise BudgetExhausted(
                f"more than {budget.max_sets} strongly connected sets within diameter "
                f"{budget.max_diameter}"
            )
        count += 1
        yield VertexSet.from_mask(mask)


def _masks_for_max(spec: GraphSpec, m: int) -> list:
    return list(_Scanner(spec).masks(m))


async def _collect_partitions(spec: GraphSpec, max_diameter: int, workers: int) -> list:
    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(workers)

    with ProcessPoolExecutor(max_workers=workers) as pool:

        async def scan_with_limit(m):
            async with semaphore:
                return await loop.run_in_executor(pool, _masks_for_max, spec, m)

        parts = await asyncio.gather(
            *[scan_with_limit(m) for m in range(max_diameter + 1)]
        )
    return [mask for part in parts for mask in part]


def collect_sc_masks(spec: GraphSpec, budget: EnumerationBudget, workers: int | None = None) -> list:
    """
    Same sequence as iter_sc_masks, partitioned by maximum element across
    worker processes and concatenated in partition order.
    """
    workers = workers or int(os.environ.get("KAPPA0_WORKERS", "1"))
    if workers <= 1:
        masks = list(iter_sc_masks(spec, budget.max_diameter))
    else:
        masks = asyncio.run(_collect_partitions(spec, budget.max_diameter, workers))
    if budget.max_sets is not None and len(masks) > budget.max_sets:
        raise BudgetExhausted(
            f"{len(masks)} strongly connected sets within diameter {budget.max_diameter} "
            f"exceed the cap of {budget.max_sets}"
        )
    return masks


def collect_sc_sets(spec: GraphSpec, budget: EnumerationBudget, workers: int | None = None) -> list:
    return [VertexSet.from_mask(m) for m in collect_sc_masks(spec, budget, workers)]


# ── Oracle answers ───────────────────────────────────────────────

def kappa0_of_masks(spec: GraphSpec, weights: Weights, masks, diameter_bound: int) -> OracleResult:
    """Minimum exit weight over already enumerated masks; first argmin wins ties."""
    weights.check(spec)
    offsets = spec.offsets
    alpha = [weights[i] for i in offsets]
    best_value, best_mask, count = None, None, 0
    for mask in masks:
        count += 1
        value = sum((n * a for n, a in zip(mask_exit_values(offsets, mask), alpha)), Fraction(0))
        if best_value is None or value < best_value:
            best_value, best_mask = value, mask
    if best_mask is None:
        raise EmptyFamily(
            f"no strongly connected set of diameter <= {diameter_bound} for this graph"
        )
    return OracleResult(
        value=best_value,
        witness=VertexSet.from_mask(best_mask),
        diameter_bound=diameter_bound,
        sets_examined=count,
    )


def oracle_kappa0(spec: GraphSpec, weights: Weights, budget: EnumerationBudget) -> OracleResult:
    """Minimum exit weight over the enumerated family; first argmin wins ties."""
    masks = (S.mask() for S in enumerate_sc_sets(spec, budget))
    return kappa0_of_masks(spec, weights, masks, budget.max_diameter)


def front_of_masks(spec: GraphSpec, masks, diameter_bound: int | None = None) -> ParetoFront:
    offsets = spec.offsets
    pairs = ((mask_exit_values(offsets, mask), mask) for mask in masks)
    kept = minimal_filter(pairs, key=lambda pair: pair[0])
    entries = tuple(
        FrontEntry(ExitVector(offsets, values), VertexSet.from_mask(mask))
        for values, mask in kept
    )
    return ParetoFront(offsets, entries, exact=False, diameter_bound=diameter_bound)


def oracle_pareto(spec: GraphSpec, budget: EnumerationBudget) -> ParetoFront:
    """Candidate front at diameter D: minimal exit vectors of the enumerated family."""
    masks = (S.mask() for S in enumerate_sc_sets(spec, budget))
    return front_of_masks(spec, masks, diameter_bound=budget.max_diameter)
