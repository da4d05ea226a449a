"""
Antichains of exit vectors under componentwise dominance.

Every realizable exit vector lies above some minimal one and the minimal ones
form a finite antichain; these helpers compute and merge such antichains.
"""

from dataclasses import dataclass
from typing import Callable, Iterable

from lattice.graph import ExitVector, SupportMismatch, VertexSet


@dataclass(frozen=True)
class FrontEntry:
    vector: ExitVector
    witness: VertexSet | None = None


@dataclass(frozen=True)
class ParetoFront:
    """Pareto-minimal exit vectors with witness sets, sorted by (total, vector)."""

    support: tuple
    entries: tuple
    exact: bool = False
    diameter_bound: int | None = None

    def __post_init__(self):
        for entry in self.entries:
            if entry.vector.support != self.support:
                raise SupportMismatch(f"front over {self.support} holds {entry.vector}")
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=_entry_key)))

    def vectors(self) -> frozenset:
        return frozenset(e.vector for e in self.entries)

    def value_tuples(self) -> frozenset:
        return frozenset(e.vector.values for e in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _values(item) -> tuple:
    return item.values if isinstance(item, ExitVector) else tuple(item)


def _entry_key(entry: FrontEntry):
    return (entry.vector.total(), entry.vector.values)


def _witness_key(witness: VertexSet | None):
    if witness is None:
        return (1, ())
    return (0, witness.members[-1], witness.members)


def leq(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimal_filter(items: Iterable, key: Callable | None = None) -> list:
    """
    Keep exactly the items whose vector is not strictly dominated by another's.

    Duplicated vectors keep their first occurrence. The result is ordered by
    (sum, vector), so applying the filter twice returns the same list.
    """
    key = key or _values
    seen = {}
    for item in items:
        seen.setdefault(key(item), item)

    kept = []
    # A strict dominator has a strictly smaller sum, so it is always kept first.
    for vec in sorted(seen, key=lambda v: (sum(v), v)):
        if not any(leq(k, vec) for k in kept):
            kept.append(vec)
    return [seen[v] for v in kept]


def front_from_pairs(support: tuple, pairs: Iterable, **kwargs) -> ParetoFront:
    """Front of (vector, witness) pairs; the first witness seen for a vector wins."""
    entries = [FrontEntry(v, w) for v, w in pairs]
    kept = minimal_filter(entries, key=lambda e: e.vector.values)
    return ParetoFront(tuple(support), tuple(kept), **kwargs)


def merge_fronts(a: ParetoFront, b: ParetoFront) -> ParetoFront:
    """
    Antichain union with dominance pruning.

    Commutative and associative: for equal vectors the witness with the
    smallest (max, members) is kept regardless of argument order.
    """
    if a.support != b.support:
        raise SupportMismatch(f"cannot merge fronts over {a.support} and {b.support}")
    best = {}
    for entry in (*a.entries, *b.entries):
        current = best.get(entry.vector)
        if current is None or _witness_key(entry.witness) < _witness_key(current.witness):
            best[entry.vector] = entry
    kept = minimal_filter(best.values(), key=lambda e: e.vector.values)
    bounds = [d for d in (a.diameter_bound, b.diameter_bound) if d is not None]
    return ParetoFront(
        a.support,
        tuple(kept),
        exact=a.exact and b.exact,
        diameter_bound=max(bounds) if bounds else None,
    )


def dominated_by_any(vector: tuple, front: Iterable[tuple]) -> bool:
    """True when some front vector is <= vector componentwise (equality included)."""
    return any(leq(f, vector) for f in front)
