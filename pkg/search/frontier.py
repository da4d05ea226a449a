"""
Exact kappa_0 without a diameter bound.

A canonical set is scanned left to right. After position p is decided, only
the last W = max(L, R) positions can still gain edges, so a partial set is
abstracted by a FrontierState:

    window   membership bits of positions p-W+1..p (index W-1 is p)
    reach    reach[a] = window members reachable from member a by a nonempty
             path through decided members (transitively closed)

A member leaving the window must reach, and be reached by, some member still
in the window; otherwise it can never rejoin a cycle and the state is dead.
Once that holds its obligation is carried by window reachability, so no
retired profile needs to be stored.

Exit edges are charged as soon as both endpoints are decided, which makes
every label nondecreasing along a path; the charges over an accepted path
add up to the exit vector of the set it spells.

solve_numeric is A* over states (weights fixed), solve_symbolic is a
multi-objective label-setting search whose per-state antichains are finite by
Dickson's lemma.
"""

import heapq
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from lattice.graph import (
    ExitVector,
    GraphSpec,
    Number,
    VertexSet,
    Weights,
    half_sums,
)
from search.pareto import ParetoFront, dominated_by_any, front_from_pairs


BUILDING = "building"
CLOSED = "closed"

INCLUDE, EXCLUDE, CLOSE = 0, 1, 2


class FrontierState(NamedTuple):
    window: int
    reach: tuple
    phase: str = BUILDING


SINK = FrontierState(0, (), CLOSED)


@dataclass(frozen=True)
class SolveResult:
    value: Number | None
    witness: VertexSet | None
    exact: bool
    states_explored: int
    lower_bound: Number
    gap: Number | None = None


def default_max_states() -> int:
    return int(os.environ.get("KAPPA0_MAX_STATES", "2000000"))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FrontierAutomaton:
    """Transition system over FrontierStates; charges are exit-count increments."""

    def __init__(self, spec: GraphSpec):
        self.spec = spec
        self.W = spec.width
        self.offsets = spec.offsets
        self._slot = {i: k for k, i in enumerate(self.offsets)}
        self.pos = tuple(i for i in self.offsets if i > 0)
        self.neg = tuple(i for i in self.offsets if i < 0)
        self._cache = {}

    def _charge(self, offsets) -> tuple:
        inc = [0] * len(self.offsets)
        for i in offsets:
            inc[self._slot[i]] += 1
        return tuple(inc)

    def initial(self) -> tuple:
        """Position 0 is a member and every negative position is excluded."""
        W = self.W
        newest = 1 << (W - 1)
        reach = [0] * W
        if self.spec.has_loop:
            reach[W - 1] = newest
        return FrontierState(newest, tuple(reach)), self._charge(self.neg)

    def successors(self, state: FrontierState) -> list:
        """[(decision, next_state, increment)] for every live transition."""
        cached = self._cache.get(state)
        if cached is None:
            cached = self._cache[state] = self._expand(state)
        return cached

    def _expand(self, state: FrontierState) -> list:
        out = []
        for decision in (INCLUDE, EXCLUDE):
            nxt, charged = self._step(state, decision == INCLUDE)
            if nxt is not None:
                out.append((decision, nxt, self._charge(charged)))
        closed = self._close(state)
        if closed is not None:
            out.append((CLOSE, SINK, self._charge(closed)))
        return out

    def _step(self, state: FrontierState, include: bool) -> tuple:
        W = self.W
        members = state.window
        reach = list(state.reach) + [0]
        charged = []

        if include:
            qbit = 1 << W
            in_q = 0
            for i in self.pos:
                if members >> (W - i) & 1:
                    in_q |= 1 << (W - i)
            out_q = 0
            for i in self.neg:
                if members >> (W + i) & 1:
                    out_q |= 1 << (W + i)
                else:
                    charged.append(i)
            from_q = out_q
            for b in _bits(out_q):
                from_q |= reach[b]
            if self.spec.has_loop or from_q & in_q:
                from_q |= qbit
            for a in _bits(members):
                if in_q >> a & 1 or reach[a] & in_q:
                    reach[a] |= qbit | from_q
            reach[W] = from_q
            members |= qbit
        else:
            for i in self.pos:
                if members >> (W - i) & 1:
                    charged.append(i)

        if members & 1:
            if not reach[0] & ~1:
                return None, charged
            if not any(reach[a] & 1 for a in _bits(members & ~1)):
                return None, charged

        return FrontierState(members >> 1, tuple(r >> 1 for r in reach[1:])), charged

    def _close(self, state: FrontierState):
        """Exclude everything to the right; None unless the result is strongly connected."""
        W = self.W
        members = state.window
        if not members >> (W - 1) & 1:
            return None
        for a in _bits(members):
            if state.reach[a] & members != members:
                return None
        return [i for a in _bits(members) for i in self.pos if a + i > W - 1]

    def tail_bound(self, alpha: dict) -> list:
        """h[k] = sum of alpha_i over i > k: the unpaid right exits of the newest member."""
        return [sum((alpha[i] for i in self.pos if i > k), Fraction(0)) for k in range(self.W + 1)]


def _spell(decisions: list) -> VertexSet:
    members, p = [0], 0
    for decision in decisions:
        if decision == CLOSE:
            break
        p += 1
        if decision == INCLUDE:
            members.append(p)
    return VertexSet(tuple(members))


def _trace(parents: dict, state: FrontierState, last: int | None = None) -> VertexSet:
    decisions = [] if last is None else [last]
    while True:
        parent, decision = parents[state]
        if parent is None:
            break
        decisions.append(decision)
        state = parent
    return _spell(decisions[::-1])


# ── Numeric mode ─────────────────────────────────────────────────

def solve_numeric(
    spec: GraphSpec,
    weights: Weights,
    max_states: int | None = None,
    use_heuristic: bool = True,
    progress: Callable[[str], None] | None = None,
) -> SolveResult:
    """
    Exact kappa_0 and a witness by A* over frontier states.

    Ties go to the smallest max(S), then to the lexicographically smallest
    membership. When more than max_states states are settled the search
    stops and reports the best set found, the current lower bound and the gap.
    """
    weights.check(spec)
    max_states = max_states or default_max_states()
    auto = FrontierAutomaton(spec)
    alpha = [weights[i] for i in auto.offsets]
    alpha_by_offset = dict(zip(auto.offsets, alpha))
    h = auto.tail_bound(alpha_by_offset) if use_heuristic else [Fraction(0)] * (auto.W + 1)
    W = auto.W

    def cost(inc):
        return sum((n * a for n, a in zip(inc, alpha) if n), Fraction(0))

    def estimate(state):
        if state.phase == CLOSED:
            return 0
        return h[W - state.window.bit_length()]

    start, inc = auto.initial()
    g0 = cost(inc)
    counter = 0
    # (f, depth, seq, counter, g, state, parent, decision)
    heap = [(g0 + estimate(start), 0, 0, counter, g0, start, None, None)]
    parents = {}
    best_upper = None

    while heap:
        f, depth, seq, _, g, state, parent, decision = heapq.heappop(heap)
        if state in parents:
            continue
        parents[state] = (parent, decision)

        if state.phase == CLOSED:
            return SolveResult(
                value=g,
                witness=_trace(parents, state),
                exact=True,
                states_explored=len(parents),
                lower_bound=g,
                gap=0,
            )

        if len(parents) > max_states:
            lower = f
            if best_upper is None:
                return SolveResult(None, None, False, len(parents), lower, None)
            upper, from_state = best_upper
            return SolveResult(
                value=upper,
                witness=_trace(parents, from_state, CLOSE),
                exact=False,
                states_explored=len(parents),
                lower_bound=lower,
                gap=upper - lower,
            )

        if progress and len(parents) % 100_000 == 0:
            progress(f"{len(parents)} states settled, bound {f}")

        for nxt_decision, nxt, inc in auto.successors(state):
            if nxt in parents:
                continue
            g2 = g + cost(inc)
            if nxt.phase == CLOSED and (best_upper is None or g2 < best_upper[0]):
                best_upper = (g2, state)
            counter += 1
            bit = 1 if nxt_decision == EXCLUDE else 0
            heapq.heappush(
                heap,
                (g2 + estimate(nxt), depth + 1, seq << 1 | bit, counter, g2, nxt, state, nxt_decision),
            )

    raise RuntimeError(f"frontier search exhausted without closing a set for {spec}")


def lower_bound(spec: GraphSpec, weights: Weights) -> Number:
    """c+ + c-: the rightmost and leftmost members of any set pay all their exits."""
    sums = half_sums(spec, weights)
    return sums.c_plus + sums.c_minus


# ── Symbolic mode ────────────────────────────────────────────────

class _Label(NamedTuple):
    vector: tuple
    state: FrontierState
    parent: int | None
    decision: int | None


def _trace_label(labels: list, index: int) -> VertexSet:
    decisions = []
    while True:
        label = labels[index]
        if label.parent is None:
            break
        decisions.append(label.decision)
        index = label.parent
    return _spell(decisions[::-1])


def solve_symbolic(
    spec: GraphSpec,
    max_labels: int | None = None,
    progress: Callable[[str], None] | None = None,
) -> ParetoFront:
    """
    Every Pareto-minimal exit vector of a finite strongly connected set, with
    a witness for each.

    Labels are popped in order of (sum, vector, max, membership); a label
    whose vector has the smallest sum among those left cannot be dominated
    later, so popped labels are final. A label that is >= a vector already
    accepted at the sink is dropped, since charges never decrease.
    """
    max_labels = max_labels or default_max_states()
    auto = FrontierAutomaton(spec)
    start, inc = auto.initial()

    labels = [_Label(inc, start, None, None)]
    heap = [(sum(inc), inc, 0, 0, 0)]
    settled = {}
    goals = []
    settled_count = 0
    tripped = False

    def pruned(vector, state):
        if dominated_by_any(vector, (g for g, _ in goals)):
            return True
        return dominated_by_any(vector, settled.get(state, ()))

    while heap:
        _, vector, depth, seq, index = heapq.heappop(heap)
        state = labels[index].state
        if pruned(vector, state):
            continue

        if state.phase == CLOSED:
            goals.append((vector, index))
            continue

        settled.setdefault(state, []).append(vector)
        settled_count += 1
        if settled_count > max_labels:
            tripped = True
            break
        if progress and settled_count % 100_000 == 0:
            progress(f"{settled_count} labels settled, {len(goals)} front vectors")

        for decision, nxt, step in auto.successors(state):
            new = tuple(a + b for a, b in zip(vector, step))
            if pruned(new, nxt):
                continue
            labels.append(_Label(new, nxt, index, decision))
            bit = 1 if decision == EXCLUDE else 0
            heapq.heappush(heap, (sum(new), new, depth + 1, seq << 1 | bit, len(labels) - 1))

    pairs = (
        (ExitVector(auto.offsets, vector), _trace_label(labels, index))
        for vector, index in goals
    )
    return front_from_pairs(auto.offsets, pairs, exact=not tripped)
