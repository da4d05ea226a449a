"""
Shift-invariant weighted directed graphs on Z.

A graph is fixed by L, R and the support N of offsets i in [-L, R] that carry
an edge x -> x+i of weight alpha_i > 0. Everything here is a pure function of
immutable values:

- exit_vector / beta       counts x_i(S) and the exit weight sum x_i * alpha_i
- is_strongly_connected    the trusted networkx-based connectivity test
- half_sums                c+, c-, d+, d-
- parse_spec / load_spec   the graph-spec JSON file format
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

import networkx as nx


Number = Union[Fraction, float]


class SpecError(ValueError):
    """Malformed graph spec or weight assignment."""


class SupportMismatch(ValueError):
    """Weights, vectors or formulas defined over different supports."""


class InvalidSet(ValueError):
    """A vertex set that does not satisfy an operation's precondition."""


# ── Domain types ─────────────────────────────────────────────────

@dataclass(frozen=True)
class GraphSpec:
    L: int
    R: int
    support: frozenset

    def __post_init__(self):
        if self.L < 1 or self.R < 1:
            raise SpecError(f"L and R must be positive integers, got L={self.L}, R={self.R}")
        object.__setattr__(self, "support", frozenset(int(i) for i in self.support))
        outside = sorted(i for i in self.support if not -self.L <= i <= self.R)
        if outside:
            raise SpecError(f"offsets {outside} lie outside [-{self.L}, {self.R}]")
        if -self.L not in self.support or self.R not in self.support:
            raise SpecError(f"support must contain -L={-self.L} and R={self.R}")

    @property
    def offsets(self) -> tuple:
        """Support in increasing order; the coordinate order of every ExitVector."""
        return tuple(sorted(self.support))

    @property
    def width(self) -> int:
        return max(self.L, self.R)

    @property
    def has_loop(self) -> bool:
        return 0 in self.support


@dataclass(frozen=True)
class Weights:
    alpha: Mapping

    def __post_init__(self):
        alpha = dict(self.alpha)
        bad = {i: a for i, a in alpha.items() if not a > 0}
        if bad:
            raise SpecError(f"weights must be strictly positive, got {bad}")
        object.__setattr__(self, "alpha", alpha)

    def __getitem__(self, i: int) -> Number:
        return self.alpha[i]

    @property
    def support(self) -> frozenset:
        return frozenset(self.alpha)

    @property
    def exact(self) -> bool:
        return all(isinstance(a, Fraction) for a in self.alpha.values())

    def as_float(self) -> "Weights":
        return Weights({i: float(a) for i, a in self.alpha.items()})

    def check(self, spec: GraphSpec) -> None:
        if self.support != spec.support:
            raise SupportMismatch(
                f"weights cover {sorted(self.support)} but the graph support is {sorted(spec.support)}"
            )


@dataclass(frozen=True, order=True)
class VertexSet:
    members: tuple

    def __post_init__(self):
        members = tuple(int(z) for z in self.members)
        if not members:
            raise InvalidSet("vertex sets must be nonempty")
        if any(a >= b for a, b in zip(members, members[1:])):
            raise InvalidSet(f"members must be strictly increasing, got {members}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        return cls(tuple(sorted(set(vertices))))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, z) -> bool:
        return z in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.members)

    @property
    def diameter(self) -> int:
        return self.members[-1] - self.members[0]

    def shift(self, k: int) -> "VertexSet":
        return VertexSet(tuple(z + k for z in self.members))

    def canonical(self) -> "VertexSet":
        return self.shift(-self.members[0])

    def mask(self) -> int:
        """Bitmask of the canonical form, bit z set for each member z."""
        lo = self.members[0]
        out = 0
        for z in self.members:
            out |= 1 << (z - lo)
        return out

    @classmethod
    def from_mask(cls, mask: int) -> "VertexSet":
        return cls(tuple(z for z in range(mask.bit_length()) if mask >> z & 1))

    def __str__(self):
        return "{" + ",".join(str(z) for z in self.members) + "}"


@dataclass(frozen=True, order=True)
class ExitVector:
    support: tuple
    values: tuple

    def __post_init__(self):
        if len(self.support) != len(self.values):
            raise SupportMismatch(f"{len(self.values)} counts for support {self.support}")

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "ExitVector":
        support = tuple(sorted(counts))
        return cls(support, tuple(int(counts[i]) for i in support))

    def __getitem__(self, i: int) -> int:
        return self.values[self.support.index(i)]

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.values))

    def total(self) -> int:
        return sum(self.values)

    def leq(self, other: "ExitVector") -> bool:
        """Componentwise <=."""
        self._same_support(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def dominates(self, other: "ExitVector") -> bool:
        """Strict dominance: <= everywhere and different somewhere."""
        return self.leq(other) and self.values != other.values

    def _same_support(self, other: "ExitVector") -> None:
        if self.support != other.support:
            raise SupportMismatch(f"vectors over {self.support} and {other.support}")

    def __str__(self):
        return "(" + ", ".join(f"x{i}={n}" for i, n in zip(self.support, self.values)) + ")"


@dataclass(frozen=True)
class HalfSums:
    c_plus: Number
    c_minus: Number
    d_plus: Number
    d_minus: Number


# ── Operations ───────────────────────────────────────────────────

def exit_vector(spec: GraphSpec, S: VertexSet) -> ExitVector:
    """x_i = #{z in S : z+i not in S} for every i in the support; x_0 is always 0."""
    members = frozenset(S)
    counts = {i: sum(1 for z in members if z + i not in members) for i in spec.support}
    return ExitVector.from_counts(counts)


def beta(weights: Weights, x: ExitVector) -> Number:
    """Exit weight sum x_i * alpha_i."""
    if weights.support != frozenset(x.support):
        raise SupportMismatch(
            f"weights cover {sorted(weights.support)} but the vector covers {list(x.support)}"
        )
    return sum((n * weights[i] for i, n in zip(x.support, x.values)), Fraction(0))


def set_beta(spec: GraphSpec, weights: Weights, S: VertexSet) -> Number:
    return beta(weights, exit_vector(spec, S))


def induced_graph(spec: GraphSpec, S: VertexSet) -> nx.DiGraph:
    members = frozenset(S)
    g = nx.DiGraph()
    g.add_nodes_from(members)
    g.add_edges_from(
        (z, z + i) for z in members for i in spec.support if z + i in members
    )
    return g


def is_strongly_connected(spec: GraphSpec, S: VertexSet) -> bool:
    """Every ordered pair joined inside S; a singleton needs its self-loop."""
    if len(S) == 1:
        return spec.has_loop
    return nx.is_strongly_connected(induced_graph(spec, S))


def half_sums(spec: GraphSpec, weights: Weights) -> HalfSums:
    weights.check(spec)
    zero = Fraction(0)
    pos = [i for i in spec.support if i > 0]
    neg = [i for i in spec.support if i < 0]
    return HalfSums(
        c_plus=sum((weights[i] for i in pos), zero),
        c_minus=sum((weights[i] for i in neg), zero),
        d_plus=sum((i * weights[i] for i in pos), zero),
        d_minus=sum((-i * weights[i] for i in neg), zero),
    )


def loop_exit_weight(spec: GraphSpec, weights: Weights, cycle: Iterable[int]) -> Number:
    """
    Weight of edges leaving a closed walk, counted per edge rather than per vertex:
    every edge whose tail is on the cycle but which the cycle does not use.
    """
    cycle = list(cycle)
    if len(cycle) < 2 or cycle[0] != cycle[-1]:
        raise InvalidSet(f"a cycle must start and end at the same vertex, got {cycle}")
    used = {(a, b - a) for a, b in zip(cycle, cycle[1:])}
    for _, i in used:
        if i not in spec.support:
            raise InvalidSet(f"step {i} of cycle {cycle} is not an edge of the graph")
    tails = set(cycle)
    return sum(
        (weights[i] for z in tails for i in spec.support if (z, i) not in used),
        Fraction(0),
    )


# ── Spec files ───────────────────────────────────────────────────

def parse_weight(value) -> Fraction:
    """Exact rational from 'p/q', an int, a decimal string or a JSON float."""
    if isinstance(value, bool):
        raise SpecError(f"not a weight: {value!r}")
    if isinstance(value, float):
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(f"not a weight: {value!r} ({exc})") from exc


def parse_spec(obj: Mapping, numeric: str = "exact") -> tuple:
    """
    Build (GraphSpec, Weights | None) from the spec JSON object.

    Accepted shapes:
        {"L": 2, "R": 2, "alpha": {"-2": "1/9", "1": "1/2", "2": "1/9"}}
        {"L": 2, "R": 2, "alpha": {"-2": null, "1": null, "2": null}}   symbolic
        {"L": 2, "R": 2, "support": [-2, 1, 2]}                         symbolic
    """
    try:
        L, R = int(obj["L"]), int(obj["R"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"spec needs integer 'L' and 'R': {exc}") from exc

    alpha = obj.get("alpha")
    if alpha is None and "support" not in obj:
        raise SpecError("spec needs an 'alpha' object or a 'support' list")

    if alpha is not None:
        try:
            raw = {int(k): v for k, v in alpha.items()}
        except (AttributeError, ValueError) as exc:
            raise SpecError(f"'alpha' keys must be integer strings: {exc}") from exc
        spec = GraphSpec(L, R, frozenset(raw))
        given = [v for v in raw.values() if v is not None]
        if not given:
            return spec, None
        if len(given) != len(raw):
            raise SpecError("either every alpha value is given or none is")
        weights = Weights({i: parse_weight(v) for i, v in raw.items()})
    else:
        spec = GraphSpec(L, R, frozenset(int(i) for i in obj["support"]))
        weights = None

    if weights is not None and numeric == "float":
        weights = weights.as_float()
    return spec, weights


def load_spec(path: str, numeric: str = "exact") -> tuple:
    with open(path) as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: malformed JSON ({exc})") from exc
    return parse_spec(obj, numeric=numeric)


def format_weight(value: Number) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(value)


def spec_to_json(spec: GraphSpec, weights: Weights | None = None) -> dict:
    return {
        "L": spec.L,
        "R": spec.R,
        "alpha": {
            str(i): (format_weight(weights[i]) if weights is not None else None)
            for i in spec.offsets
        },
    }


def with_overrides(spec: GraphSpec, weights: Weights | None, overrides: Mapping) -> tuple:
    """Apply `--alpha i=value` overrides; a new offset joins the support."""
    if not overrides:
        return spec, weights
    alpha = dict(weights.alpha) if weights is not None else {}
    for i, value in overrides.items():
        alpha[int(i)] = parse_weight(value)
    support = frozenset(spec.support) | frozenset(int(i) for i in overrides)
    new_spec = GraphSpec(spec.L, spec.R, support)
    missing = sorted(support - set(alpha))
    if missing:
        if weights is not None:
            raise SpecError(f"no weight for offsets {missing}")
        # Symbolic spec with partial overrides stays symbolic.
        return new_spec, None
    return new_spec, Weights(alpha)


def canonical(S: VertexSet) -> VertexSet:
    return S.canonical()


def random_weights(spec: GraphSpec, rng, denominator: int = 1000) -> Weights:
    """Strictly positive rational weights with a common denominator; rng is a random.Random."""
    return Weights({i: Fraction(rng.randint(1, denominator), denominator) for i in spec.offsets})
