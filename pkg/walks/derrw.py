"""
Exact path laws of the directed-edge-reinforced walk and of the annealed
walk in a Dirichlet environment.

DERRW: at x the walk takes edge (x, x+i) with probability proportional to
alpha_i plus the number of earlier traversals of that edge.

Annealed RWDE: each site draws its transition vector from Dirichlet(alpha)
independently; averaging a path's probability over the environment gives a
product over sites of Dirichlet moments, i.e. rising factorials.
"""

from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from lattice.graph import GraphSpec, Weights


class InvalidPath(ValueError):
    """A path step that is not an edge of the graph."""


def _steps(spec: GraphSpec, path: Sequence[int]) -> list:
    steps = []
    for x, y in zip(path, path[1:]):
        if y - x not in spec.support:
            raise InvalidPath(f"step {x} -> {y} uses offset {y - x}, not in {sorted(spec.support)}")
        steps.append((x, y - x))
    return steps


def _exact(weights: Weights) -> dict:
    if not weights.exact:
        raise ValueError("exact path probabilities need rational weights")
    return dict(weights.alpha)


def path_probability_derrw(spec: GraphSpec, weights: Weights, path: Sequence[int]) -> Fraction:
    """Product of (alpha_i + n(x, i)) / (sum alpha + n(x)) with counts updated along the path."""
    weights.check(spec)
    alpha = _exact(weights)
    total = sum(alpha.values(), Fraction(0))
    edge_counts = Counter()
    site_counts = Counter()
    prob = Fraction(1)
    for x, i in _steps(spec, path):
        prob *= (alpha[i] + edge_counts[x, i]) / (total + site_counts[x])
        edge_counts[x, i] += 1
        site_counts[x] += 1
    return prob


def rising(a: Fraction, n: int) -> Fraction:
    """a (a+1) ... (a+n-1)"""
    out = Fraction(1)
    for k in range(n):
        out *= a + k
    return out


def dirichlet_moment(alphas: Sequence[Fraction], counts: Sequence[int]) -> Fraction:
    """E[prod p_i^{n_i}] for p ~ Dirichlet(alphas)."""
    out = Fraction(1)
    for a, n in zip(alphas, counts):
        out *= rising(Fraction(a), n)
    return out / rising(sum((Fraction(a) for a in alphas), Fraction(0)), sum(counts))


def path_probability_annealed(spec: GraphSpec, weights: Weights, path: Sequence[int]) -> Fraction:
    """Product over visited sites of the Dirichlet moment of the edges taken there."""
    weights.check(spec)
    alpha = _exact(weights)
    offsets = spec.offsets
    taken = {}
    for x, i in _steps(spec, path):
        taken.setdefault(x, Counter())[i] += 1
    prob = Fraction(1)
    for counts in taken.values():
        prob *= dirichlet_moment([alpha[i] for i in offsets], [counts[i] for i in offsets])
    return prob


def enumerate_paths(spec: GraphSpec, start: int, n: int) -> Iterable[tuple]:
    """All length-n paths from start."""
    offsets = spec.offsets
    for choice in product(offsets, repeat=n):
        path = [start]
        for i in choice:
            path.append(path[-1] + i)
        yield tuple(path)
