"""
Inequalities on the exit vectors of the graph with offsets {-16, 2, 5}.

For that graph kappa_0 is the minimum of the exit weights of four reference
sets. The argument rests on a handful of bounds on (x_-16, x_2, x_5) that
must hold for every strongly connected set; example6_claims checks them
against a family of realized vectors.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from lattice.graph import GraphSpec, VertexSet, Weights, exit_vector, random_weights


EXAMPLE6 = GraphSpec(16, 5, frozenset({-16, 2, 5}))
EXAMPLE6_WEIGHTS = Weights({-16: Fraction(1, 67), 2: Fraction(15, 67), 5: Fraction(5, 67)})

REFERENCE_SETS = {
    "S1": VertexSet((0, 2, 4, 6, 8, 10, 12, 14, 16)),
    "S2": VertexSet((0, 5, 10, 15, 16, 20, 25, 30, 32)),
    "S3": VertexSet((0, 5, 10, 12, 14, 16)),
    "S4": VertexSet((0, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 16)),
}


@dataclass(frozen=True)
class Violation:
    claim: str
    vector: tuple
    detail: str

    def __str__(self):
        return f"{self.claim}: (x-16, x2, x5) = {self.vector}: {self.detail}"


def reference_vectors() -> dict:
    """(x_-16, x_2, x_5) of each reference set."""
    return {name: exit_vector(EXAMPLE6, S).values for name, S in REFERENCE_SETS.items()}


def _dot(v: tuple, w: tuple) -> Fraction:
    return sum((a * b for a, b in zip(v, w)), Fraction(0))


def _vector_claims(v: tuple) -> list:
    x16, x2, x5 = v
    checks = [
        ("claim 1", x16 >= 5, "x-16 < 5"),
        ("claim 2", x2 != 1 or (x16 >= 8 and x5 >= 9), "x2 = 1 but x-16 < 8 or x5 < 9"),
        ("claim 3", x5 >= 3, "x5 < 3"),
        ("claim 4", x5 != 3 or (x16 >= 7 and x2 >= 8), "x5 = 3 but x-16 < 7 or x2 < 8"),
        ("claim 5", x2 != 2 or x5 >= 5, "x2 = 2 but x5 < 5"),
        ("claim 7", x2 != 2 or (x5 + x16 >= 17 and x16 >= 9), "x2 = 2 but x5 + x-16 < 17 or x-16 < 9"),
    ]
    return [Violation(name, v, detail) for name, ok, detail in checks if not ok]


def example6_claims(vectors: Iterable, draws: int = 100, rng: random.Random | None = None) -> list:
    """
    Violations among `vectors` (tuples ordered as x_-16, x_2, x_5); empty when
    every bound holds. The last check draws `draws` random weight vectors and
    requires every realized exit weight to be at least the smallest exit
    weight of the reference sets.
    """
    rng = rng or random.Random(0)
    distinct = sorted({tuple(v) for v in vectors})
    violations = [bad for v in distinct for bad in _vector_claims(v)]

    refs = reference_vectors()
    for _ in range(draws):
        weights = random_weights(EXAMPLE6, rng)
        w = tuple(weights[i] for i in EXAMPLE6.offsets)
        floor = min(_dot(r, w) for r in refs.values())
        for v in distinct:
            if _dot(v, w) < floor:
                violations.append(
                    Violation("claim 8", v, f"exit weight {_dot(v, w)} below {floor} at alpha={w}")
                )
                break
    return violations


def reference_kappa0(weights: Weights) -> Fraction:
    """min over the reference sets of their exit weight."""
    w = tuple(weights[i] for i in EXAMPLE6.offsets)
    return min(_dot(r, w) for r in reference_vectors().values())
