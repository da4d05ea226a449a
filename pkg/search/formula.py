"""
kappa_0 as a minimum of finitely many integer combinations of the weights.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from lattice.graph import ExitVector, Number, SupportMismatch, VertexSet, Weights
from search.pareto import FrontEntry, ParetoFront, minimal_filter


FORMATS = ("text", "latex", "json")


class UnknownFormat(ValueError):
    """Render format outside FORMATS."""


@dataclass(frozen=True)
class KappaFormula:
    support: tuple
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a formula needs at least one term")
        support = tuple(sorted(self.support))
        for term in self.terms:
            if term.vector.support != support:
                raise SupportMismatch(f"term {term.vector} is not over support {support}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=lambda t: t.vector.values)))

    def vectors(self) -> frozenset:
        return frozenset(t.vector.values for t in self.terms)


def from_front(front: ParetoFront) -> KappaFormula:
    return KappaFormula(front.support, tuple(front.entries))


def from_vectors(support, vectors, witnesses=None) -> KappaFormula:
    support = tuple(sorted(support))
    witnesses = witnesses or [None] * len(vectors)
    terms = tuple(
        FrontEntry(ExitVector(support, tuple(v)), w) for v, w in zip(vectors, witnesses)
    )
    return KappaFormula(support, terms)


def _dot(vector: ExitVector, weights: Weights) -> Number:
    return sum((n * weights[i] for i, n in zip(vector.support, vector.values)), Fraction(0))


def evaluate(f: KappaFormula, weights: Weights) -> Number:
    """min over terms of vector . alpha"""
    return _dot(argmin(f, weights).vector, weights)


def argmin(f: KappaFormula, weights: Weights) -> FrontEntry:
    if weights.support != frozenset(f.support):
        raise SupportMismatch(
            f"weights cover {sorted(weights.support)} but the formula is over {list(f.support)}"
        )
    return min(f.terms, key=lambda t: _dot(t.vector, weights))


def simplify(f: KappaFormula) -> KappaFormula:
    """Drop dominated terms; a dominated term is never the strict minimum."""
    kept = minimal_filter(f.terms, key=lambda t: t.vector.values)
    return KappaFormula(f.support, tuple(kept))


# ── Rendering ────────────────────────────────────────────────────

def _combination(term: FrontEntry, symbol, sep: str = " ") -> str:
    parts = []
    for i, n in zip(term.vector.support, term.vector.values):
        if n == 0:
            continue
        parts.append(symbol(i) if n == 1 else f"{n}{sep}{symbol(i)}")
    return " + ".join(parts) or "0"


def _text_symbol(i: int) -> str:
    return f"a({i})"


def _latex_symbol(i: int) -> str:
    return f"\\alpha_{{{i}}}"


def render(f: KappaFormula, format: str = "text") -> str:
    if format == "text":
        parts = [_combination(t, _text_symbol) for t in f.terms]
        body = parts[0] if len(parts) == 1 else "min(" + ", ".join(parts) + ")"
        return f"kappa0 = {body}"
    if format == "latex":
        parts = [_combination(t, _latex_symbol, sep="") for t in f.terms]
        body = parts[0] if len(parts) == 1 else "\\min(" + ", ".join(parts) + ")"
        return f"\\kappa_0 = {body}"
    if format == "json":
        return json.dumps(to_json(f), sort_keys=True)
    raise UnknownFormat(f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")


def to_json(f: KappaFormula) -> dict:
    return {
        "support": list(f.support),
        "terms": [
            {
                "vector": {str(i): n for i, n in zip(t.vector.support, t.vector.values)},
                "witness": list(t.witness.members) if t.witness is not None else None,
            }
            for t in f.terms
        ],
    }


def parse_json(text: str) -> KappaFormula:
    obj = json.loads(text)
    support = tuple(sorted(int(i) for i in obj["support"]))
    terms = []
    for term in obj["terms"]:
        counts = {int(i): int(n) for i, n in term["vector"].items()}
        if set(counts) != set(support):
            raise SupportMismatch(f"term {counts} is not over support {support}")
        witness = term.get("witness")
        terms.append(
            FrontEntry(
                ExitVector.from_counts(counts),
                VertexSet(tuple(witness)) if witness is not None else None,
            )
        )
    return KappaFormula(support, tuple(terms))
