from fractions import Fraction as F
from pathlib import Path

import pytest

from conftest import GOLDEN, load
from lattice.graph import ExitVector, SupportMismatch, VertexSet, Weights, random_weights, set_beta
from search.formula import (
    KappaFormula,
    UnknownFormat,
    argmin,
    evaluate,
    from_front,
    from_vectors,
    parse_json,
    render,
    simplify,
)
from search.frontier import solve_symbolic
from search.pareto import FrontEntry


EX4 = (-2, -1, 1, 2)


def test_render_text():
    assert render(from_vectors((-1, 1), [(1, 1)])) == "kappa0 = a(-1) + a(1)"
    ex9 = from_vectors((-2, 1, 2), [(2, 1, 2), (1, 2, 1)])
    assert render(ex9) == "kappa0 = min(a(-2) + 2 a(1) + a(2), 2 a(-2) + a(1) + 2 a(2))"


def test_render_skips_self_loop():
    assert render(from_vectors((-1, 0, 1), [(1, 0, 1)])) == "kappa0 = a(-1) + a(1)"


def test_render_latex():
    ex9 = from_vectors((-2, 1, 2), [(1, 2, 1), (2, 1, 2)])
    assert render(ex9, "latex") == (
        "\\kappa_0 = \\min(\\alpha_{-2} + 2\\alpha_{1} + \\alpha_{2}, "
        "2\\alpha_{-2} + \\alpha_{1} + 2\\alpha_{2})"
    )


def test_unknown_format():
    with pytest.raises(UnknownFormat):
        render(from_vectors((-1, 1), [(1, 1)]), "html")


def test_json_round_trip(example9):
    spec, _ = example9
    f = from_front(solve_symbolic(spec))
    assert parse_json(render(f, "json")) == f
    plain = from_vectors((-6, 2, 3), [(2, 3, 1), (3, 1, 4)])
    assert parse_json(render(plain, "json")) == plain


def test_parse_json_support_mismatch():
    with pytest.raises(SupportMismatch):
        parse_json('{"support": [-1, 1], "terms": [{"vector": {"-1": 1}, "witness": null}]}')


def test_evaluate_examples():
    ex4 = from_vectors(EX4, [(2, 1, 1, 2), (1, 2, 2, 1)])
    assert evaluate(ex4, Weights({i: F(1) for i in EX4})) == 6

    ex5 = from_vectors((-6, 2, 3), [(2, 3, 1), (3, 1, 4)])
    assert evaluate(ex5, Weights({-6: F(1), 2: F(1), 3: F(1)})) == 6

    ex1 = from_vectors((-1, 1), [(1, 1)])
    assert evaluate(ex1, Weights({-1: F(2, 3), 1: F(1, 5)})) == F(13, 15)


def test_evaluate_support_mismatch():
    with pytest.raises(SupportMismatch):
        evaluate(from_vectors((-1, 1), [(1, 1)]), Weights({-2: F(1), 1: F(1)}))


def test_simplify():
    f = from_vectors(EX4, [(2, 1, 1, 2), (1, 2, 2, 1), (2, 2, 2, 2)])
    g = simplify(f)
    assert g.vectors() == {(2, 1, 1, 2), (1, 2, 2, 1)}
    assert simplify(g) == g

    ex5 = from_vectors((-6, 2, 3), [(2, 3, 1), (3, 1, 4), (4, 2, 3)])
    assert simplify(ex5).vectors() == ex5.vectors()


@pytest.mark.parametrize("case", GOLDEN, ids=lambda c: c["name"])
def test_simplify_preserves_value(case, rng):
    spec, _ = load(Path(case["spec"]).stem)
    if case.get("mode", "symbolic") == "symbolic":
        vectors = sorted(from_front(solve_symbolic(spec)).vectors())
    else:
        vectors = [ExitVector.from_counts({int(i): n for i, n in t.items()}).values for t in case["formula"]]
    padded = from_vectors(spec.offsets, vectors + [tuple(n + 1 for n in v) for v in vectors])
    assert simplify(padded).vectors() == set(vectors)
    for _ in range(1000):
        w = random_weights(spec, rng)
        assert evaluate(simplify(padded), w) == evaluate(padded, w)


def test_argmin_witness_consistency(rng):
    spec, _ = load("example9")
    f = from_front(solve_symbolic(spec))
    for _ in range(200):
        w = random_weights(spec, rng)
        term = argmin(f, w)
        assert set_beta(spec, w, term.witness) == evaluate(f, w)


def test_formula_rejects_empty_and_mixed_support():
    with pytest.raises(ValueError):
        from_vectors((-1, 1), [])
    terms = (FrontEntry(ExitVector((-2, 1), (1, 1)), VertexSet((0,))),)
    with pytest.raises(SupportMismatch):
        KappaFormula((-1, 1), terms)
