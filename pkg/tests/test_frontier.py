import random
from fractions import Fraction as F

import pytest

from conftest import SYMBOLIC_GOLDEN, load, random_spec, small_weights
from lattice.graph import (
    GraphSpec,
    VertexSet,
    exit_vector,
    half_sums,
    is_strongly_connected,
    random_weights,
    set_beta,
)
from search.claims import reference_kappa0
from search.formula import evaluate, from_front, from_vectors
from search.frontier import (
    CLOSED,
    FrontierAutomaton,
    lower_bound,
    solve_numeric,
    solve_symbolic,
)
from search.oracle import EnumerationBudget, oracle_kappa0, oracle_pareto


S4 = VertexSet((0, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 16))


def test_example9_numeric(example9):
    spec, weights = example9
    result = solve_numeric(spec, weights)
    assert result.exact
    assert result.value == F(17, 18)
    assert result.witness == VertexSet((0, 1, 2))
    assert result.gap == 0


def test_example9_heuristic_off(example9):
    spec, weights = example9
    with_h = solve_numeric(spec, weights)
    without_h = solve_numeric(spec, weights, use_heuristic=False)
    assert (with_h.value, with_h.witness) == (without_h.value, without_h.witness)


def test_example2_witness_is_the_interval():
    spec, weights = load("example2")
    result = solve_numeric(spec, weights)
    assert result.value == F(19, 30)
    assert result.witness == VertexSet((0, 1, 2, 3, 4))
    assert set_beta(spec, weights, VertexSet((0, 2, 3, 4, 6))) == result.value


def test_example1_symbolic():
    spec, _ = load("example1")
    front = solve_symbolic(spec)
    assert front.exact
    assert [(e.vector.values, e.witness.members) for e in front.entries] == [((1, 1), (0, 1))]


def test_example9_symbolic(example9):
    spec, _ = example9
    front = solve_symbolic(spec)
    assert front.exact
    assert {e.vector.values: e.witness.members for e in front.entries} == {
        (1, 2, 1): (0, 2),
        (2, 1, 2): (0, 1, 2),
    }


def test_example5_symbolic_formula(rng):
    spec, _ = load("example5")
    computed = from_front(solve_symbolic(spec))
    expected = from_vectors(spec.offsets, [(2, 3, 1), (3, 1, 4)])
    for _ in range(200):
        w = random_weights(spec, rng)
        assert evaluate(computed, w) == evaluate(expected, w)


@pytest.mark.parametrize("R", [2, 3, 4])
def test_example3_front(R):
    spec, weights = load(f"example3_r{R}")
    front = solve_symbolic(spec)
    assert [e.vector.as_dict() for e in front.entries] == [{-1: 1, 1: 1, R: 2}]
    value = solve_numeric(spec, weights).value
    assert value == 2 * weights[R] + weights[1] + weights[-1]
    assert value > lower_bound(spec, weights)
    h = half_sums(spec, weights)
    if R > 2:
        assert value < h.d_plus + h.d_minus
    else:
        assert value == h.d_plus + h.d_minus


def test_lower_bound_examples():
    spec, weights = load("example7")
    result = solve_numeric(spec, weights)
    h = half_sums(spec, weights)
    assert result.value == lower_bound(spec, weights) == h.c_plus + h.c_minus
    assert result.witness == VertexSet((0,))

    spec, weights = load("example1")
    assert solve_numeric(spec, weights).value == lower_bound(spec, weights)

    spec, weights = load("example3_r3")
    assert solve_numeric(spec, weights).value > lower_bound(spec, weights)


def test_state_budget_degrades(example9):
    spec, weights = example9
    result = solve_numeric(spec, weights, max_states=1)
    assert not result.exact
    assert result.lower_bound <= F(17, 18)
    if result.value is not None:
        assert result.value >= F(17, 18)
        assert result.gap == result.value - result.lower_bound

    front = solve_symbolic(spec, max_labels=1)
    assert not front.exact


def test_charges_are_nonnegative_and_replay(rng):
    """Each accepted path spells one set; its summed charges equal that set's exit vector."""
    for _ in range(15):
        spec = random_spec(rng)
        auto = FrontierAutomaton(spec)
        start, inc = auto.initial()
        frontier = [(start, inc, [0], 0)]
        seen = set()
        for _depth in range(8):
            nxt = []
            for state, vec, members, p in frontier:
                for decision, succ, step in auto.successors(state):
                    assert all(n >= 0 for n in step)
                    total = tuple(a + b for a, b in zip(vec, step))
                    if succ.phase == CLOSED:
                        T = VertexSet(tuple(members))
                        assert T not in seen
                        seen.add(T)
                        assert is_strongly_connected(spec, T)
                        assert total == exit_vector(spec, T).values
                    elif decision == 0:
                        nxt.append((succ, total, members + [p + 1], p + 1))
                    else:
                        nxt.append((succ, total, members, p + 1))
            frontier = nxt


def test_oracle_equivalence():
    """Solver and stabilized oracle agree on random small graphs."""
    rng = random.Random(1234)
    compared = 0
    while compared < 50:
        spec = random_spec(rng)
        weights = small_weights(spec, rng)
        at10 = oracle_kappa0(spec, weights, EnumerationBudget(10))
        at13 = oracle_kappa0(spec, weights, EnumerationBudget(13))
        if at10.value != at13.value:
            continue
        result = solve_numeric(spec, weights)
        assert result.exact
        assert result.value == at13.value
        assert set_beta(spec, weights, result.witness) == result.value
        assert is_strongly_connected(spec, result.witness)
        assert result.value >= lower_bound(spec, weights)
        compared += 1


def test_symbolic_matches_oracle_front():
    rng = random.Random(99)
    compared = 0
    while compared < 50:
        spec = random_spec(rng)
        small = oracle_pareto(spec, EnumerationBudget(10)).value_tuples()
        large = oracle_pareto(spec, EnumerationBudget(13)).value_tuples()
        if small != large:
            continue
        front = solve_symbolic(spec)
        assert front.exact
        assert front.value_tuples() == large
        for e in front.entries:
            assert exit_vector(spec, e.witness) == e.vector
        compared += 1


@pytest.mark.parametrize("name", SYMBOLIC_GOLDEN)
def test_formula_soundness(name, rng):
    spec, _ = load(name)
    formula = from_front(solve_symbolic(spec))
    for _ in range(100):
        w = random_weights(spec, rng)
        assert evaluate(formula, w) == solve_numeric(spec, w).value


@pytest.mark.slow
@pytest.mark.parametrize("name", SYMBOLIC_GOLDEN)
def test_formula_soundness_many_draws(name):
    rng = random.Random(5)
    spec, _ = load(name)
    formula = from_front(solve_symbolic(spec))
    for _ in range(1000):
        w = random_weights(spec, rng)
        assert evaluate(formula, w) == solve_numeric(spec, w).value


@pytest.mark.slow
def test_example6_numeric(example6):
    spec, weights = example6
    result = solve_numeric(spec, weights)
    assert result.exact
    assert result.value == 1
    assert result.witness == S4


@pytest.mark.slow
def test_example6_random_weights(example6):
    spec, _ = example6
    rng = random.Random(11)
    for _ in range(20):
        w = random_weights(spec, rng)
        result = solve_numeric(spec, w)
        assert result.exact
        assert result.value == reference_kappa0(w)


@pytest.mark.slow
def test_footnote_instance_matches_oracle():
    spec, weights = load("footnote")
    assert solve_numeric(spec, weights).value == oracle_kappa0(spec, weights, EnumerationBudget(20)).value


def test_single_offset_pair_graph():
    spec = GraphSpec(1, 1, frozenset({-1, 1}))
    weights = small_weights(spec, random.Random(3))
    assert solve_numeric(spec, weights).value == weights[-1] + weights[1]
