import random

import pytest

from lattice.graph import exit_vector, is_strongly_connected
from search.claims import (
    EXAMPLE6,
    EXAMPLE6_WEIGHTS,
    REFERENCE_SETS,
    example6_claims,
    reference_kappa0,
    reference_vectors,
)
from search.oracle import EnumerationBudget, collect_sc_masks, mask_exit_values


def test_reference_sets():
    assert reference_vectors() == {
        "S1": (8, 1, 9),
        "S2": (7, 8, 3),
        "S3": (5, 3, 4),
        "S4": (12, 2, 5),
    }
    for S in REFERENCE_SETS.values():
        assert is_strongly_connected(EXAMPLE6, S)
    assert reference_kappa0(EXAMPLE6_WEIGHTS) == 1
    assert exit_vector(EXAMPLE6, REFERENCE_SETS["S4"]).values == (12, 2, 5)


def test_reference_vectors_satisfy_claims():
    assert example6_claims(reference_vectors().values(), draws=50) == []


def test_violations_are_reported():
    found = example6_claims([(4, 1, 9), (9, 2, 4)], draws=20, rng=random.Random(1))
    names = {v.claim for v in found}
    assert {"claim 1", "claim 2", "claim 5", "claim 7", "claim 8"} <= names
    assert "claim 3" not in names


def test_claims_on_small_sets():
    masks = collect_sc_masks(EXAMPLE6, EnumerationBudget(16), workers=1)
    assert masks
    vectors = {mask_exit_values(EXAMPLE6.offsets, m) for m in masks}
    assert example6_claims(vectors, draws=20) == []


@pytest.mark.slow
def test_claims_exhaustive():
    masks = collect_sc_masks(EXAMPLE6, EnumerationBudget(24), workers=2)
    vectors = {mask_exit_values(EXAMPLE6.offsets, m) for m in masks}
    assert all(n >= 1 for x in vectors for n in x)
    assert example6_claims(vectors, draws=100, rng=random.Random(42)) == []
