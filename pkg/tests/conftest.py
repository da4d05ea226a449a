import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from lattice.graph import GraphSpec, Weights, load_spec


ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
GOLDEN = json.loads((SPECS / "golden.json").read_text())["cases"]
# Golden specs whose formula the symbolic solver derives; example6 is checked numerically.
SYMBOLIC_GOLDEN = [Path(c["spec"]).stem for c in GOLDEN if c.get("mode", "symbolic") == "symbolic"]


def load(name: str):
    return load_spec(str(SPECS / f"{name}.json"))


def random_spec(rng: random.Random, max_l: int = 3, max_r: int = 3) -> GraphSpec:
    L, R = rng.randint(1, max_l), rng.randint(1, max_r)
    inner = [i for i in range(-L + 1, R) if rng.random() < 0.4]
    return GraphSpec(L, R, frozenset({-L, R, *inner}))


def small_weights(spec: GraphSpec, rng: random.Random) -> Weights:
    return Weights({i: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for i in spec.offsets})


@pytest.fixture
def example9():
    return load("example9")


@pytest.fixture
def example6():
    return load("example6")


@pytest.fixture
def rng():
    return random.Random(20240611)
