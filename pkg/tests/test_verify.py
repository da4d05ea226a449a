import asyncio
import json

import pytest

from conftest import ROOT
from verify import VerifyOptions, load_golden, run_case, verify_examples


@pytest.fixture(autouse=True)
def at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def small_cases():
    return [c for c in load_golden(str(ROOT / "specs" / "golden.json")) if c["name"] != "example6"]


@pytest.mark.parametrize("case", small_cases(), ids=lambda c: c["name"])
def test_golden_case_passes(case):
    outcome = run_case(case, VerifyOptions(draws=30))
    assert outcome.passed, outcome.diff
    assert outcome.diff == ""


def test_example4_carries_note():
    case = next(c for c in small_cases() if c["name"] == "example4")
    outcome = run_case(case, VerifyOptions(draws=5))
    assert "counted value" in outcome.note


def test_wrong_witness_is_reported():
    case = dict(next(c for c in small_cases() if c["name"] == "example2"))
    case["witnesses"] = [[0, 2, 3, 4]]
    outcome = run_case(case, VerifyOptions(draws=5))
    assert not outcome.passed
    assert "not strongly connected" in outcome.diff


def test_unknown_case():
    with pytest.raises(KeyError):
        asyncio.run(verify_examples("specs/golden.json", only="example8"))


def test_worker_processes_match_single_worker(tmp_path):
    cases = [c for c in small_cases() if c["name"] in ("example1", "example7", "example9")]
    golden = tmp_path / "golden.json"
    golden.write_text(json.dumps({"cases": cases}))

    one = asyncio.run(verify_examples(str(golden), opts=VerifyOptions(draws=5, workers=1)))
    two = asyncio.run(verify_examples(str(golden), opts=VerifyOptions(draws=5, workers=2)))
    assert [o.name for o in two] == ["example1", "example7", "example9"]
    assert one == two
    assert all(o.passed for o in two)


@pytest.mark.slow
def test_full_suite():
    outcomes = asyncio.run(verify_examples(opts=VerifyOptions(draws=50)))
    assert all(o.passed for o in outcomes), [o.diff for o in outcomes if not o.passed]


@pytest.mark.slow
def test_example6_with_claims():
    outcomes = asyncio.run(verify_examples(only="example6", opts=VerifyOptions(draws=200, workers=2)))
    assert [o.name for o in outcomes] == ["example6", "example6_claims"]
    assert all(o.passed for o in outcomes), [o.diff for o in outcomes if not o.passed]
