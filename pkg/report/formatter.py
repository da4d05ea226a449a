"""
Formats solver output as CLI reports.

Every builder returns a plain dict (the JSON shape), and format_report turns
that dict into text, json or latex:

- beta:     set + exit vector + exit weight
- kappa0:   value + witness + front + exactness, budget and gap fields
- verify:   one PASS/FAIL row per golden case, notes and diffs underneath
- simulate: the visit-count report of walks.simulate
- error:    message + command, for every failure path
"""

import json
import math

from lattice.graph import (
    ExitVector,
    GraphSpec,
    VertexSet,
    Weights,
    exit_vector,
    format_weight,
    is_strongly_connected,
    set_beta,
)
from search.formula import FORMATS, UnknownFormat, from_front, render
from search.pareto import ParetoFront


def _vector_json(x: ExitVector) -> dict:
    return {str(i): n for i, n in zip(x.support, x.values)}


def _witness_json(S: VertexSet | None):
    return list(S.members) if S is not None else None


def _front_json(front: ParetoFront) -> list:
    return [
        {"vector": _vector_json(e.vector), "witness": _witness_json(e.witness)}
        for e in front.entries
    ]


def _weight_json(value):
    return format_weight(value) if value is not None else None


def build_beta_report(spec: GraphSpec, weights: Weights | None, S: VertexSet) -> dict:
    x = exit_vector(spec, S)
    return {
        "command": "beta",
        "set": list(S.members),
        "exit_vector": _vector_json(x),
        "beta": _weight_json(set_beta(spec, weights, S)) if weights is not None else None,
        "strongly_connected": is_strongly_connected(spec, S),
    }


def build_kappa0_report(
    result,
    mode: str,
    front: ParetoFront | None = None,
    format: str = "text",
) -> dict:
    """
    `result` is a SolveResult (numeric), an OracleResult (oracle) or None
    (symbolic, where `front` carries the answer). Every mode emits the same
    keys; fields a mode does not produce are null.
    """
    report = {
        "command": "kappa0",
        "mode": mode,
        "kappa0": None,
        "witness": None,
        "exact": None,
        "front": None,
        "formula": None,
        "diameter_bound": None,
        "sets_examined": None,
        "states_explored": None,
        "lower_bound": None,
        "gap": None,
    }
    if result is not None:
        report["kappa0"] = _weight_json(result.value)
        report["witness"] = _witness_json(result.witness)
        report["exact"] = result.exact
        if hasattr(result, "states_explored"):
            report["states_explored"] = result.states_explored
            report["lower_bound"] = _weight_json(result.lower_bound)
            report["gap"] = _weight_json(result.gap)
        if hasattr(result, "diameter_bound"):
            report["diameter_bound"] = result.diameter_bound
            report["sets_examined"] = result.sets_examined
    if front is not None:
        report["front"] = _front_json(front)
        report["formula"] = render(from_front(front), "latex" if format == "latex" else "text")
        if report["exact"] is None:
            report["exact"] = front.exact
        if report["diameter_bound"] is None:
            report["diameter_bound"] = front.diameter_bound
    return report


def build_verify_report(rows: list, draws_fallback: int = 0) -> dict:
    """rows: CaseOutcome objects from verify.py."""
    return {
        "command": "verify-examples",
        "passed": all(r.passed for r in rows),
        "cases": [
            {
                "name": r.name,
                "passed": r.passed,
                "expected": r.expected,
                "actual": r.actual,
                "note": r.note,
                "diff": r.diff,
            }
            for r in rows
        ],
        "oracle_fallbacks": draws_fallback,
    }


def build_simulate_report(visits: dict, S: VertexSet, seed: int) -> dict:
    report = {"command": "simulate", "set": list(S.members), "seed": seed}
    report.update(visits)
    for key in ("mean", "slope"):
        if isinstance(report.get(key), float) and math.isnan(report[key]):
            report[key] = None
    return report


def build_error_report(error_message: str, command: str = "unknown") -> dict:
    """Report emitted when a command fails."""
    return {"command": command, "error": error_message}


# ── Rendering ────────────────────────────────────────────────────

def format_report(report: dict, format: str = "text") -> str:
    if format not in FORMATS:
        raise UnknownFormat(f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")
    if format == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    if "error" in report:
        return f"[{report['command']}] ERROR: {report['error']}"
    renderer = _TEXT_RENDERERS.get(report["command"], _text_generic)
    return renderer(report)


def _vector_text(vector: dict) -> str:
    return "(" + ", ".join(f"x{i}={n}" for i, n in vector.items()) + ")"


def _set_text(members) -> str:
    if members is None:
        return "-"
    return "{" + ",".join(str(z) for z in members) + "}"


def _text_beta(report: dict) -> str:
    lines = [
        f"set:                {_set_text(report['set'])}",
        f"exit vector:        {_vector_text(report['exit_vector'])}",
        f"strongly connected: {'yes' if report['strongly_connected'] else 'no'}",
    ]
    if report["beta"] is not None:
        lines.append(f"beta:               {report['beta']}")
    return "\n".join(lines)


def _text_kappa0(report: dict) -> str:
    lines = []
    if report.get("formula") is not None:
        lines.append(report["formula"])
    if report.get("kappa0") is not None:
        lines.append(f"kappa0:  {report['kappa0']}")
        lines.append(f"witness: {_set_text(report.get('witness'))}")
    elif report["mode"] == "numeric":
        lines.append("kappa0:  unknown (no closed set within the state budget)")
    lines.append(f"exact:   {'yes' if report['exact'] else 'no'}")
    if report.get("diameter_bound") is not None:
        lines.append(f"candidate front at diameter {report['diameter_bound']}")
    if report.get("states_explored") is not None:
        lines.append(f"states:  {report['states_explored']}")
        if not report["exact"]:
            lines.append(f"lower bound: {report['lower_bound']}  gap: {report['gap']}")
    for entry in report.get("front") or []:
        lines.append(f"  {_vector_text(entry['vector'])}  {_set_text(entry['witness'])}")
    return "\n".join(lines)


def _text_verify(report: dict) -> str:
    lines = []
    for case in report["cases"]:
        status = "PASS" if case["passed"] else "FAIL"
        lines.append(f"{status}  {case['name']:<24} {case['actual']}")
        if case["note"]:
            lines.append(f"      note: {case['note']}")
        if case["diff"]:
            lines.extend("      " + line for line in case["diff"].splitlines())
    if report["oracle_fallbacks"]:
        lines.append(f"{report['oracle_fallbacks']} draw(s) fell back to the oracle front")
    passed = sum(1 for c in report["cases"] if c["passed"])
    lines.append(f"{passed}/{len(report['cases'])} cases passed")
    return "\n".join(lines)


def _text_simulate(report: dict) -> str:
    lines = [
        f"set:      {_set_text(report['set'])}  beta_S = {report['beta_S']}",
        f"walks:    {report['n_walks']} (cap {report['cap']}, censored {report['censored']}, seed {report['seed']})",
        f"mean N0:  {report['mean']}",
        f"slope:    {report['slope']}",
        "survival: " + "  ".join(f"{k}:{c}" for k, c in report["survival"]),
    ]
    return "\n".join(lines)


def _text_generic(report: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in sorted(report.items()))


_TEXT_RENDERERS = {
    "beta": _text_beta,
    "kappa0": _text_kappa0,
    "verify-examples": _text_verify,
    "simulate": _text_simulate,
}
