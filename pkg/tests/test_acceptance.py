"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the verdict lines are
printed even when output capture is on) or directly as a script.
"""
import csv
import json
import sys
import time

import pytest
from hypothesis import HealthCheck, Phase, given, settings
from hypothesis import strategies as st

from conftest import CORPUS, corpus_suite
from invrepair.execution import RunInput, instrument, run
from invrepair.harness import load_patch
from invrepair.harness.cli import main
from invrepair.invariants import Invariant, InvariantSet, implies, infer
from invrepair.lang import ast as A
from invrepair.lang import parse
from invrepair.validate import MissingCounter, pred_sm
from oracles import brute_force_implies, brute_force_infer
from strategies import bounded_programs, invariants

CORPUS_NAMES = ("strsearch", "accum_loop", "toy_count")

# tolerances
REPAIR_TIME_LIMIT_S = 300
CNT6_RATIO_MAX = 0.6
INFER_PROGRAMS = 200
IMPLIES_PAIRS = 1000
DETERMINISM_WORKERS = (1, 4)


def examples(n):
    return settings(max_examples=n, deadline=None, derandomize=True, database=None,
                    phases=[Phase.generate], suppress_health_check=list(HealthCheck))


@pytest.fixture
def verdict(capsys):
    def say(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title}"
                  + (f" ({detail})" if detail else ""))
        assert ok, detail
    return say


@pytest.fixture(scope="module")
def strsearch_repair(tmp_path_factory):
    out = tmp_path_factory.mktemp("repair_w1")
    t0 = time.monotonic()
    code = main(["repair", "--config", "strsearch", "--workers", "1", "--out", str(out)])
    return code, time.monotonic() - t0, out


def test_criterion_1_case_study_repair(strsearch_repair, verdict):
    code, elapsed, out = strsearch_repair
    original = corpus_suite("strsearch").load_program()
    developer, _ = load_patch(CORPUS / "strsearch" / "developer.json", original)
    patched = parse((out / "patched.imp").read_text())
    report = json.loads((out / "report.json").read_text())
    ok = code == 0 and elapsed < REPAIR_TIME_LIMIT_S and patched == developer
    verdict(1, "strsearch repair moves the L6 init out of the outer loop", ok,
            f"exit {code}, {elapsed:.0f}s, mutations {report['patch'] and report['patch']['mutations']}, "
            f"verdict {report['outcome']}")


def _bounds(out):
    with open(out / "bounds.tsv") as f:
        return {r["counter"]: int(r["bound"]) for r in csv.DictReader(f, delimiter="\t")}


def test_criterion_2_counter_bound_direction(tmp_path, verdict):
    assert main(["infer", "--config", "strsearch", "--out", str(tmp_path / "buggy")]) == 0
    assert main(["infer", "--config", "strsearch", "--patch", str(CORPUS / "strsearch" / "developer.json"),
                 "--out", str(tmp_path / "patched")]) == 0
    buggy, fixed = _bounds(tmp_path / "buggy"), _bounds(tmp_path / "patched")
    ratio = fixed["cnt_L6"] / buggy["cnt_L6"]
    ok = fixed["cnt_L9"] == 0 and buggy["cnt_L9"] > 0 and ratio <= CNT6_RATIO_MAX
    verdict(2, "patched cnt_L9 bound is 0, cnt_L6 bound ratio <= 0.6", ok,
            f"cnt_L9 {buggy['cnt_L9']} -> {fixed['cnt_L9']}, "
            f"cnt_L6 {buggy['cnt_L6']} -> {fixed['cnt_L6']} (ratio {ratio:.3f})")


def test_criterion_3_overfit_rejection(tmp_path, verdict):
    stages = {}
    for name in CORPUS_NAMES:
        out = tmp_path / name
        code = main(["validate", "--config", name, "--patch", str(CORPUS / name / "overfit.json"),
                     "--out", str(out)])
        v = json.loads((out / "verdict.json").read_text())["verdict"]
        passed_tests = v["report"]["stages"][0] == {"stage": "tests", "status": "passed"}
        stages[name] = (code, passed_tests, v["stage"])
    ok = all(code == 1 and t and s in ("FailedSemaEq", "FailedCorrectCheck")
             for code, t, s in stages.values())
    verdict(3, "shipped overfit patches pass the tests but are rejected (3/3)", ok,
            ", ".join(f"{n}: {s}" for n, (_, _, s) in stages.items()))


def test_criterion_4_inference_oracle(verdict):
    seen, bad = [], []

    @examples(INFER_PROGRAMS)
    @given(bounded_programs(), st.lists(st.tuples(*[st.integers(-5, 5)] * 3), min_size=1, max_size=5))
    def check(p, inputs):
        seen.append(p)
        traces = [run(p, RunInput(dict(zip("abc", v))), 1000).trace for v in inputs]
        s = infer(traces)
        for point in ("entry", "exit"):
            rows = [dict(vals) for t in traces for q, vals in t.points if q == point]
            if set(s.at(point)) != brute_force_infer(point, rows):
                bad.append(p)

    check()
    ok = len(seen) >= INFER_PROGRAMS and not bad
    verdict(4, "infer equals brute-force grammar enumeration", ok,
            f"{len(seen)} programs, {len(bad)} discrepancies")


def test_criterion_5_implication_oracle(verdict):
    seen, bad = [], []

    @examples(IMPLIES_PAIRS)
    @given(st.lists(invariants(), min_size=0, max_size=4), invariants())
    def check(hyp, concl):
        seen.append(1)
        if implies(hyp, concl) != brute_force_implies(hyp, concl):
            bad.append((hyp, concl))

    check()
    ok = len(seen) >= IMPLIES_PAIRS and not bad
    verdict(5, "implies agrees with exhaustive integer enumeration", ok,
            f"{len(seen)} pairs, {len(bad)} discrepancies")


def _bound_set(bounds):
    return InvariantSet.of([Invariant.make("exit", "<=", k, c=v) for k, v in bounds.items()])


def test_criterion_6_pred_sm(verdict):
    seen, bad = [], []
    names = st.sampled_from(["cnt_L2", "cnt_L6", "cnt_L9", "cnt_L15"])

    @examples(500)
    @given(st.dictionaries(names, st.integers(0, 600000), min_size=1),
           st.dictionaries(names, st.integers(0, 600000), min_size=1))
    def check(a_map, b_map):
        seen.append(1)
        a, b = _bound_set(a_map), _bound_set(b_map)
        if pred_sm(a, a):
            bad.append(("reflexive", a_map))
        try:
            both = pred_sm(a, b) and pred_sm(b, a)
        except MissingCounter:
            both = False
        if both:
            bad.append(("symmetric", a_map, b_map))

    check()
    table = (pred_sm(_bound_set({"cnt_L6": 501}), _bound_set({"cnt_L6": 1001})) is True
             and pred_sm(_bound_set({"cnt_L6": 1001}), _bound_set({"cnt_L6": 501})) is False)
    ok = not bad and table
    verdict(6, "pred_sm is strict and asymmetric; 501 vs 1001 table holds", ok,
            f"{len(seen)} random pairs, {len(bad)} violations, table {'ok' if table else 'wrong'}")


def test_criterion_7_non_interference(verdict):
    diffs, checked = [], 0
    for name in CORPUS_NAMES:
        suite = corpus_suite(name)
        program = suite.load_program()
        counted = instrument(program)
        for case in suite.cases:
            plain = run(program, case.input, suite.budget)
            inst = run(counted, case.input, suite.budget)
            projected = inst.trace.project(lambda n: not A.is_counter(n))
            checked += 1
            if plain.outputs != inst.outputs or projected != plain.trace:
                diffs.append(f"{name}/{case.id}")
    verdict(7, "instrumentation leaves outputs and functional traces unchanged", not diffs,
            f"{checked} runs, {len(diffs)} diffs")


def test_criterion_8_determinism(strsearch_repair, tmp_path, verdict):
    _, _, first = strsearch_repair
    reports = {"workers=1 (first)": (first / "report.json").read_bytes()}
    for label, workers in (("workers=1 (second)", 1), ("workers=4", 4)):
        out = tmp_path / label.replace(" ", "_")
        main(["repair", "--config", "strsearch", "--workers", str(workers), "--out", str(out)])
        reports[label] = (out / "report.json").read_bytes()
    distinct = len(set(reports.values()))
    verdict(8, "repair reports are byte-identical across runs and worker counts "
            f"{DETERMINISM_WORKERS}", distinct == 1, f"{len(reports)} reports, {distinct} distinct")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
