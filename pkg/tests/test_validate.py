import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, corpus_suite
from invrepair.execution import RunInput
from invrepair.harness import TestCase, TestSuite, load_config, load_patch
from invrepair.invariants import Invariant, InvariantSet
from invrepair.repair import Mutation, apply_mutation
from invrepair.validate import (AnalysisConfig, FalsificationChecker, MissingCounter,
                                PointMismatch, Stage, check_validity, derive_spec, pipeline,
                                pred_sm, sema_eq)
from invrepair.validate.analysis import generator_for
from oracles import brute_force_equivalent
from strategies import invariants

inv = Invariant.make


def at_p(*items):
    return InvariantSet.of(items, points={"p"})


def bounds(**kw):
    return InvariantSet.of([inv("exit", "<=", k, c=v) for k, v in kw.items()], points={"exit"})


def test_sema_eq_examples():
    a = at_p(inv("p", "<=", "x", c=5), inv("p", ">=", "x", c=5))
    assert sema_eq(a, a)
    assert sema_eq(a, at_p(inv("p", "==", "x", c=5)))
    assert not sema_eq(at_p(inv("p", "==", "x", "n")), at_p(inv("p", "<=", "x", "n")))


def test_sema_eq_point_mismatch():
    with pytest.raises(PointMismatch):
        sema_eq(at_p(), InvariantSet.of([], points={"q"}))


def test_pred_sm_examples():
    assert pred_sm(bounds(cnt_L6=501), bounds(cnt_L6=1001))
    assert not pred_sm(bounds(cnt_L6=1001), bounds(cnt_L6=501))
    patched = InvariantSet.of([inv("exit", "==", "cnt_L9", c=0), inv("exit", "<=", "cnt_L6", c=1001)])
    assert pred_sm(patched, bounds(cnt_L6=1001, cnt_L9=500499))
    assert pred_sm(bounds(cnt_L6=1001), bounds(cnt_L6=1001, cnt_L9=500499))  # absent counts as 0
    assert not pred_sm(bounds(cnt_L6=1001), bounds(cnt_L6=1001))
    with pytest.raises(MissingCounter):
        pred_sm(bounds(cnt_L2=3), bounds(cnt_L6=3))


@settings(max_examples=150, deadline=None)
@given(st.lists(invariants(), max_size=3), st.lists(invariants(), max_size=3))
def test_sema_eq_matches_enumeration(a_items, b_items):
    a, b = at_p(*a_items), at_p(*b_items)
    assert sema_eq(a, b) == brute_force_equivalent(a.items, b.items)
    assert sema_eq(a, b) == sema_eq(b, a)
    assert sema_eq(a, a)


counter_maps = st.dictionaries(st.sampled_from(["cnt_L2", "cnt_L6", "cnt_L9"]),
                               st.integers(0, 2000), min_size=1)


@settings(max_examples=300, deadline=None)
@given(counter_maps, st.data())
def test_pred_sm_strict_and_asymmetric(a_map, data):
    b_map = {k: data.draw(st.integers(0, 2000)) for k in a_map}
    a, b = bounds(**a_map), bounds(**b_map)
    assert not pred_sm(a, a)
    assert not (pred_sm(a, b) and pred_sm(b, a))


# -- falsification checks and the pipeline on the small corpus programs

@pytest.fixture(scope="module", params=["toy_count", "accum_loop"])
def small(request):
    cfg = load_config(CORPUS / request.param / "config.json")
    program = cfg.suite.load_program()
    derivation = derive_spec(program, cfg.suite, cfg.analysis)
    return cfg, program, derivation


def _checker(cfg, program, derivation):
    suite = cfg.suite
    return FalsificationChecker(list(suite.cases), derivation.runs.ids_where(False),
                                generator_for(program, suite), cfg.analysis.falsification_budget,
                                suite.budget, suite.budget)


def test_check_validity(small):
    cfg, program, derivation = small
    developer, _ = load_patch(cfg.developer_patch, program)
    overfit, _ = load_patch(cfg.overfit_patch, program)
    checker = _checker(cfg, program, derivation)
    assert check_validity(developer, derivation.spec, checker)
    assert not check_validity(overfit, derivation.spec, checker)
    assert not check_validity(program, derivation.spec, checker)


def test_pipeline_developer_valid(small):
    cfg, program, derivation = small
    developer, _ = load_patch(cfg.developer_patch, program)
    v = pipeline(program, developer, cfg.suite, cfg.analysis, derivation.spec)
    assert v.stage is Stage.VALID, v.evidence
    assert v.evidence == ()
    stages = v.report["stages"]
    assert [s["stage"] for s in stages] == ["tests", "violated", "correct", "sema_eq", "pred_sm"]
    assert all(s["status"] == "passed" for s in stages)
    assert v.report["functional"]["original"] == v.report["functional"]["patched"]
    rows = v.report["counters"]
    assert all(r["patched"] <= r["original"] for r in rows)
    assert any(r["patched"] < r["original"] for r in rows)


def test_pipeline_overfit_rejected(small):
    cfg, program, derivation = small
    overfit, _ = load_patch(cfg.overfit_patch, program)
    v = pipeline(program, overfit, cfg.suite, cfg.analysis, derivation.spec)
    assert v.stage in (Stage.FAILED_CORRECT_CHECK, Stage.FAILED_SEMA_EQ)
    assert v.report["stages"][0] == {"stage": "tests", "status": "passed"}
    assert v.evidence


def test_pipeline_original_fails_tests(small):
    cfg, program, derivation = small
    v = pipeline(program, program, cfg.suite, cfg.analysis, derivation.spec)
    assert v.stage is Stage.FAILED_TESTS
    assert set(v.report) == {"falsification_budget", "stages", "tests"}
    assert all(e.startswith("test ") for e in v.evidence)


def test_pipeline_empty_patch_on_fast_program(toy):
    cases = tuple(TestCase(f"n{n}", RunInput({"n": n}), {"x": n}, 1000) for n in (0, 2, 5, 9))
    suite = TestSuite("toy", CORPUS, cases, 10_000, generator={"scalars": {"n": [0, 20]}})
    v = pipeline(toy, toy, suite, AnalysisConfig(falsification_budget=50))
    assert v.stage is Stage.FAILED_PRED_SM
    assert v.evidence[0] == "no counter bound strictly improves"


def test_pipeline_delete_search_loop(strsearch):
    suite = corpus_suite("strsearch")
    patched = apply_mutation(strsearch, Mutation("delete", 5))
    v = pipeline(strsearch, patched, suite, AnalysisConfig())
    assert v.stage in (Stage.FAILED_TESTS, Stage.FAILED_SEMA_EQ)
    assert v.evidence
