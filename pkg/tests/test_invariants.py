import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_suite
from invrepair.execution import RunInput, Trace, instrument, run
from invrepair.inputs import InputGenerator
from invrepair.invariants import (EmptyTraceSet, Form, Invariant, InvariantSet, Provenance,
                                  build_spec, format_records, implies, infer, infer_point,
                                  parse_records, refine, upper_bound)
from invrepair.repair import Mutation, apply_mutation
from invrepair.validate import run_suite
from oracles import brute_force_implies, brute_force_infer
from strategies import bounded_programs, invariants

inv = Invariant.make


def toy_traces(toy, ns=(2, 5, 9)):
    p = instrument(toy)
    return [run(p, RunInput({"n": n}), 1000).trace for n in ns]


def test_infer_toy_exit(toy):
    s = infer(toy_traces(toy))
    exit_ = set(s.texts("exit"))
    for t in ["n == x", "n <= 9", "n >= 2", "x <= 9", "x >= 2", "cnt_L1 == n", "cnt_L1 == x"]:
        assert t in exit_
    rows = [{"cnt_L1": n, "n": n, "x": n} for n in (2, 5, 9)]
    assert set(s.at("exit")) == brute_force_infer("exit", rows)


def test_infer_single_sample():
    s = infer([Trace((("p", (("x", 7),)),))])
    assert s.texts("p") == ["x == 7", "x <= 7", "x >= 7"]
    assert all(i.support == 1 for i in s)


def test_infer_needs_traces():
    with pytest.raises(EmptyTraceSet):
        infer([])


def test_infer_canonical_forms():
    rows = [{"a": 3, "b": 1}, {"a": 5, "b": 3}]
    got = {i.text() for i in infer_point("p", rows)}
    assert "a == b + 2" in got
    assert "b <= a" in got
    assert not any(t.startswith("a <= b") for t in got)


@pytest.mark.slow
def test_infer_strsearch_cnt_l9(strsearch):
    suite = corpus_suite("strsearch")
    runs = run_suite(strsearch, suite)
    failing = infer(runs.traces(False))
    assert any(i.text().startswith("cnt_L9 <= ") and i.c > 0 for i in failing.at("exit"))
    patched = apply_mutation(strsearch, Mutation("move", 6, 2, "before"))
    assert "cnt_L9 == 0" in infer(run_suite(patched, suite).traces()).texts("exit")


def test_refine_keeps_true_invariant(toy):
    s = infer(toy_traces(toy))
    gen = InputGenerator.from_spec(toy, {"scalars": {"n": [0, 20]}})
    out = refine(instrument(toy), s, gen, 100)
    texts = set(out.texts("exit"))
    assert "n == x" in texts
    assert "x <= 20" in texts  # relaxed to the new extreme
    assert "n <= 9" not in texts and "n <= 15" not in texts  # input-only bound dropped
    assert out.provenance is Provenance.REFINED


def test_refine_budget_zero_is_identity(toy):
    s = infer(toy_traces(toy))
    gen = InputGenerator.from_spec(toy, {"scalars": {"n": [0, 20]}})
    assert refine(instrument(toy), s, gen, 0) is s


def test_implies_examples():
    assert implies([inv("p", "<=", "x", c=5), inv("p", ">=", "x", c=5)], inv("p", "==", "x", c=5))
    assert implies([inv("p", "==", "x", "y", 1), inv("p", "<=", "y", c=4)], inv("p", "<=", "x", c=5))
    assert not implies([inv("p", "<=", "x", c=5)], inv("p", "==", "x", c=5))
    # hypotheses at other points are ignored
    assert not implies([inv("q", "==", "x", c=5)], inv("p", "==", "x", c=5))
    assert upper_bound([inv("p", "<=", "y", "x"), inv("p", "<=", "x", c=3)], "y") == 3


def test_build_spec_examples():
    def s(*items):
        return InvariantSet.of([i for i in items])

    def mk(op, v, w=None, c=None):
        return inv("p", op, v, w, c, support=5)

    assert build_spec(s(mk("==", "y", c=0)), s(mk("<=", "x", c=5), mk("==", "y", c=0))).violated.texts("p") == ["x <= 5"]
    assert build_spec(s(mk("<=", "x", c=10)), s(mk("<=", "x", c=7))).violated.texts("p") == ["x <= 7"]
    assert len(build_spec(s(mk("==", "x", c=5)), s(mk("<=", "x", c=5))).violated) == 0


def test_build_spec_ignores_low_support():
    good = InvariantSet.of([])
    mix = InvariantSet.of([inv("p", "<=", "x", c=5, support=1)])
    assert len(build_spec(good, mix).violated) == 0
    assert len(build_spec(good, mix, min_support=1).violated) == 1


def test_report_round_trip(toy):
    s = infer(toy_traces(toy), Provenance.FROM_PASSING)
    text = format_records([("passing", s)])
    back = parse_records(text)["passing"]
    assert back.items == s.items
    assert [i.support for i in back] == [i.support for i in s]
    assert back.provenance is Provenance.FROM_PASSING
    assert text == format_records([("passing", back)])


def _rows(draw_program, inputs):
    p = draw_program
    return [run(p, RunInput(dict(zip("abc", vals))), 1000).trace for vals in inputs]


small_inputs = st.lists(st.tuples(*[st.integers(-5, 5)] * 3), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(bounded_programs(), small_inputs)
def test_infer_matches_brute_force(p, inputs):
    traces = _rows(p, inputs)
    s = infer(traces)
    for point in ("entry", "exit"):
        rows = [dict(v) for t in traces for q, v in t.points if q == point]
        assert set(s.at(point)) == brute_force_infer(point, rows)


@settings(max_examples=60, deadline=None)
@given(bounded_programs(), small_inputs)
def test_infer_soundness(p, inputs):
    traces = _rows(p, inputs)
    for i in infer(traces):
        for t in traces:
            for row in t.at(i.point):
                assert i.holds(row)


@settings(max_examples=200, deadline=None)
@given(st.lists(invariants(), min_size=0, max_size=4), invariants())
def test_implies_matches_enumeration(hyp, concl):
    assert implies(hyp, concl) == brute_force_implies(hyp, concl)


@settings(max_examples=100, deadline=None)
@given(st.lists(invariants(), max_size=4), st.lists(invariants(), max_size=4))
def test_build_spec_postcondition(good_items, mix_items):
    good = InvariantSet.of([Invariant(i.point, i.form, i.v, i.w, i.c, 3) for i in good_items])
    mix = InvariantSet.of([Invariant(i.point, i.form, i.v, i.w, i.c, 3) for i in mix_items])
    spec = build_spec(good, mix)
    for v in spec.violated:
        assert not implies(spec.correct.at(v.point), v)
    for m in mix:
        if m not in spec.violated:
            assert implies(spec.correct.at(m.point), m)


@settings(max_examples=40, deadline=None)
@given(bounded_programs(), small_inputs, small_inputs)
def test_refine_is_contractive(p, seen, extra):
    s = infer(_rows(p, seen))
    out = refine(p, s, InputGenerator.from_spec(p, {}), 0, seed_traces=_rows(p, extra))
    originals = {(i.point, i.form, i.v, i.w) for i in s}
    for r in out:
        assert (r.point, r.form, r.v, r.w) in originals
        base = next(i for i in s if (i.point, i.form, i.v, i.w) == (r.point, r.form, r.v, r.w))
        # a weakening: the original implies the refined invariant
        assert implies([base], r)
