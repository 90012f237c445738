"""The staged patch validation pipeline.

Stages run cheapest first and the first failure stops the pipeline:

1. the test suite (every case Fast on the patched program),
2. the bad pattern no longer holds on the failing tests,
3. no good functional pattern is falsified,
4. functional invariants re-inferred on the suite are equivalent and the
   loop-counter bounds strictly improve.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..execution import EXIT, ENTRY
from ..invariants import InvariantSet
from ..lang import ast as A
from .analysis import (AnalysisConfig, derive_spec, ensure_instrumented, generator_for,
                       run_suite, suite_invariants)
from .checks import (FALSIFIED, HOLDS, VACUOUS, FalsificationChecker, MissingCounter,
                     PointMismatch, bound_table, check_correct, check_violated, pred_sm,
                     sema_eq)


class Stage(str, enum.Enum):
    FAILED_TESTS = "FailedTests"
    FAILED_VIOLATED_CHECK = "FailedViolatedCheck"
    FAILED_CORRECT_CHECK = "FailedCorrectCheck"
    FAILED_SEMA_EQ = "FailedSemaEq"
    FAILED_PRED_SM = "FailedPredSm"
    VALID = "Valid"


@dataclass(frozen=True)
class Verdict:
    stage: Stage
    evidence: tuple = ()
    report: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.stage is Stage.VALID

    def to_dict(self) -> dict:
        return {"stage": self.stage.value, "evidence": list(self.evidence), "report": self.report}


def _status_rows(statuses) -> list:
    return [{"point": inv.point, "invariant": inv.text(), "status": st} for inv, st in statuses]


def _texts(s: InvariantSet) -> dict:
    return {p: list(s.texts(p)) for p in sorted(s.points)}


def comparison_sets(orig_inv: InvariantSet, patched_inv: InvariantSet) -> tuple:
    """Functional invariants at entry and exit.  The patched side is cut
    down to the variables the original has at each point, so a variable
    hoisted to a wider scope does not count as a behaviour change."""
    points = {ENTRY, EXIT}
    a = orig_inv.functional().restrict_points(points)
    keep = {}
    for p in points:
        keep[p] = {x for i in orig_inv.at(p) for x in i.variables}
    b = patched_inv.functional().restrict_points(points).filter(
        lambda i: all(x in keep[i.point] for x in i.variables))
    return a, b


def exit_counters(s: InvariantSet) -> InvariantSet:
    return s.counters_only().restrict_points({EXIT})


def pipeline(original: A.Program, patched: A.Program, suite, cfg: AnalysisConfig,
             spec=None) -> Verdict:
    """Validate ``patched`` against ``original``.  Errors raised by the
    sub-checks are turned into failing verdicts."""
    report = {"falsification_budget": cfg.falsification_budget}
    stages = []
    report["stages"] = stages
    orig = ensure_instrumented(original)
    pt = ensure_instrumented(patched)

    # stage 1: tests
    runs = run_suite(pt, suite, cfg.workers)
    report["tests"] = [
        {"id": i, "class": c.run_class.value, "steps": r.steps, "status": r.status.value,
         "functional_failure": c.functional_failure}
        for i, r, c in zip(runs.ids, runs.results, runs.classes)
    ]
    slow = runs.ids_where(False)
    if slow:
        stages.append({"stage": "tests", "status": "failed"})
        return Verdict(Stage.FAILED_TESTS, tuple(f"test {i} is Slow" for i in slow), report)
    stages.append({"stage": "tests", "status": "passed"})

    if spec is None:
        derivation = derive_spec(orig, suite, cfg, require_both=False)
        spec, orig_runs = derivation.spec, derivation.runs
    else:
        orig_runs = run_suite(orig, suite, cfg.workers)
    checker = FalsificationChecker(
        list(suite.cases), orig_runs.ids_where(False), generator_for(orig, suite),
        cfg.falsification_budget, cfg.run_budget or suite.budget, suite.budget, cfg.workers)

    # stage 2: the bad pattern is gone
    ok, statuses = check_violated(pt, spec, checker)
    report["violated_check"] = _status_rows(statuses)
    vacuous = [inv.text() for inv, st in statuses if st == VACUOUS]
    if vacuous:
        report["vacuous"] = vacuous
    if not ok:
        stages.append({"stage": "violated", "status": "failed"})
        return Verdict(Stage.FAILED_VIOLATED_CHECK,
                       tuple(f"{inv}: still holds" for inv, st in statuses if st == HOLDS), report)
    stages.append({"stage": "violated", "status": "passed"})

    # stage 3: the good pattern survives
    ok, statuses = check_correct(pt, spec, checker)
    report["correct_check"] = {
        "checked": len(statuses),
        "falsified": [r for r in _status_rows(statuses) if r["status"] == FALSIFIED],
    }
    if not ok:
        stages.append({"stage": "correct", "status": "failed"})
        return Verdict(Stage.FAILED_CORRECT_CHECK,
                       tuple(f"{inv}: falsified" for inv, st in statuses if st == FALSIFIED), report)
    stages.append({"stage": "correct", "status": "passed"})

    # stage 4: re-inferred invariants on the same suite
    _, orig_inv = suite_invariants(orig, suite, cfg.workers)
    _, pt_inv = suite_invariants(pt, suite, cfg.workers)
    a, b = comparison_sets(orig_inv, pt_inv)
    report["functional"] = {"original": _texts(a), "patched": _texts(b)}
    oc, pc = exit_counters(orig_inv), exit_counters(pt_inv)
    report["counters"] = bound_table(pc, oc)
    try:
        same = sema_eq(a, b)
    except PointMismatch as e:
        stages.append({"stage": "sema_eq", "status": "failed"})
        return Verdict(Stage.FAILED_SEMA_EQ, (str(e),), report)
    if not same:
        diff = sorted({f"{i}: original only" for i in a if i not in b}
                      | {f"{i}: patched only" for i in b if i not in a})
        stages.append({"stage": "sema_eq", "status": "failed"})
        return Verdict(Stage.FAILED_SEMA_EQ, tuple(diff) or ("functional invariants differ",), report)
    stages.append({"stage": "sema_eq", "status": "passed"})
    try:
        better = pred_sm(pc, oc)
    except MissingCounter as e:
        stages.append({"stage": "pred_sm", "status": "failed"})
        return Verdict(Stage.FAILED_PRED_SM, (str(e),), report)
    if not better:
        stages.append({"stage": "pred_sm", "status": "failed"})
        rows = [f"{r['counter']}: {r['patched']} vs {r['original']}" for r in report["counters"]]
        return Verdict(Stage.FAILED_PRED_SM, tuple(["no counter bound strictly improves"] + rows), report)
    stages.append({"stage": "pred_sm", "status": "passed"})
    return Verdict(Stage.VALID, (), report)
