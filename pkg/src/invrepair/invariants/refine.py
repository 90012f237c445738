"""Counterexample-driven refinement: the falsifier that stands in for a
verifier.  Candidate invariants are replayed against runs on extra
inputs; a falsified bound is relaxed to the new extreme, anything else
falsified is dropped."""
from __future__ import annotations

from ..execution import run_all
from ..lang import ast as A
from .grammar import Form, Invariant, InvariantSet, Provenance
from .infer import samples_by_point

DEFAULT_RUN_BUDGET = 2_000_000


def pure_inputs(program: A.Program) -> set:
    """Scalar parameters the program never assigns."""
    written = A.assigned_anywhere(program)
    return {p.name for p in program.params if not p.is_array and p.name not in written}


def input_bound_filter(s: InvariantSet, program: A.Program) -> InvariantSet:
    """Drop invariants mentioning only untouched inputs: they describe the
    test inputs, not the program."""
    inputs = pure_inputs(program)
    return s.filter(lambda i: not all(x in inputs for x in i.variables))


def falsified(inv: Invariant, rows) -> list:
    return [r for r in rows if all(x in r for x in inv.variables) and not inv.holds(r)]


def weaken(inv: Invariant, rows, inputs) -> Invariant | None:
    """Weakest-necessary repair of ``inv`` against ``rows`` (or None)."""
    bad = falsified(inv, rows)
    if not bad:
        return inv
    if all(x in inputs for x in inv.variables):
        return None
    seen = [r[inv.v] for r in rows if inv.v in r]
    if inv.form is Form.LE_CONST:
        return Invariant(inv.point, inv.form, inv.v, None, max(seen + [inv.c]), inv.support + len(seen))
    if inv.form is Form.GE_CONST:
        return Invariant(inv.point, inv.form, inv.v, None, min(seen + [inv.c]), inv.support + len(seen))
    return None


def refine_against(s: InvariantSet, traces, program: A.Program) -> InvariantSet:
    by_point = samples_by_point(traces)
    inputs = pure_inputs(program)
    out = []
    for inv in s:
        rows = by_point.get(inv.point, ())
        w = weaken(inv, rows, inputs)
        if w is not None:
            if w is inv and rows:
                w = Invariant(inv.point, inv.form, inv.v, inv.w, inv.c,
                              inv.support + sum(1 for r in rows if all(x in r for x in inv.variables)))
            out.append(w)
    return InvariantSet.of(out, Provenance.REFINED, s.points | frozenset(by_point))


def refine(program: A.Program, s: InvariantSet, gen, budget: int, seed_traces=(),
           run_budget: int = DEFAULT_RUN_BUDGET, workers: int = 1) -> InvariantSet:
    """Falsify ``s`` on ``seed_traces`` plus runs of ``program`` on the
    first ``budget`` generated inputs.

    The result holds on every original and generated sample.  Counter-
    examples are gathered first and applied together, so the outcome does
    not depend on run order or worker count.
    """
    seed_traces = list(seed_traces)
    if budget <= 0 and not seed_traces:
        return s
    inputs = gen.generate(budget) if budget > 0 else []
    results = run_all(program, inputs, run_budget, workers)
    traces = seed_traces + [r.trace for r in results]
    return refine_against(s, traces, program)
