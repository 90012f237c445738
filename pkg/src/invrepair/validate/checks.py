"""SemaEq, PredSm and the falsification-based validity check."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..execution import run_all
from ..invariants import Form, InvariantSet, closure, implies
from ..invariants.infer import samples_by_point
from ..lang.ast import is_counter
from .analysis import ensure_instrumented


class PointMismatch(ValueError):
    pass


class MissingCounter(ValueError):
    pass


def sema_eq(a: InvariantSet, b: InvariantSet) -> bool:
    """Mutual implication, point by point."""
    if a.points != b.points:
        raise PointMismatch(f"points differ: {sorted(a.points ^ b.points)}")
    for point in sorted(a.points):
        ia, ib = a.at(point), b.at(point)
        da, db = closure(ia), closure(ib)
        if not all(implies((), i, db) for i in ia) or not all(implies((), i, da) for i in ib):
            return False
    return True


def counter_bounds(s: InvariantSet) -> dict:
    """counter -> tightest constant upper bound stated in ``s``."""
    out = {}
    for inv in s:
        if inv.w is None and is_counter(inv.v) and inv.form in (Form.LE_CONST, Form.EQ_CONST):
            out[inv.v] = min(out.get(inv.v, inv.c), inv.c)
    return out


def pred_sm(patched: InvariantSet, original: InvariantSet) -> bool:
    """Every counter bound of ``patched`` is <= the original's and at
    least one is strictly smaller.  Counters the patched set does not
    mention count as bound 0."""
    pb, ob = counter_bounds(patched), counter_bounds(original)
    missing = sorted(set(pb) - set(ob))
    if missing:
        raise MissingCounter(f"original has no bound for {', '.join(missing)}")
    strict = False
    for name, orig in ob.items():
        new = pb.get(name, 0)
        if new > orig:
            return False
        strict = strict or new < orig
    return strict


def bound_table(patched: InvariantSet, original: InvariantSet) -> list:
    pb, ob = counter_bounds(patched), counter_bounds(original)
    return [{"counter": n, "original": ob.get(n), "patched": pb.get(n, 0)}
            for n in sorted(set(pb) | set(ob))]


# -- falsification checks ---------------------------------------------------

HOLDS, FALSIFIED, VACUOUS = "holds", "falsified", "vacuous"


def member_status(inv, rows, reached: bool, missing_is_falsified: bool) -> str:
    if not reached:
        return VACUOUS
    relevant = [r for r in rows if all(x in r for x in inv.variables)]
    if len(relevant) < len(rows) and missing_is_falsified:
        return FALSIFIED
    if not relevant:
        return VACUOUS
    return FALSIFIED if any(not inv.holds(r) for r in relevant) else HOLDS


@dataclass
class FalsificationChecker:
    """Approximates a verifier by replaying runs: the suite cases (all of
    them for the correct patterns, the failing ones for the violated
    patterns) plus ``budget`` generated inputs."""
    cases: list
    failing_ids: tuple
    generator: object
    budget: int
    run_budget: int
    suite_budget: int
    workers: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    def _traces(self, pt, which: str):
        key = (id(pt), which)
        if key not in self._cache:
            if which == "failing":
                inputs = [c.input for c in self.cases if c.id in self.failing_ids]
                res = run_all(pt, inputs, self.suite_budget, self.workers)
            else:
                res = run_all(pt, [c.input for c in self.cases], self.suite_budget, self.workers)
                gen = self.generator.generate(self.budget) if self.budget > 0 else []
                res = res + run_all(pt, gen, self.run_budget, self.workers)
            self._cache[key] = (pt, [r.trace for r in res])
        return self._cache[key][1]

    def statuses(self, pt, s: InvariantSet, which: str, missing_is_falsified: bool) -> list:
        by_point = samples_by_point(self._traces(pt, which))
        out = []
        for inv in s:
            rows = by_point.get(inv.point, [])
            out.append((inv, member_status(inv, rows, bool(rows), missing_is_falsified)))
        return out


@dataclass(frozen=True)
class ValidityResult:
    correct_ok: bool
    violated_ok: bool
    violated: tuple  # (Invariant, status)
    correct: tuple  # (Invariant, status) for checked members

    @property
    def valid(self) -> bool:
        return self.correct_ok and self.violated_ok


def check_violated(pt, spec, checker: FalsificationChecker) -> tuple:
    """The bad pattern must stop holding on the failing tests: at least
    one member is falsified or no longer observable (vacuous)."""
    sts = checker.statuses(pt, spec.violated, "failing", missing_is_falsified=False)
    ok = not sts or any(st != HOLDS for _, st in sts)
    return ok, tuple(sts)


def check_correct(pt, spec, checker: FalsificationChecker) -> tuple:
    """No functional good pattern may be falsified on pt."""
    sts = checker.statuses(pt, spec.correct.functional(), "all", missing_is_falsified=True)
    ok = all(st != FALSIFIED for _, st in sts)
    return ok, tuple(sts)


def check_validity_detailed(pt, spec, checker: FalsificationChecker) -> ValidityResult:
    pt = ensure_instrumented(pt)
    vok, vst = check_violated(pt, spec, checker)
    cok, cst = check_correct(pt, spec, checker)
    return ValidityResult(cok, vok, vst, cst)


def check_validity(pt, spec, checker: FalsificationChecker) -> bool:
    """Good patterns still hold on pt and the bad pattern no longer does."""
    return check_validity_detailed(pt, spec, checker).valid
