"""Suite execution and specification mining shared by repair and validation."""
from __future__ import annotations

from dataclasses import dataclass

from ..execution import classify, instrument, is_instrumented, run_all
from ..inputs import InputGenerator
from ..invariants import InvariantSet, Provenance, Spec, build_spec, infer
from ..invariants.refine import input_bound_filter, refine

DEFAULT_FALSIFICATION_BUDGET = 200


@dataclass(frozen=True)
class AnalysisConfig:
    falsification_budget: int = DEFAULT_FALSIFICATION_BUDGET
    run_budget: int | None = None  # per generated run; defaults to the suite budget
    min_support: int = 2
    workers: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisConfig":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


@dataclass(frozen=True)
class SuiteRun:
    """Instrumented runs of one program over a suite, in case order."""
    ids: tuple
    results: tuple
    classes: tuple

    def ids_where(self, fast: bool) -> tuple:
        return tuple(i for i, c in zip(self.ids, self.classes) if c.fast == fast)

    def traces(self, fast: bool | None = None) -> list:
        return [r.trace for r, c in zip(self.results, self.classes) if fast is None or c.fast == fast]


def ensure_instrumented(program):
    return program if is_instrumented(program) else instrument(program)


def run_suite(program, suite, workers: int = 1) -> SuiteRun:
    prog = ensure_instrumented(program)
    results = run_all(prog, [c.input for c in suite.cases], suite.budget, workers)
    classes = [classify(r, c.expected, c.threshold) for r, c in zip(results, suite.cases)]
    return SuiteRun(tuple(c.id for c in suite.cases), tuple(results), tuple(classes))


def generator_for(program, suite) -> InputGenerator:
    return InputGenerator.from_spec(program, getattr(suite, "generator", None))


@dataclass(frozen=True)
class SpecDerivation:
    runs: SuiteRun
    good: InvariantSet
    mix: InvariantSet
    spec: Spec


def derive_spec(original, suite, cfg: AnalysisConfig, require_both: bool = True) -> SpecDerivation:
    """Mine good patterns from Fast runs and bad ones from Slow runs.

    ``violated`` is computed against the unrefined good set.  The good set
    is then refined against every suite run and the generated inputs so
    that what remains in ``correct`` is behaviour the original shows
    everywhere, not an accident of which tests happened to be fast.

    With ``require_both`` off, a suite without Slow (or Fast) runs gives
    an empty violated (or correct) set instead of an error.
    """
    prog = ensure_instrumented(original)
    runs = run_suite(prog, suite, cfg.workers)
    fast, slow = runs.traces(True), runs.traces(False)
    if require_both and (not fast or not slow):
        raise ValueError(f"suite needs Fast and Slow runs on the original "
                         f"(got {len(fast)} Fast, {len(slow)} Slow)")
    good = infer(fast, Provenance.FROM_PASSING) if fast else InvariantSet.of([], Provenance.FROM_PASSING)
    mix = infer(slow, Provenance.FROM_FAILING) if slow else InvariantSet.of([], Provenance.FROM_FAILING)
    base = build_spec(good, mix, prog, cfg.min_support)
    refined = refine(prog, good, generator_for(prog, suite), cfg.falsification_budget,
                     seed_traces=runs.traces(), run_budget=cfg.run_budget or suite.budget,
                     workers=cfg.workers)
    correct = input_bound_filter(refined, prog).filter(lambda i: i.support >= cfg.min_support)
    return SpecDerivation(runs, good, mix, Spec(correct, base.violated))


def suite_invariants(program, suite, workers: int = 1) -> tuple:
    """Invariants of ``program`` over every suite run (for SemaEq/PredSm)."""
    runs = run_suite(program, suite, workers)
    return runs, infer(runs.traces(), Provenance.ALL_RUNS)
