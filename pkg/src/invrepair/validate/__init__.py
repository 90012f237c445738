from .analysis import (AnalysisConfig, SpecDerivation, SuiteRun, derive_spec, run_suite,
                       suite_invariants)
from .checks import (FalsificationChecker, MissingCounter, PointMismatch, ValidityResult,
                     check_validity, check_validity_detailed, counter_bounds, pred_sm, sema_eq)
from .pipeline import Stage, Verdict, comparison_sets, pipeline

__all__ = [
    "AnalysisConfig", "SpecDerivation", "SuiteRun", "derive_spec", "run_suite",
    "suite_invariants", "FalsificationChecker", "MissingCounter", "PointMismatch",
    "ValidityResult", "check_validity", "check_validity_detailed", "counter_bounds",
    "pred_sm", "sema_eq", "Stage", "Verdict", "comparison_sets", "pipeline",
]
