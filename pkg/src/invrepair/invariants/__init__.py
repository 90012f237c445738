from .grammar import Form, Invariant, InvariantSet, Provenance, ZERO
from .implication import DBM, closure, implies, upper_bound
from .infer import EmptyTraceSet, infer, infer_point, samples_by_point
from .refine import input_bound_filter, pure_inputs, refine, refine_against
from .report import format_records, parse_records
from .spec import Spec, build_spec

__all__ = [
    "Form", "Invariant", "InvariantSet", "Provenance", "ZERO", "DBM", "closure",
    "implies", "upper_bound", "EmptyTraceSet", "infer", "infer_point",
    "samples_by_point", "input_bound_filter", "pure_inputs", "refine",
    "refine_against", "format_records", "parse_records", "Spec", "build_spec",
]
