from __future__ import annotations

from dataclasses import dataclass

from .grammar import InvariantSet, Provenance
from .implication import closure, implies
from .refine import input_bound_filter

DEFAULT_MIN_SUPPORT = 2


@dataclass(frozen=True)
class Spec:
    correct: InvariantSet  # good patterns, from passing runs
    violated: InvariantSet  # failing-run patterns the good ones do not imply


def build_spec(good: InvariantSet, mix: InvariantSet, program=None,
               min_support: int = DEFAULT_MIN_SUPPORT) -> Spec:
    """``violated`` = members of ``mix`` not implied by ``good`` at the same
    point, so syntactic variants of good invariants are never flagged."""

    def usable(s: InvariantSet) -> InvariantSet:
        if program is not None:
            s = input_bound_filter(s, program)
        return s.filter(lambda i: i.support >= min_support)

    correct = usable(good)
    cache = {}
    violated = []
    for inv in usable(mix):
        dbm = cache.get(inv.point)
        if dbm is None:
            dbm = cache[inv.point] = closure(correct.at(inv.point))
        if not implies((), inv, dbm):
            violated.append(inv)
    return Spec(correct, InvariantSet.of(violated, Provenance.FROM_FAILING, mix.points))
