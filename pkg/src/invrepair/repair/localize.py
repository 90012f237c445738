"""Invariant-guided fault localization."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..lang import ast as A

FLOOR = 0.05


@dataclass(frozen=True)
class SuspiciousnessRanking:
    entries: tuple  # of (sid, Fraction), best first

    def score(self, sid: int) -> Fraction:
        for s, sc in self.entries:
            if s == sid:
                return sc
        raise KeyError(sid)

    def order(self) -> list:
        return [s for s, _ in self.entries]

    def weights(self, floor: float = FLOOR) -> dict:
        return {s: max(float(sc), floor) for s, sc in self.entries}


def _home_loop(stmt, stacks) -> str | None:
    if isinstance(stmt, A.Loop):
        return stmt.label
    stack = stacks[stmt.sid]
    return stack[-1] if stack else None


def relevant(inv, stmt, stacks, nested) -> bool:
    """Does ``inv`` concern ``stmt``?  Yes if the statement writes one of
    its variables, or one of its counters belongs to the statement's own
    loop or to a loop nested in it."""
    written = A.written_vars(stmt)
    home = _home_loop(stmt, stacks)
    for x in inv.variables:
        if A.is_counter(x):
            if home is None:
                continue
            label = x[len(A.COUNTER_PREFIX):]
            if label == home or label in nested.get(home, ()):
                return True
        elif x in written:
            return True
    return False


def localize(spec, program: A.Program) -> SuspiciousnessRanking:
    """Score each statement by the share of violated invariants that
    concern it.  Ties break by statement id; an empty spec gives a
    uniform all-zero ranking."""
    stmts = list(A.walk(program.body))
    violated = list(spec.violated) if spec is not None else []
    if not violated:
        return SuspiciousnessRanking(tuple((s.sid, Fraction(0)) for s in sorted(stmts, key=lambda s: s.sid)))
    stacks = A.enclosing_loops(program)
    nested = A.nested_labels(program)
    total = len(violated)
    scored = []
    for s in stmts:
        hits = sum(1 for inv in violated if relevant(inv, s, stacks, nested))
        scored.append((s.sid, Fraction(hits, total)))
    scored.sort(key=lambda e: (-e[1], e[0]))
    return SuspiciousnessRanking(tuple(scored))
