"""The six-form invariant grammar and point-indexed invariant sets."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from ..lang.ast import is_counter

ZERO = "0"  # pseudo-variable standing for the constant zero


class Form(str, enum.Enum):
    EQ_CONST = "v == c"
    LE_CONST = "v <= c"
    GE_CONST = "v >= c"
    EQ_VAR = "v == w"
    LE_VAR = "v <= w"
    EQ_OFFSET = "v == w + c"


FORM_ORDER = {f: i for i, f in enumerate(Form)}


class Provenance(str, enum.Enum):
    FROM_PASSING = "FromPassing"
    FROM_FAILING = "FromFailing"
    REFINED = "Refined"
    ALL_RUNS = "AllRuns"


@dataclass(frozen=True)
class Invariant:
    point: str
    form: Form
    v: str
    w: Optional[str] = None
    c: Optional[int] = None
    support: int = field(default=0, compare=False)

    def __post_init__(self):
        binary = self.form in (Form.EQ_VAR, Form.LE_VAR, Form.EQ_OFFSET)
        if binary != (self.w is not None):
            raise ValueError(f"{self.form.value} takes {'two' if binary else 'one'} variables")
        if self.form in (Form.EQ_VAR, Form.EQ_OFFSET) and not self.v < self.w:
            raise ValueError("equalities must order their variables; use Invariant.make")
        if self.form is Form.EQ_OFFSET and not self.c:
            raise ValueError("offset equality needs a non-zero constant; use Invariant.make")
        if self.form is Form.LE_VAR and self.v == self.w:
            raise ValueError("v <= v is not a grammar instance")

    @classmethod
    def make(cls, point, op, v, w=None, c=None, support=0) -> "Invariant":
        """Build a canonical invariant from ``v op c`` / ``v op w [+ c]``
        where op is one of ``==``, ``<=``, ``>=``."""
        if w is None:
            form = {"==": Form.EQ_CONST, "<=": Form.LE_CONST, ">=": Form.GE_CONST}[op]
            return cls(point, form, v, None, int(c), support)
        c = int(c or 0)
        if op == ">=":
            if c:
                raise ValueError("v >= w + c is outside the grammar")
            v, w, op = w, v, "<="
        if op == "<=":
            if c:
                raise ValueError("v <= w + c is outside the grammar")
            return cls(point, Form.LE_VAR, v, w, None, support)
        if op != "==":
            raise ValueError(f"unknown relation {op!r}")
        if w < v:  # v == w + c  <=>  w == v - c
            v, w, c = w, v, -c
        if c == 0:
            return cls(point, Form.EQ_VAR, v, w, None, support)
        return cls(point, Form.EQ_OFFSET, v, w, c, support)

    @property
    def variables(self) -> tuple:
        return (self.v,) if self.w is None else (self.v, self.w)

    @property
    def is_bound(self) -> bool:
        return self.form in (Form.LE_CONST, Form.GE_CONST)

    def involves_counter(self) -> bool:
        return any(is_counter(x) for x in self.variables)

    def holds(self, val) -> bool:
        f = self.form
        a = val[self.v]
        if f is Form.EQ_CONST:
            return a == self.c
        if f is Form.LE_CONST:
            return a <= self.c
        if f is Form.GE_CONST:
            return a >= self.c
        b = val[self.w]
        if f is Form.EQ_VAR:
            return a == b
        if f is Form.LE_VAR:
            return a <= b
        return a == b + self.c

    def constraints(self) -> list:
        """Difference constraints ``(x, y, k)`` meaning ``x - y <= k``."""
        f, v, w, c = self.form, self.v, self.w, self.c
        if f is Form.EQ_CONST:
            return [(v, ZERO, c), (ZERO, v, -c)]
        if f is Form.LE_CONST:
            return [(v, ZERO, c)]
        if f is Form.GE_CONST:
            return [(ZERO, v, -c)]
        if f is Form.EQ_VAR:
            return [(v, w, 0), (w, v, 0)]
        if f is Form.LE_VAR:
            return [(v, w, 0)]
        return [(v, w, c), (w, v, -c)]

    def text(self) -> str:
        f = self.form
        if f is Form.EQ_CONST:
            return f"{self.v} == {self.c}"
        if f is Form.LE_CONST:
            return f"{self.v} <= {self.c}"
        if f is Form.GE_CONST:
            return f"{self.v} >= {self.c}"
        if f is Form.EQ_VAR:
            return f"{self.v} == {self.w}"
        if f is Form.LE_VAR:
            return f"{self.v} <= {self.w}"
        sign = "+" if self.c > 0 else "-"
        return f"{self.v} == {self.w} {sign} {abs(self.c)}"

    def __str__(self):
        return f"{self.point}: {self.text()}"

    def sort_key(self):
        return (self.point, self.v, FORM_ORDER[self.form], self.w or "", self.c or 0)


@dataclass(frozen=True)
class InvariantSet:
    items: tuple = ()
    provenance: Provenance = Provenance.ALL_RUNS
    points: frozenset = frozenset()  # points that had at least one sample

    @classmethod
    def of(cls, items: Iterable[Invariant], provenance=Provenance.ALL_RUNS, points=None) -> "InvariantSet":
        uniq = {}
        for inv in items:
            prev = uniq.get(inv)
            if prev is None or inv.support > prev.support:
                uniq[inv] = inv
        ordered = tuple(sorted(uniq.values(), key=Invariant.sort_key))
        pts = frozenset(points) if points is not None else frozenset(i.point for i in ordered)
        return cls(ordered, Provenance(provenance), pts)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, inv):
        return inv in self.items

    def at(self, point: str) -> tuple:
        return tuple(i for i in self.items if i.point == point)

    def filter(self, keep: Callable[[Invariant], bool]) -> "InvariantSet":
        return InvariantSet(tuple(i for i in self.items if keep(i)), self.provenance, self.points)

    def restrict_points(self, points) -> "InvariantSet":
        points = frozenset(points)
        return InvariantSet(tuple(i for i in self.items if i.point in points),
                            self.provenance, self.points & points)

    def functional(self) -> "InvariantSet":
        return self.filter(lambda i: not i.involves_counter())

    def counters_only(self) -> "InvariantSet":
        return self.filter(lambda i: all(is_counter(x) for x in i.variables))

    def texts(self, point: str) -> list:
        return [i.text() for i in self.at(point)]

    def with_provenance(self, provenance) -> "InvariantSet":
        return InvariantSet(self.items, Provenance(provenance), self.points)
