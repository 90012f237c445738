"""Statement-level mutation operators over statement ids."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from ..lang import ast as A
from ..lang.checker import check

KINDS = ("move", "swap", "delete", "insert")


class InvalidOperand(ValueError):
    pass


class IllFormedResult(ValueError):
    def __init__(self, diagnostics, program):
        self.diagnostics = list(diagnostics)
        self.program = program
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Mutation:
    """``move``/``insert`` place ``target`` (moved, or copied as a donor)
    ``where`` ("before"/"after") ``anchor``; ``swap`` exchanges ``target``
    and ``anchor``; ``delete`` removes ``target``."""
    kind: str
    target: int
    anchor: Optional[int] = None
    where: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown mutation kind {self.kind!r}")
        if self.kind in ("move", "insert") and self.where not in ("before", "after"):
            raise ValueError(f"{self.kind} needs where='before' or 'after'")
        if self.kind != "delete" and self.anchor is None:
            raise ValueError(f"{self.kind} needs an anchor statement")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "target": self.target}
        if self.anchor is not None:
            d["anchor"] = self.anchor
        if self.where is not None:
            d["where"] = self.where
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Mutation":
        return cls(d["kind"], int(d["target"]),
                   None if d.get("anchor") is None else int(d["anchor"]), d.get("where"))

    def __str__(self):
        if self.kind == "delete":
            return f"delete {self.target}"
        if self.kind == "swap":
            return f"swap {self.target} {self.anchor}"
        return f"{self.kind} {self.target} {self.where} {self.anchor}"


def _rewrite(stmts, fn):
    out = []
    for s in stmts:
        out.extend(fn(s.sid, _rewrite_children(s, fn)))
    return tuple(out)


def _slot(stmt, fn):
    if stmt is None:
        return None
    got = fn(stmt.sid, stmt)
    if not got:
        return None
    if len(got) > 1 or not isinstance(got[0], A.Assign):
        raise InvalidOperand("a for-loop header slot holds exactly one assignment")
    return got[0]


def _rewrite_children(s, fn):
    if isinstance(s, A.If):
        return replace(s, then=_rewrite(s.then, fn), orelse=_rewrite(s.orelse, fn))
    if isinstance(s, A.While):
        return replace(s, body=_rewrite(s.body, fn))
    if isinstance(s, A.For):
        return replace(s, init=_slot(s.init, fn), update=_slot(s.update, fn), body=_rewrite(s.body, fn))
    return s


def _subtree_ids(stmt) -> set:
    return {x.sid for x in A.walk([stmt])}


def _lookup(program, sid):
    s = A.find(program, sid)
    if s is None:
        raise InvalidOperand(f"no statement with id {sid}")
    return s


def apply_structural(program: A.Program, m: Mutation) -> A.Program:
    """Apply ``m`` without running the checker; ids are renumbered."""
    pos = A.positions(program)
    target = _lookup(program, m.target)
    if m.kind == "delete":
        body = _rewrite(program.body, lambda sid, s: [] if sid == m.target else [s])
        return A.renumber(replace(program, body=body))

    anchor = _lookup(program, m.anchor)
    if m.kind == "swap":
        if m.target == m.anchor:
            return A.renumber(program)
        if m.anchor in _subtree_ids(target) or m.target in _subtree_ids(anchor):
            raise InvalidOperand("cannot swap a statement with its own ancestor")

        def fn(sid, s):
            if sid == m.target:
                return [anchor]
            if sid == m.anchor:
                return [target]
            return [s]
        return A.renumber(replace(program, body=_rewrite(program.body, fn)))

    if pos[m.anchor].slot in ("init", "update"):
        raise InvalidOperand("cannot place statements beside a for-loop header slot")
    if m.kind == "move" and m.anchor in _subtree_ids(target):
        raise InvalidOperand("cannot move a statement inside itself")

    def place(sid, s):
        if m.kind == "move" and sid == m.target:
            return []
        if sid == m.anchor:
            return [target, s] if m.where == "before" else [s, target]
        return [s]
    return A.renumber(replace(program, body=_rewrite(program.body, place)))


def apply_mutation(program: A.Program, m: Mutation) -> A.Program:
    """Apply one mutation; raise IllFormedResult if the result fails check()."""
    out = apply_structural(program, m)
    diags = check(out)
    if diags:
        raise IllFormedResult(diags, out)
    return out


def apply_all(program: A.Program, mutations) -> A.Program:
    for m in mutations:
        program = apply_mutation(program, m)
    return program


def anchors(program: A.Program) -> list:
    """Statements that sit in a block (valid move/insert anchors)."""
    pos = A.positions(program)
    return [sid for sid in A.stmt_ids(program) if pos[sid].slot not in ("init", "update")]
