"""Immutable AST for the mini-language.

Every statement carries a ``sid``: a dense integer assigned in pre-order
starting at 1.  ``renumber`` re-derives the ids from tree shape, so two
programs with the same shape always carry the same ids.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Optional, Union

COUNTER_PREFIX = "cnt_"


# -- expressions ----------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Index:
    name: str
    index: "Expr"


@dataclass(frozen=True)
class Input:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnOp:
    op: str  # "-" or "!"
    operand: "Expr"


Expr = Union[Num, Var, Index, Input, BinOp, UnOp]

ARITH_OPS = ("+", "-", "*", "/")
COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")
BOOL_OPS = ("&&", "||")


# -- statements -----------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    sid: int
    target: str
    value: Optional[Expr]  # None only for a bare declaration ``int x;``
    index: Optional[Expr] = None
    decl: bool = False


@dataclass(frozen=True)
class Read:
    sid: int
    target: str


@dataclass(frozen=True)
class If:
    sid: int
    cond: Expr
    then: tuple = ()
    orelse: tuple = ()


@dataclass(frozen=True)
class While:
    sid: int
    label: str
    cond: Expr
    body: tuple = ()


@dataclass(frozen=True)
class For:
    """``for (init; cond; update) body``.

    The node's own sid stands for the guard; ``init`` and ``update`` are
    separate statements with their own ids so mutations can move them.
    """
    sid: int
    label: str
    init: Optional[Assign]
    cond: Expr
    update: Optional[Assign]
    body: tuple = ()


@dataclass(frozen=True)
class Break:
    sid: int


@dataclass(frozen=True)
class Skip:
    sid: int


Stmt = Union[Assign, Read, If, While, For, Break, Skip]
Loop = (While, For)


@dataclass(frozen=True)
class Param:
    name: str
    length: Optional[Expr] = None  # arrays carry a length expression

    @property
    def is_array(self) -> bool:
        return self.length is not None


@dataclass(frozen=True)
class Program:
    name: str
    params: tuple
    body: tuple
    outputs: tuple = ()

    @property
    def param_names(self) -> tuple:
        return tuple(p.name for p in self.params)

    def param(self, name: str) -> Optional[Param]:
        for p in self.params:
            if p.name == name:
                return p
        return None


def kind(stmt: Stmt) -> str:
    return {
        Assign: "assign", Read: "read", If: "if", While: "while",
        For: "for", Break: "break", Skip: "skip",
    }[type(stmt)]


def is_counter(name: str) -> bool:
    return name.startswith(COUNTER_PREFIX)


def counter_name(label: str) -> str:
    return COUNTER_PREFIX + label


def is_counter_stmt(stmt: Stmt) -> bool:
    return isinstance(stmt, Assign) and stmt.index is None and is_counter(stmt.target)


# -- traversal ------------------------------------------------------------

def children(stmt: Stmt) -> Iterator[Stmt]:
    """Direct child statements in pre-order."""
    if isinstance(stmt, If):
        yield from stmt.then
        yield from stmt.orelse
    elif isinstance(stmt, While):
        yield from stmt.body
    elif isinstance(stmt, For):
        if stmt.init is not None:
            yield stmt.init
        if stmt.update is not None:
            yield stmt.update
        yield from stmt.body


def walk(stmts) -> Iterator[Stmt]:
    for s in stmts:
        yield s
        yield from walk(children(s))


def stmt_ids(program: Program) -> list:
    return [s.sid for s in walk(program.body)]


def find(program: Program, sid: int) -> Optional[Stmt]:
    for s in walk(program.body):
        if s.sid == sid:
            return s
    return None


def loops(program: Program) -> list:
    return [s for s in walk(program.body) if isinstance(s, Loop)]


def loop_labels(program: Program) -> list:
    return [s.label for s in loops(program)]


def expr_vars(e: Optional[Expr]) -> set:
    if e is None:
        return set()
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Index):
        return {e.name} | expr_vars(e.index)
    if isinstance(e, BinOp):
        return expr_vars(e.left) | expr_vars(e.right)
    if isinstance(e, UnOp):
        return expr_vars(e.operand)
    return set()


def has_input(e: Optional[Expr]) -> bool:
    if isinstance(e, Input):
        return True
    if isinstance(e, Index):
        return has_input(e.index)
    if isinstance(e, BinOp):
        return has_input(e.left) or has_input(e.right)
    if isinstance(e, UnOp):
        return has_input(e.operand)
    return False


def written_vars(stmt: Stmt) -> set:
    """Variables assigned by ``stmt`` itself (not its children)."""
    if isinstance(stmt, (Assign, Read)):
        return {stmt.target}
    return set()


def assigned_anywhere(program: Program) -> set:
    return set().union(*(written_vars(s) for s in walk(program.body)))


# -- renumbering ----------------------------------------------------------

@dataclass
class _Counter:
    next: int = 1

    def take(self) -> int:
        n = self.next
        self.next += 1
        return n


def _renum_stmt(s: Stmt, c: _Counter) -> Stmt:
    sid = c.take()
    if isinstance(s, If):
        then = tuple(_renum_stmt(x, c) for x in s.then)
        orelse = tuple(_renum_stmt(x, c) for x in s.orelse)
        return replace(s, sid=sid, then=then, orelse=orelse)
    if isinstance(s, While):
        return replace(s, sid=sid, body=tuple(_renum_stmt(x, c) for x in s.body))
    if isinstance(s, For):
        init = _renum_stmt(s.init, c) if s.init is not None else None
        update = _renum_stmt(s.update, c) if s.update is not None else None
        body = tuple(_renum_stmt(x, c) for x in s.body)
        return replace(s, sid=sid, init=init, update=update, body=body)
    return replace(s, sid=sid)


def renumber(program: Program) -> Program:
    c = _Counter()
    return replace(program, body=tuple(_renum_stmt(s, c) for s in program.body))


@dataclass(frozen=True)
class Position:
    """Where a statement sits: its parent (sid or None for top level),
    the slot name ("body", "then", "orelse", "init", "update") and index."""
    parent: Optional[int]
    slot: str
    index: int = 0


def positions(program: Program) -> dict:
    """Map every sid to its Position."""
    out = {}

    def visit(stmts, parent, slot):
        for i, s in enumerate(stmts):
            out[s.sid] = Position(parent, slot, i)
            _visit_children(s)

    def _visit_children(s):
        if isinstance(s, If):
            visit(s.then, s.sid, "then")
            visit(s.orelse, s.sid, "orelse")
        elif isinstance(s, While):
            visit(s.body, s.sid, "body")
        elif isinstance(s, For):
            if s.init is not None:
                out[s.init.sid] = Position(s.sid, "init")
            if s.update is not None:
                out[s.update.sid] = Position(s.sid, "update")
            visit(s.body, s.sid, "body")

    visit(program.body, None, "body")
    return out


def enclosing_loops(program: Program) -> dict:
    """Map sid -> tuple of labels of loops whose *iterations* execute it,
    outermost first.  A for's init runs outside its own loop; its update
    and guard run inside it."""
    out = {}

    def visit(stmts, stack):
        for s in stmts:
            if isinstance(s, While):
                out[s.sid] = stack + (s.label,)
                visit(s.body, stack + (s.label,))
            elif isinstance(s, For):
                inner = stack + (s.label,)
                out[s.sid] = inner
                if s.init is not None:
                    out[s.init.sid] = stack
                if s.update is not None:
                    out[s.update.sid] = inner
                visit(s.body, inner)
            else:
                out[s.sid] = stack
                if isinstance(s, If):
                    visit(s.then, stack)
                    visit(s.orelse, stack)

    visit(program.body, ())
    return out


def nested_labels(program: Program) -> dict:
    """Map loop label -> set of labels of loops nested inside it (transitively)."""
    out = {}
    for lp in loops(program):
        out[lp.label] = {x.label for x in walk(children(lp)) if isinstance(x, Loop)}
    return out


__all__ = [
    "Num", "Var", "Index", "Input", "BinOp", "UnOp", "Expr",
    "Assign", "Read", "If", "While", "For", "Break", "Skip", "Stmt", "Loop",
    "Param", "Program", "Position", "kind", "children", "walk", "find", "loops",
    "loop_labels", "stmt_ids", "renumber", "positions", "enclosing_loops",
    "nested_labels", "expr_vars", "has_input", "written_vars", "assigned_anywhere",
    "is_counter", "counter_name", "is_counter_stmt", "COUNTER_PREFIX",
    "ARITH_OPS", "COMPARE_OPS", "BOOL_OPS",
]
