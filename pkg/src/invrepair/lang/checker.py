"""Static checks: declarations, scoping, types, labels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import ast as A


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    sid: Optional[int] = None
    name: Optional[str] = None

    def __str__(self):
        where = f" (stmt {self.sid})" if self.sid is not None else ""
        return f"{self.kind}: {self.message}{where}"


class _Checker:
    def __init__(self, program: A.Program):
        self.program = program
        self.diags = []
        self.arrays = {p.name for p in program.params if p.is_array}
        self.declared_somewhere = {p.name for p in program.params}
        for s in A.walk(program.body):
            if isinstance(s, A.Assign) and s.decl:
                self.declared_somewhere.add(s.target)
        self.scopes = [set(p.name for p in program.params)]
        self.loop_depth = 0

    def report(self, kind, message, sid=None, name=None):
        self.diags.append(Diagnostic(kind, message, sid, name))

    def in_scope(self, name) -> bool:
        return any(name in sc for sc in self.scopes)

    # -- expressions
    def use(self, name, sid):
        if A.is_counter(name):
            self.report("ReservedName", f"counter variable {name!r} read by program logic", sid, name)
        elif self.in_scope(name):
            return
        elif name in self.declared_somewhere:
            self.report("UseBeforeDecl", f"{name!r} used before its declaration", sid, name)
        else:
            self.report("UndeclaredVariable", f"undeclared variable {name!r}", sid, name)

    def expr(self, e, sid) -> Optional[str]:
        if isinstance(e, A.Num) or isinstance(e, A.Input):
            return "int"
        if isinstance(e, A.Var):
            self.use(e.name, sid)
            if e.name in self.arrays:
                self.report("TypeMismatch", f"array {e.name!r} used as a scalar", sid, e.name)
                return None
            return "int"
        if isinstance(e, A.Index):
            self.use(e.name, sid)
            if e.name not in self.arrays and e.name in self.declared_somewhere:
                self.report("TypeMismatch", f"scalar {e.name!r} indexed", sid, e.name)
            self.want(e.index, "int", sid)
            return "int"
        if isinstance(e, A.UnOp):
            want = "int" if e.op == "-" else "bool"
            self.want(e.operand, want, sid)
            return want
        if isinstance(e, A.BinOp):
            if e.op in A.ARITH_OPS:
                self.want(e.left, "int", sid)
                self.want(e.right, "int", sid)
                return "int"
            if e.op in A.COMPARE_OPS:
                self.want(e.left, "int", sid)
                self.want(e.right, "int", sid)
                return "bool"
            self.want(e.left, "bool", sid)
            self.want(e.right, "bool", sid)
            return "bool"
        raise TypeError(f"not an expression: {e!r}")

    def want(self, e, ty, sid):
        got = self.expr(e, sid)
        if got is not None and got != ty:
            self.report("TypeMismatch", f"expected {ty} expression, got {got}", sid)

    # -- statements
    def declare(self, name, sid):
        if A.is_counter(name):
            self.report("ReservedName", f"{name!r} uses the reserved counter prefix", sid, name)
        if self.in_scope(name):
            self.report("DuplicateDeclaration", f"{name!r} already declared", sid, name)
        self.scopes[-1].add(name)

    def block(self, stmts):
        self.scopes.append(set())
        for s in stmts:
            self.stmt(s)
        self.scopes.pop()

    def assign(self, s: A.Assign):
        if A.is_counter_stmt(s) and not s.decl:
            return
        if s.value is not None:
            self.want(s.value, "int", s.sid)
        if s.decl:
            if s.index is not None:
                self.report("TypeMismatch", "declarations cannot be indexed", s.sid, s.target)
            self.declare(s.target, s.sid)
            return
        self.use(s.target, s.sid)
        if s.index is not None:
            if s.target not in self.arrays and s.target in self.declared_somewhere:
                self.report("TypeMismatch", f"scalar {s.target!r} indexed", s.sid, s.target)
            self.want(s.index, "int", s.sid)
        elif s.target in self.arrays:
            self.report("TypeMismatch", f"array {s.target!r} assigned as a scalar", s.sid, s.target)

    def stmt(self, s):
        if isinstance(s, A.Assign):
            self.assign(s)
        elif isinstance(s, A.Read):
            self.use(s.target, s.sid)
            if s.target in self.arrays:
                self.report("TypeMismatch", f"cannot read into array {s.target!r}", s.sid, s.target)
        elif isinstance(s, A.If):
            self.want(s.cond, "bool", s.sid)
            self.block(s.then)
            self.block(s.orelse)
        elif isinstance(s, A.While):
            self.want(s.cond, "bool", s.sid)
            self.loop_depth += 1
            self.block(s.body)
            self.loop_depth -= 1
        elif isinstance(s, A.For):
            self.scopes.append(set())
            if s.init is not None:
                self.assign(s.init)
            self.want(s.cond, "bool", s.sid)
            self.loop_depth += 1
            self.block(s.body)
            if s.update is not None:
                if s.update.decl:
                    self.report("TypeMismatch", "for-loop update cannot declare", s.update.sid)
                self.assign(s.update)
            self.loop_depth -= 1
            self.scopes.pop()
        elif isinstance(s, A.Break):
            if self.loop_depth == 0:
                self.report("BreakOutsideLoop", "break outside of a loop", s.sid)

    def run(self):
        for p in self.program.params:
            if p.is_array:
                for n in A.expr_vars(p.length):
                    q = self.program.param(n)
                    if q is None or q.is_array:
                        self.report("TypeMismatch", f"array length of {p.name!r} must use scalar parameters", None, p.name)
        self.scopes.append(set())
        for s in self.program.body:
            self.stmt(s)
        top = self.scopes[0] | self.scopes[1]
        for o in self.program.outputs:
            if o not in top:
                self.report("UndeclaredOutput", f"output {o!r} is not a parameter or top-level variable", None, o)
            elif o in self.arrays:
                self.report("TypeMismatch", f"output {o!r} must be a scalar", None, o)
        labels = A.loop_labels(self.program)
        for lab in sorted({x for x in labels if labels.count(x) > 1}):
            self.report("DuplicateLabel", f"loop label {lab!r} used more than once", None, lab)
        return self.diags


def check(program: A.Program) -> list:
    """Return the list of diagnostics; empty iff the program is well formed."""
    return _Checker(program).run()
