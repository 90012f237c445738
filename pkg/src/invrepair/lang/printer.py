"""Canonical pretty printer.  Loops always print their label explicitly so
a re-parse reproduces the same labels regardless of line layout."""
from __future__ import annotations

from . import ast as A

INDENT = "  "

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
         "+": 4, "-": 4, "*": 5, "/": 5}


def expr_str(e: A.Expr, parent_prec: int = 0, right: bool = False) -> str:
    if isinstance(e, A.Num):
        return str(e.value)
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, A.Index):
        return f"{e.name}[{expr_str(e.index)}]"
    if isinstance(e, A.Input):
        return "input()"
    if isinstance(e, A.UnOp):
        inner = expr_str(e.operand, 6)
        # keep "- -x" from printing as the decrement-looking "--x"
        sep = " " if inner.startswith("-") else ""
        return f"{e.op}{sep}{inner}"
    if isinstance(e, A.BinOp):
        prec = _PREC[e.op]
        text = f"{expr_str(e.left, prec)} {e.op} {expr_str(e.right, prec, right=True)}"
        if prec < parent_prec or (prec == parent_prec and (right or prec == 3)):
            return f"({text})"
        return text
    raise TypeError(f"not an expression: {e!r}")


def simple_str(s) -> str:
    if isinstance(s, A.Assign):
        if s.decl:
            if s.value is None:
                return f"int {s.target}"
            return f"int {s.target} := {expr_str(s.value)}"
        lhs = s.target if s.index is None else f"{s.target}[{expr_str(s.index)}]"
        return f"{lhs} := {expr_str(s.value)}"
    if isinstance(s, A.Read):
        return f"read {s.target}"
    if isinstance(s, A.Break):
        return "break"
    if isinstance(s, A.Skip):
        return "skip"
    raise TypeError(f"not a simple statement: {s!r}")


def _block(stmts, depth, lines):
    for s in stmts:
        _stmt(s, depth, lines)


def _stmt(s, depth, lines):
    pad = INDENT * depth
    if isinstance(s, A.While):
        lines.append(f"{pad}{s.label}: while ({expr_str(s.cond)}) {{")
        _block(s.body, depth + 1, lines)
        lines.append(f"{pad}}}")
    elif isinstance(s, A.For):
        init = simple_str(s.init) if s.init is not None else ""
        update = simple_str(s.update) if s.update is not None else ""
        lines.append(f"{pad}{s.label}: for ({init}; {expr_str(s.cond)}; {update}) {{")
        _block(s.body, depth + 1, lines)
        lines.append(f"{pad}}}")
    elif isinstance(s, A.If):
        lines.append(f"{pad}if ({expr_str(s.cond)}) {{")
        _block(s.then, depth + 1, lines)
        cur = s
        while len(cur.orelse) == 1 and isinstance(cur.orelse[0], A.If):
            cur = cur.orelse[0]
            lines.append(f"{pad}}} else if ({expr_str(cur.cond)}) {{")
            _block(cur.then, depth + 1, lines)
        if cur.orelse:
            lines.append(f"{pad}}} else {{")
            _block(cur.orelse, depth + 1, lines)
        lines.append(f"{pad}}}")
    else:
        lines.append(f"{pad}{simple_str(s)};")


def pretty_print(program: A.Program) -> str:
    params = []
    for p in program.params:
        if p.is_array:
            params.append(f"int {p.name}[{expr_str(p.length)}]")
        else:
            params.append(f"int {p.name}")
    lines = [f"proc {program.name}({', '.join(params)}) returns ({', '.join(program.outputs)}) {{"]
    _block(program.body, 1, lines)
    lines.append("}")
    return "\n".join(lines) + "\n"
