"""Recursive-descent parser for the mini-language.

Grammar (informal)::

    program  := [header] stmts EOF
    header   := "proc" NAME "(" [param {"," param}] ")" ["returns" "(" [NAME {"," NAME}] ")"]
                "{" stmts "}"
    param    := "int" NAME ["[" expr "]"]
    stmt     := [NAME ":"] loop | if | simple (";" | before "}" / EOF)
    loop     := "while" "(" expr ")" block
              | "for" "(" [simple] ";" expr ";" [simple] ")" block
    if       := "if" "(" expr ")" block ["else" (if | block)]
    simple   := "int" NAME [":=" expr] | NAME ["[" expr "]"] ":=" expr
              | "read" NAME | "break" | "skip"

Loops without an explicit label get ``L<line>``, where the line is counted
from the line holding the procedure's opening brace (or from the top of
the file for a bare statement list).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace

from . import ast as A

KEYWORDS = {"proc", "returns", "int", "if", "else", "while", "for", "read",
            "break", "skip", "input"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<lcomment>//[^\n]*)
  | (?P<bcomment>/\*.*?\*/)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|==|!=|<=|>=|&&|\|\||[-+*/<>!(){}\[\];,:])
""", re.VERBOSE | re.DOTALL)


class ProgramSyntaxError(SyntaxError):
    def __init__(self, message, line, col, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        detail = message
        if self.expected:
            detail += " (expected " + ", ".join(repr(e) for e in self.expected) + ")"
        super().__init__(f"{line}:{col}: {detail}")


class DuplicateDeclaration(ValueError):
    pass


class UndeclaredVariable(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ProgramSyntaxError(f"unexpected character {source[pos]!r}",
                                     line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "bcomment":
            nls = text.count("\n")
            if nls:
                line += nls
                line_start = pos + text.rindex("\n") + 1
        elif kind in ("num", "name", "op"):
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# binary operator precedence; comparisons are non-associative
_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
         "+": 4, "-": 4, "*": 5, "/": 5}


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.base_line = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def error(self, msg, expected=()):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ProgramSyntaxError(f"{msg}, found {found}", t.line, t.col, expected)

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error("unexpected token", (text,))
        t = self.tok
        self.i += 1
        return t

    def name(self) -> str:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            self.error("expected identifier", ("identifier",))
        self.i += 1
        return t.text

    # -- program
    def program(self) -> A.Program:
        if self.tok.kind == "eof":
            self.error("empty program", ("statement", "proc"))
        if self.at("proc"):
            prog = self.header()
        else:
            prog = snippet_program(self.stmts(top=True))
        if self.tok.kind != "eof":
            self.error("trailing input", ("end of input",))
        return A.renumber(prog)

    def header(self) -> A.Program:
        self.expect("proc")
        pname = self.name()
        self.expect("(")
        params = []
        if not self.at(")"):
            params.append(self.param())
            while self.at(","):
                self.i += 1
                params.append(self.param())
        self.expect(")")
        outputs = []
        if self.at("returns"):
            self.i += 1
            self.expect("(")
            if not self.at(")"):
                outputs.append(self.name())
                while self.at(","):
                    self.i += 1
                    outputs.append(self.name())
            self.expect(")")
        seen = set()
        for p in params:
            if p.name in seen:
                raise DuplicateDeclaration(f"parameter {p.name!r} declared twice")
            seen.add(p.name)
        brace = self.expect("{")
        self.base_line = brace.line
        body = self.stmts()
        self.expect("}")
        return A.Program(pname, tuple(params), body, tuple(outputs))

    def param(self) -> A.Param:
        self.expect("int")
        n = self.name()
        length = None
        if self.at("["):
            self.i += 1
            length = self.expr()
            self.expect("]")
        return A.Param(n, length)

    # -- statements
    def stmts(self, top=False) -> tuple:
        out = []
        while not (self.at("}") or self.tok.kind == "eof"):
            out.append(self.stmt())
        if not out and top:
            self.error("empty program", ("statement",))
        return tuple(out)

    def block(self) -> tuple:
        self.expect("{")
        body = self.stmts()
        self.expect("}")
        return body

    def stmt(self):
        t = self.tok
        if t.kind == "name" and self.peek().text == ":" and self.peek().kind == "op":
            label = self.name()
            self.expect(":")
            if not (self.at("while") or self.at("for")):
                self.error("label must precede a loop", ("while", "for"))
            return self.loop(label)
        if self.at("while") or self.at("for"):
            return self.loop(None)
        if self.at("if"):
            return self.if_stmt()
        s = self.simple()
        if self.at(";"):
            self.i += 1
        elif not (self.at("}") or self.tok.kind == "eof"):
            self.error("missing ';'", (";",))
        return s

    def loop(self, label):
        t = self.tok
        if label is None:
            label = f"L{t.line - self.base_line}"
        if self.at("while"):
            self.i += 1
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return A.While(0, label, cond, self.block())
        self.expect("for")
        self.expect("(")
        init = None if self.at(";") else self.simple_assign()
        self.expect(";")
        cond = self.expr()
        self.expect(";")
        update = None if self.at(")") else self.simple_assign()
        self.expect(")")
        return A.For(0, label, init, cond, update, self.block())

    def simple_assign(self) -> A.Assign:
        s = self.simple()
        if not isinstance(s, A.Assign):
            self.error("for-loop header needs an assignment", (":=",))
        return s

    def if_stmt(self) -> A.If:
        self.expect("if")
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        then = self.block()
        orelse = ()
        if self.at("else"):
            self.i += 1
            orelse = (self.if_stmt(),) if self.at("if") else self.block()
        return A.If(0, cond, then, orelse)

    def simple(self):
        if self.at("int"):
            self.i += 1
            n = self.name()
            value = None
            if self.at(":="):
                self.i += 1
                value = self.expr()
            return A.Assign(0, n, value, None, True)
        if self.at("read"):
            self.i += 1
            return A.Read(0, self.name())
        if self.at("break"):
            self.i += 1
            return A.Break(0)
        if self.at("skip"):
            self.i += 1
            return A.Skip(0)
        if self.tok.kind != "name" or self.tok.text in KEYWORDS:
            self.error("expected statement",
                       ("int", "identifier", "if", "while", "for", "read", "break", "skip"))
        n = self.name()
        index = None
        if self.at("["):
            self.i += 1
            index = self.expr()
            self.expect("]")
        self.expect(":=")
        return A.Assign(0, n, self.expr(), index, False)

    # -- expressions (precedence climbing)
    def expr(self, min_prec=1):
        left = self.unary()
        while True:
            t = self.tok
            prec = _PREC.get(t.text) if t.kind == "op" else None
            if prec is None or prec < min_prec:
                return left
            self.i += 1
            right = self.expr(prec + 1)
            left = A.BinOp(t.text, left, right)
            if prec == 3 and self.tok.kind == "op" and _PREC.get(self.tok.text) == 3:
                self.error("comparisons do not chain", ("&&", "||", ")"))

    def unary(self):
        if self.at("-"):
            self.i += 1
            if self.tok.kind == "num":
                return A.Num(-int(self.advance().text))
            return A.UnOp("-", self.unary())
        if self.at("!"):
            self.i += 1
            return A.UnOp("!", self.unary())
        return self.primary()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return A.Num(int(t.text))
        if self.at("input"):
            self.i += 1
            self.expect("(")
            self.expect(")")
            return A.Input()
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "name" and t.text not in KEYWORDS:
            n = self.name()
            if self.at("["):
                self.i += 1
                idx = self.expr()
                self.expect("]")
                return A.Index(n, idx)
            return A.Var(n)
        self.error("expected expression", ("number", "identifier", "input", "("))


def snippet_program(body) -> A.Program:
    """Wrap a bare statement list as procedure ``main``.

    Undeclared variables get implicit declarations: one whose first
    occurrence is a plain top-level assignment is declared there and
    becomes an output; any other becomes an int parameter.
    """
    declared, params, outputs = set(), [], []

    def touch(names):
        for n in sorted(names, key=order.index):
            if n not in declared:
                declared.add(n)
                params.append(n)

    def expr_names(e):
        out = []

        def go(x):
            if isinstance(x, A.Var) and x.name not in out:
                out.append(x.name)
            elif isinstance(x, A.Index):
                go(x.index)
            elif isinstance(x, A.BinOp):
                go(x.left)
                go(x.right)
            elif isinstance(x, A.UnOp):
                go(x.operand)
        go(e)
        return out

    order = []

    def reads(*exprs):
        names = [n for e in exprs for n in expr_names(e)]
        for n in names:
            if n not in order:
                order.append(n)
        touch(names)

    def visit(s, top):
        if isinstance(s, A.Assign):
            reads(s.value, s.index)
            if s.decl:
                declared.add(s.target)
            elif s.target not in declared:
                declared.add(s.target)
                if top and s.index is None:
                    outputs.append(s.target)
                    return replace(s, decl=True)
                params.append(s.target)
            return s
        if isinstance(s, A.Read):
            if s.target not in declared:
                declared.add(s.target)
                params.append(s.target)
            return s
        if isinstance(s, A.If):
            reads(s.cond)
            return replace(s, then=tuple(visit(x, False) for x in s.then),
                           orelse=tuple(visit(x, False) for x in s.orelse))
        if isinstance(s, A.While):
            reads(s.cond)
            return replace(s, body=tuple(visit(x, False) for x in s.body))
        if isinstance(s, A.For):
            init = visit(s.init, False) if s.init is not None else None
            reads(s.cond)
            body = tuple(visit(x, False) for x in s.body)
            update = visit(s.update, False) if s.update is not None else None
            return replace(s, init=init, update=update, body=body)
        return s

    body = tuple(visit(s, True) for s in body)
    return A.Program("main", tuple(A.Param(n) for n in params), body, tuple(outputs))


def parse(source: str, strict: bool = False) -> A.Program:
    """Parse source text into a Program with canonical statement ids.

    With ``strict`` the static checker also runs and the first
    declaration problem is raised as an exception.
    """
    prog = Parser(source).program()
    if strict:
        from .checker import check
        for d in check(prog):
            if d.kind == "DuplicateDeclaration":
                raise DuplicateDeclaration(d.message)
            if d.kind in ("UndeclaredVariable", "UseBeforeDecl"):
                raise UndeclaredVariable(d.message)
    return prog


def parse_expr(source: str) -> A.Expr:
    p = Parser(source)
    e = p.expr()
    if p.tok.kind != "eof":
        p.error("trailing input", ("end of input",))
    return e
