"""Hypothesis strategies for random well-formed programs."""
from hypothesis import strategies as st

from invrepair.lang import ast as A

SCALARS = ("a", "b", "c")


def exprs(names=SCALARS, depth=2):
    leaf = st.one_of(st.integers(-20, 20).map(A.Num), st.sampled_from(names).map(A.Var))
    if depth == 0:
        return leaf
    sub = exprs(names, depth - 1)
    return st.one_of(
        leaf,
        st.builds(A.BinOp, st.sampled_from(["+", "-", "*"]), sub, sub),
        st.builds(lambda e: A.UnOp("-", e), sub.filter(lambda e: not isinstance(e, A.Num))),
    )


def conds(names=SCALARS, depth=1):
    cmp = st.builds(A.BinOp, st.sampled_from(list(A.COMPARE_OPS)), exprs(names, 1), exprs(names, 1))
    if depth == 0:
        return cmp
    sub = conds(names, depth - 1)
    return st.one_of(cmp, st.builds(A.BinOp, st.sampled_from(["&&", "||"]), sub, sub),
                     st.builds(lambda c: A.UnOp("!", c), sub))


@st.composite
def stmts(draw, names=SCALARS, depth=2, labels=None):
    labels = labels if labels is not None else iter(range(1, 10 ** 6))
    n = draw(st.integers(1, 3))
    out = []
    for _ in range(n):
        kinds = ["assign", "assign", "skip"] + (["if", "while", "for"] if depth > 0 else [])
        kind = draw(st.sampled_from(kinds))
        if kind == "assign":
            out.append(A.Assign(0, draw(st.sampled_from(names)), draw(exprs(names))))
        elif kind == "skip":
            out.append(A.Skip(0))
        elif kind == "if":
            then = draw(stmts(names, depth - 1, labels))
            orelse = draw(st.one_of(st.just(()), stmts(names, depth - 1, labels)))
            out.append(A.If(0, draw(conds(names)), then, tuple(orelse)))
        elif kind == "while":
            out.append(A.While(0, f"W{next(labels)}", draw(conds(names)),
                               draw(stmts(names, depth - 1, labels))))
        else:
            v = draw(st.sampled_from(names))
            init = A.Assign(0, v, draw(exprs(names, 1)))
            update = A.Assign(0, v, A.BinOp("+", A.Var(v), A.Num(1)))
            out.append(A.For(0, f"F{next(labels)}", init, draw(conds(names)),
                             update, draw(stmts(names, depth - 1, labels))))
    return tuple(out)


@st.composite
def programs(draw, depth=2):
    body = draw(stmts(SCALARS, depth))
    prog = A.Program("rand", tuple(A.Param(n) for n in SCALARS), body, SCALARS)
    return A.renumber(prog)


# Terminating loops: counting loops over a fresh bounded variable.
@st.composite
def counting_programs(draw):
    """Nested counting loops whose iteration counts are known in closed form."""
    outer = draw(st.integers(0, 6))
    inner = draw(st.integers(0, 6))
    step = draw(st.integers(1, 3))
    src = f"""proc count(int a) returns (s) {{
  int s := 0;
  int i := 0;
  while (i < {outer}) {{
    int j := 0;
    while (j < {inner}) {{
      j := j + {step};
      s := s + a;
    }}
    i := i + 1;
  }}
}}"""
    return src, outer, inner, step


@st.composite
def bounded_programs(draw):
    """Loop-free programs over a, b, c whose values stay in -5..5."""
    def block(depth):
        out = []
        for _ in range(draw(st.integers(1, 3))):
            kind = draw(st.sampled_from(["const", "copy", "neg", "if"] if depth else
                                        ["const", "copy", "neg"]))
            v = draw(st.sampled_from(SCALARS))
            if kind == "const":
                out.append(A.Assign(0, v, A.Num(draw(st.integers(-5, 5)))))
            elif kind == "copy":
                out.append(A.Assign(0, v, A.Var(draw(st.sampled_from(SCALARS)))))
            elif kind == "neg":
                out.append(A.Assign(0, v, A.UnOp("-", A.Var(draw(st.sampled_from(SCALARS))))))
            else:
                cond = A.BinOp(draw(st.sampled_from(list(A.COMPARE_OPS))),
                               A.Var(draw(st.sampled_from(SCALARS))),
                               A.Num(draw(st.integers(-5, 5))))
                orelse = block(depth - 1) if draw(st.booleans()) else ()
                out.append(A.If(0, cond, block(depth - 1), orelse))
        return tuple(out)
    prog = A.Program("bounded", tuple(A.Param(n) for n in SCALARS), block(2), SCALARS)
    return A.renumber(prog)


def invariants(point="p", names=("x", "y", "z"), lo=-8, hi=8):
    """Random grammar instances over ``names``."""
    from invrepair.invariants import Invariant

    @st.composite
    def one(draw):
        op = draw(st.sampled_from(["==", "<=", ">=", "var==", "var<=", "offset"]))
        v = draw(st.sampled_from(names))
        if op in ("==", "<=", ">="):
            return Invariant.make(point, op, v, None, draw(st.integers(lo, hi)))
        w = draw(st.sampled_from([n for n in names if n != v]))
        if op == "var==":
            return Invariant.make(point, "==", v, w)
        if op == "var<=":
            return Invariant.make(point, "<=", v, w)
        c = draw(st.integers(lo, hi).filter(bool))
        return Invariant.make(point, "==", v, w, c)
    return one()
