"""Tracing interpreter, loop-counter instrumentation and fast/slow
classification.

A run samples variable valuations at three kinds of program point:
``entry``, ``exit`` and ``<label>.exit`` right after each loop finishes.
Statements count one step each (a loop guard counts once per
evaluation); counter bookkeeping statements are free.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .lang import ast as A

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1

ENTRY = "entry"
EXIT = "exit"


def loop_exit_point(label: str) -> str:
    return f"{label}.exit"


class Status(str, enum.Enum):
    COMPLETED = "Completed"
    BUDGET_EXHAUSTED = "BudgetExhausted"
    RUNTIME_ERROR = "RuntimeError"
    INPUT_EXHAUSTED = "InputExhausted"


class RunClass(str, enum.Enum):
    FAST = "Fast"
    SLOW = "Slow"


@dataclass(frozen=True)
class RunInput:
    """Parameter values (ints, or tuples for arrays) plus the stream read
    by ``input()``."""
    params: Mapping = field(default_factory=dict)
    stream: tuple = ()

    def key(self) -> tuple:
        items = []
        for k in sorted(self.params):
            v = self.params[k]
            items.append((k, tuple(v) if isinstance(v, (list, tuple)) else v))
        return (tuple(items), tuple(self.stream))


@dataclass(frozen=True)
class Trace:
    points: tuple = ()  # of (point, ((var, value), ...))

    def at(self, point: str) -> list:
        return [dict(vals) for p, vals in self.points if p == point]

    def point_names(self) -> list:
        seen = []
        for p, _ in self.points:
            if p not in seen:
                seen.append(p)
        return seen

    def project(self, keep) -> "Trace":
        return Trace(tuple((p, tuple((n, v) for n, v in vals if keep(n)))
                           for p, vals in self.points))

    def dump(self) -> str:
        """One record per line: ``point TAB var=value TAB ...``."""
        lines = []
        for p, vals in self.points:
            lines.append("\t".join([p] + [f"{n}={v}" for n, v in vals]))
        return "\n".join(lines) + ("\n" if lines else "")


def parse_trace_dump(text: str) -> Trace:
    points = []
    for line in text.splitlines():
        if not line.strip():
            continue
        p, *rest = line.split("\t")
        vals = []
        for item in rest:
            n, v = item.split("=", 1)
            vals.append((n, int(v)))
        points.append((p, tuple(vals)))
    return Trace(tuple(points))


@dataclass(frozen=True)
class RunResult:
    status: Status
    outputs: Mapping
    steps: int
    trace: Trace
    error: str = ""

    @property
    def terminated(self) -> bool:
        return self.status in (Status.COMPLETED, Status.INPUT_EXHAUSTED)


@dataclass(frozen=True)
class Classification:
    run_class: RunClass
    functional_failure: bool = False

    @property
    def fast(self) -> bool:
        return self.run_class is RunClass.FAST


# -- instrumentation --------------------------------------------------------

def counters(program: A.Program) -> dict:
    """loop label -> counter variable name"""
    return {lab: A.counter_name(lab) for lab in A.loop_labels(program)}


def _incr(name):
    return A.Assign(0, name, A.BinOp("+", A.Var(name), A.Num(1)))


def _instr_block(stmts):
    out = []
    for s in stmts:
        if isinstance(s, A.While):
            s = replace(s, body=(_incr(A.counter_name(s.label)),) + _instr_block(s.body))
        elif isinstance(s, A.For):
            s = replace(s, body=(_incr(A.counter_name(s.label)),) + _instr_block(s.body))
        elif isinstance(s, A.If):
            s = replace(s, then=_instr_block(s.then), orelse=_instr_block(s.orelse))
        out.append(s)
    return tuple(out)


def instrument(program: A.Program) -> A.Program:
    """Add one iteration counter per loop: zeroed at program start and
    bumped as the first statement of every iteration."""
    labels = A.loop_labels(program)
    if not labels:
        return program
    inits = tuple(A.Assign(0, A.counter_name(lab), A.Num(0)) for lab in labels)
    return A.renumber(replace(program, body=inits + _instr_block(program.body)))


def is_instrumented(program: A.Program) -> bool:
    return any(A.is_counter_stmt(s) for s in A.walk(program.body))


# -- interpreter ------------------------------------------------------------

class _Break(Exception):
    pass


class _Stop(Exception):
    def __init__(self, status, message=""):
        self.status = status
        self.message = message


def _scope_tables(program: A.Program):
    """Static lists of scalar variables visible at exit and after each loop."""
    arrays = {p.name for p in program.params if p.is_array}
    scalars = [p.name for p in program.params if not p.is_array]
    after = {}

    def visit(stmts, visible):
        visible = list(visible)
        for s in stmts:
            if isinstance(s, A.Assign) and s.decl and s.target not in arrays:
                visible.append(s.target)
            elif isinstance(s, A.While):
                visit(s.body, visible)
                after[s.label] = tuple(sorted(set(visible)))
            elif isinstance(s, A.For):
                inner = list(visible)
                if s.init is not None and s.init.decl:
                    inner.append(s.init.target)
                visit(s.body, inner)
                after[s.label] = tuple(sorted(set(visible)))
            elif isinstance(s, A.If):
                visit(s.then, visible)
                visit(s.orelse, visible)
        return visible

    top = visit(program.body, scalars)
    exit_vars = tuple(sorted(set(top)))
    entry_vars = tuple(sorted(scalars))
    ctrs = tuple(sorted(counters(program).values()))
    return entry_vars, exit_vars, after, ctrs


class Interpreter:
    def __init__(self, program: A.Program, budget: int, record: bool = True):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.program = program
        self.budget = budget
        self.record = record
        self.entry_vars, self.exit_vars, self.after_loop, self.counter_vars = _scope_tables(program)
        self.instrumented = is_instrumented(program)

    # -- expressions
    def ev(self, e):
        t = type(e)
        if t is A.Var:
            return self.env[e.name]
        if t is A.Num:
            return e.value
        if t is A.BinOp:
            op = e.op
            if op == "&&":
                return self.ev(e.left) and self.ev(e.right)
            if op == "||":
                return self.ev(e.left) or self.ev(e.right)
            a = self.ev(e.left)
            b = self.ev(e.right)
            if op == "+":
                r = a + b
            elif op == "-":
                r = a - b
            elif op == "<=":
                return a <= b
            elif op == "<":
                return a < b
            elif op == "==":
                return a == b
            elif op == "!=":
                return a != b
            elif op == ">":
                return a > b
            elif op == ">=":
                return a >= b
            elif op == "*":
                r = a * b
            elif op == "/":
                if b == 0:
                    raise _Stop(Status.RUNTIME_ERROR, "division by zero")
                q = abs(a) // abs(b)
                r = q if (a >= 0) == (b >= 0) else -q
            else:
                raise _Stop(Status.RUNTIME_ERROR, f"unknown operator {op}")
            if r > INT_MAX or r < INT_MIN:
                raise _Stop(Status.RUNTIME_ERROR, "integer overflow")
            return r
        if t is A.Index:
            arr = self.env[e.name]
            i = self.ev(e.index)
            if i < 0 or i >= len(arr):
                raise _Stop(Status.RUNTIME_ERROR, f"index {i} out of bounds for {e.name}[{len(arr)}]")
            return arr[i]
        if t is A.UnOp:
            v = self.ev(e.operand)
            if e.op == "!":
                return not v
            if -v > INT_MAX:
                raise _Stop(Status.RUNTIME_ERROR, "integer overflow")
            return -v
        if t is A.Input:
            if self.pos >= len(self.stream):
                raise _Stop(Status.INPUT_EXHAUSTED)
            v = self.stream[self.pos]
            self.pos += 1
            return v
        raise TypeError(f"not an expression: {e!r}")

    # -- statements
    def tick(self):
        if self.steps >= self.budget:
            raise _Stop(Status.BUDGET_EXHAUSTED)
        self.steps += 1

    def assign(self, s):
        if s.value is not None and s.target.startswith(A.COUNTER_PREFIX) and s.index is None:
            self.env[s.target] = self.ev(s.value)
            return
        self.tick()
        v = 0 if s.value is None else self.ev(s.value)
        if s.index is None:
            self.env[s.target] = v
        else:
            arr = self.env[s.target]
            i = self.ev(s.index)
            if i < 0 or i >= len(arr):
                raise _Stop(Status.RUNTIME_ERROR, f"index {i} out of bounds for {s.target}[{len(arr)}]")
            arr[i] = v

    def block(self, stmts):
        for s in stmts:
            t = type(s)
            if t is A.Assign:
                self.assign(s)
            elif t is A.If:
                self.tick()
                if self.ev(s.cond):
                    self.block(s.then)
                elif s.orelse:
                    self.block(s.orelse)
            elif t is A.While:
                try:
                    while True:
                        self.tick()
                        if not self.ev(s.cond):
                            break
                        self.block(s.body)
                except _Break:
                    pass
                self.sample(loop_exit_point(s.label), self.after_loop[s.label])
            elif t is A.For:
                if s.init is not None:
                    self.assign(s.init)
                try:
                    while True:
                        self.tick()
                        if not self.ev(s.cond):
                            break
                        self.block(s.body)
                        if s.update is not None:
                            self.assign(s.update)
                except _Break:
                    pass
                self.sample(loop_exit_point(s.label), self.after_loop[s.label])
            elif t is A.Break:
                self.tick()
                raise _Break()
            elif t is A.Read:
                self.tick()
                if self.pos >= len(self.stream):
                    raise _Stop(Status.INPUT_EXHAUSTED)
                self.env[s.target] = self.stream[self.pos]
                self.pos += 1
            elif t is A.Skip:
                self.tick()
            else:
                raise TypeError(f"not a statement: {s!r}")

    def sample(self, point, names):
        if not self.record:
            return
        env = self.env
        vals = [(n, env[n]) for n in names if n in env]
        vals.extend((n, env[n]) for n in self.counter_vars if n in env)
        vals.sort()
        self.points.append((point, tuple(vals)))

    def bind(self, inp: RunInput):
        env = {}
        for p in self.program.params:
            if p.is_array:
                continue
            if p.name not in inp.params:
                raise ValueError(f"missing value for parameter {p.name!r}")
            v = inp.params[p.name]
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"parameter {p.name!r} must be an int")
            env[p.name] = v
        for p in self.program.params:
            if not p.is_array:
                continue
            self.env = env
            n = self.ev(p.length)
            vals = list(inp.params.get(p.name, ()))
            if n < 0 or len(vals) > n:
                raise ValueError(f"array {p.name!r} has {len(vals)} values but length {n}")
            env[p.name] = vals + [0] * (n - len(vals))
        return env

    def run(self, inp: RunInput) -> RunResult:
        self.steps = 0
        self.points = []
        self.stream = tuple(inp.stream)
        self.pos = 0
        self.env = self.bind(inp)
        self.sample(ENTRY, self.entry_vars)
        status, message = Status.COMPLETED, ""
        try:
            self.block(self.program.body)
        except _Stop as stop:
            status, message = stop.status, stop.message
        except _Break:  # unreachable for checked programs
            status, message = Status.RUNTIME_ERROR, "break outside loop"
        except RecursionError:
            status, message = Status.RUNTIME_ERROR, "nesting too deep"
        if status in (Status.COMPLETED, Status.INPUT_EXHAUSTED):
            self.sample(EXIT, self.exit_vars)
        outputs = {o: self.env.get(o) for o in self.program.outputs}
        return RunResult(status, outputs, self.steps, Trace(tuple(self.points)), message)


def run(program: A.Program, inp: RunInput, budget: int, record: bool = True) -> RunResult:
    """Execute ``program`` on ``inp`` for at most ``budget`` steps."""
    return Interpreter(program, budget, record).run(inp)


def classify(result: RunResult, expected: Mapping, threshold: int) -> Classification:
    """Fast iff the run terminated with the expected outputs within
    ``threshold`` steps.  Wrong outputs are Slow and flagged."""
    if result.status is Status.RUNTIME_ERROR:
        return Classification(RunClass.SLOW, True)
    if result.status is Status.BUDGET_EXHAUSTED:
        return Classification(RunClass.SLOW, False)
    correct = all(result.outputs.get(k) == v for k, v in expected.items())
    if not correct:
        return Classification(RunClass.SLOW, True)
    return Classification(RunClass.FAST if result.steps <= threshold else RunClass.SLOW, False)


def _run_job(args):
    program, inp, budget, record = args
    return run(program, inp, budget, record)


def run_all(program: A.Program, inputs, budget: int, workers: int = 1, record: bool = True) -> list:
    """Run ``program`` on each input; results come back in input order
    whatever the worker count."""
    inputs = list(inputs)
    if workers <= 1 or len(inputs) < 2:
        interp = Interpreter(program, budget, record)
        return [interp.run(i) for i in inputs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, [(program, i, budget, record) for i in inputs], chunksize=4))
