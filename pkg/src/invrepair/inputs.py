"""Input generation for falsification runs.

A generator is described by a small dict (usually read from a suite
file)::

    {"seed": 3,
     "scalars": {"n": [0, 20]},
     "arrays": {"source": {"length": [0, 8], "values": [1, 3]}},
     "stream": {"length": [0, 6], "values": [1, 3]},
     "derived": {"cap": "len(source) + len(stream)"}}

Programs with only scalar inputs and a domain no larger than the budget
are enumerated exhaustively; everything else is sampled with a
per-index seeded RNG so generated input ``i`` never depends on how many
inputs were requested or in which order they are produced.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field

from .execution import RunInput
from .lang import ast as A

DEFAULT_SCALAR_RANGE = (-5, 20)

_TERM = re.compile(r"\s*([+-])?\s*(?:len\((\w+)\)|(\d+)|(\w+))\s*")


def eval_derived(expr: str, values: dict, stream: tuple) -> int:
    """Evaluate ``len(a) + n - 2`` style expressions."""
    pos, total, first = 0, 0, True
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"bad derived expression {expr!r}")
        sign, lname, num, name = m.groups()
        if sign is None and not first:
            raise ValueError(f"bad derived expression {expr!r}")
        if lname is not None:
            v = len(stream) if lname == "stream" else len(values[lname])
        elif num is not None:
            v = int(num)
        else:
            v = values[name]
        total += -v if sign == "-" else v
        pos, first = m.end(), False
    return total


@dataclass(frozen=True)
class InputGenerator:
    program_params: tuple
    seed: int = 0
    scalars: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)
    stream: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)

    @classmethod
    def from_spec(cls, program: A.Program, spec: dict | None) -> "InputGenerator":
        spec = dict(spec or {})
        scalars = {k: tuple(v) for k, v in spec.get("scalars", {}).items()}
        derived = dict(spec.get("derived", {}))
        arrays = {k: dict(v) for k, v in spec.get("arrays", {}).items()}
        for p in program.params:
            if p.is_array:
                if p.name not in arrays:
                    raise ValueError(f"generator spec has no entry for array {p.name!r}")
            elif p.name not in scalars and p.name not in derived:
                scalars[p.name] = DEFAULT_SCALAR_RANGE
        unknown = set(scalars) | set(derived) | set(arrays)
        unknown -= set(program.param_names)
        if unknown:
            raise ValueError(f"generator spec names unknown parameters {sorted(unknown)}")
        return cls(tuple(p.name for p in program.params), int(spec.get("seed", 0)),
                   scalars, arrays, dict(spec.get("stream", {})), derived)

    def exhaustive_size(self):
        if self.arrays or self.stream.get("length", (0, 0))[1] > 0:
            return None
        size = 1
        for lo, hi in self.scalars.values():
            size *= hi - lo + 1
        return size

    def _finish(self, values: dict, stream: tuple) -> RunInput:
        for name in sorted(self.derived):
            values[name] = eval_derived(self.derived[name], values, stream)
        return RunInput({k: values[k] for k in self.program_params}, stream)

    def sample(self, index: int) -> RunInput:
        rng = random.Random(f"{self.seed}:{index}")
        values = {}
        for name in sorted(self.scalars):
            lo, hi = self.scalars[name]
            values[name] = rng.randint(lo, hi)
        for name in sorted(self.arrays):
            spec = self.arrays[name]
            n = rng.randint(*spec["length"])
            lo, hi = spec.get("values", (0, 9))
            values[name] = tuple(rng.randint(lo, hi) for _ in range(n))
        stream = ()
        if self.stream:
            n = rng.randint(*self.stream["length"])
            lo, hi = self.stream.get("values", (0, 9))
            stream = tuple(rng.randint(lo, hi) for _ in range(n))
        return self._finish(values, stream)

    def generate(self, budget: int) -> list:
        """The first ``budget`` inputs, in canonical order."""
        if budget <= 0:
            return []
        size = self.exhaustive_size()
        if size is not None and size <= budget:
            names = sorted(self.scalars)
            ranges = [range(self.scalars[n][0], self.scalars[n][1] + 1) for n in names]
            return [self._finish(dict(zip(names, combo)), ())
                    for combo in itertools.product(*ranges)]
        return [self.sample(i) for i in range(budget)]
