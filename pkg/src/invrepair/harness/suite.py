"""Test-suite files.

A suite is a JSON document::

    {"name": "toy_count",
     "program": "toy_count.imp",          # relative to the suite file
     "budget": 100000,                    # global step budget per run
     "seed": 1,
     "generator": {...},                  # see invrepair.inputs
     "cases": [{"id": "t1",
                "input": {"params": {"n": 3, "a": [1, 2]}, "stream": []},
                "expected": {"x": 3},
                "threshold": 40}]}

Array values and the stream may be plain lists or run-length encoded as
``{"runs": [[value, count], ...]}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..execution import RunInput
from ..lang import parse


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DuplicateTestId(ValueError):
    pass


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class
    id: str
    input: RunInput
    expected: dict
    threshold: int


@dataclass(frozen=True)
class TestSuite:
    __test__ = False
    name: str
    program: Path
    cases: tuple
    budget: int
    seed: int = 1
    generator: dict = field(default_factory=dict)

    def case(self, case_id: str) -> TestCase:
        for c in self.cases:
            if c.id == case_id:
                return c
        raise KeyError(case_id)

    def load_program(self):
        return parse(self.program.read_text(), strict=True)


def decode_values(raw, path: str) -> tuple:
    if isinstance(raw, list):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
            raise SchemaError(path, "expected a list of integers")
        return tuple(raw)
    if isinstance(raw, dict) and set(raw) == {"runs"} and isinstance(raw["runs"], list):
        out = []
        for k, run in enumerate(raw["runs"]):
            ok = (isinstance(run, list) and len(run) == 2
                  and all(isinstance(v, int) and not isinstance(v, bool) for v in run) and run[1] >= 0)
            if not ok:
                raise SchemaError(f"{path}.runs[{k}]", "expected [value, count]")
            out.extend([run[0]] * run[1])
        return tuple(out)
    raise SchemaError(path, "expected a list of integers or {\"runs\": [[value, count], ...]}")


def encode_values(values) -> object:
    """Run-length encode long sequences; short ones stay plain lists."""
    values = list(values)
    if len(values) <= 16:
        return values
    runs = []
    for v in values:
        if runs and runs[-1][0] == v:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    return {"runs": runs} if len(runs) * 2 < len(values) else values


def _require(d, key, kind, path):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"{path}.{key}" if path else key, "missing")
    v = d[key]
    if kind is int and (not isinstance(v, int) or isinstance(v, bool)):
        raise SchemaError(f"{path}.{key}" if path else key, "expected an integer")
    if kind is not int and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}" if path else key, f"expected {kind.__name__}")
    return v


def parse_case(raw, k: int, program) -> TestCase:
    path = f"cases[{k}]"
    cid = _require(raw, "id", str, path)
    inp = _require(raw, "input", dict, path)
    params = _require(inp, "params", dict, f"{path}.input")
    values = {}
    for p in program.params:
        ppath = f"{path}.input.params.{p.name}"
        if p.name not in params:
            raise SchemaError(ppath, "missing")
        if p.is_array:
            values[p.name] = decode_values(params[p.name], ppath)
        else:
            v = params[p.name]
            if not isinstance(v, int) or isinstance(v, bool):
                raise SchemaError(ppath, "expected an integer")
            values[p.name] = v
    extra = sorted(set(params) - set(program.param_names))
    if extra:
        raise SchemaError(f"{path}.input.params.{extra[0]}", "not a program parameter")
    stream = decode_values(inp.get("stream", []), f"{path}.input.stream")
    expected = _require(raw, "expected", dict, path)
    for out in program.outputs:
        if out not in expected:
            raise SchemaError(f"{path}.expected.{out}", "missing declared output")
    threshold = _require(raw, "threshold", int, path)
    if threshold < 1:
        raise SchemaError(f"{path}.threshold", "must be >= 1")
    return TestCase(cid, RunInput(values, stream), dict(expected), threshold)


def suite_from_dict(doc: dict, base: Path) -> TestSuite:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    program_path = base / _require(doc, "program", str, "")
    budget = _require(doc, "budget", int, "")
    if budget < 1:
        raise SchemaError("budget", "must be >= 1")
    cases_raw = _require(doc, "cases", list, "")
    if not cases_raw:
        raise SchemaError("cases", "must contain at least one case")
    program = parse(program_path.read_text(), strict=True)
    cases = [parse_case(raw, k, program) for k, raw in enumerate(cases_raw)]
    seen = set()
    for c in cases:
        if c.id in seen:
            raise DuplicateTestId(c.id)
        seen.add(c.id)
    gen = doc.get("generator", {})
    if not isinstance(gen, dict):
        raise SchemaError("generator", "expected an object")
    return TestSuite(doc.get("name", program_path.stem), program_path, tuple(cases), budget,
                     int(doc.get("seed", 1)), gen)


def load_suite(path) -> TestSuite:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"not valid JSON: {e}") from None
    return suite_from_dict(doc, path.parent)


def case_to_dict(c: TestCase, program) -> dict:
    params = {}
    for p in program.params:
        v = c.input.params[p.name]
        params[p.name] = encode_values(v) if p.is_array else v
    return {"id": c.id,
            "input": {"params": params, "stream": encode_values(c.input.stream)},
            "expected": dict(c.expected), "threshold": c.threshold}


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
