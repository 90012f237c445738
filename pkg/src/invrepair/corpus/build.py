"""Regenerate the corpus suites, patches and configs.

    python3 -m invrepair.corpus.build [--check]

Expected outputs come from the original program, and every case is also
run on the developer patch: the outputs must agree.  A case's threshold
is three times the patched run's step count.  Each case declares whether
it should be Fast or Slow on the original, and the build fails if the
measured class disagrees.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from ..execution import RunInput, Status, classify, instrument, run
from ..lang import ast as A
from ..lang import parse, pretty_print
from ..lang.printer import expr_str
from ..repair.mutation import Mutation, apply_all
from ..harness.suite import TestCase, case_to_dict, dump_json

ROOT = Path(__file__).parent
THRESHOLD_FACTOR = 3
BUILD_BUDGET = 50_000_000

A_, B_, C_ = 1, 2, 3  # the strsearch alphabet


@dataclass(frozen=True)
class Draft:
    id: str
    input: RunInput
    slow: bool


@dataclass(frozen=True)
class Entry:
    name: str
    budget: int
    generator: dict
    developer: tuple
    drafts: tuple
    search: dict
    analysis: dict


def strsearch_input(source, target, stream) -> RunInput:
    return RunInput({"sourceLen": len(source), "targetLen": len(target),
                     "cap": len(source) + len(stream),
                     "source": tuple(source), "target": tuple(target)}, tuple(stream))


def strsearch_entry() -> Entry:
    s = strsearch_input
    drafts = (
        Draft("found_middle", s([A_, B_, C_], [B_, C_], [A_]), False),
        Draft("found_after_first", s([C_, A_, B_], [A_, B_], [C_]), False),
        Draft("found_at_start", s([B_], [B_], [C_]), False),
        Draft("found_three", s([A_, C_, A_, B_, C_], [A_, B_, C_], [A_]), False),
        Draft("two_appends", s([A_, C_], [A_, B_], [C_, A_, B_, C_]), False),
        Draft("long_found", s([A_, C_] * 2500 + [A_, B_] + [A_, C_] * 2499, [A_, B_], [C_]), False),
        Draft("append_20", s([], [B_], [A_] * 20 + [B_, C_]), True),
        Draft("append_30", s([], [B_], [A_] * 30 + [B_, C_]), True),
        Draft("append_one_seed", s([A_], [B_], [A_] * 25 + [B_, C_]), True),
        Draft("append_pair", s([C_], [A_, B_], [C_] * 25 + [A_, B_, C_]), True),
        Draft("append_triple", s([A_, C_], [A_, B_, C_], [C_] * 17 + [A_, B_, C_, C_]), True),
        Draft("long_append", s([A_, C_] * 5000, [A_, B_], [C_] * 5 + [A_, B_, C_]), True),
    )
    gen = {"seed": 7,
           "arrays": {"source": {"length": [0, 8], "values": [1, 3]},
                      "target": {"length": [1, 3], "values": [1, 3]}},
           "stream": {"length": [0, 6], "values": [1, 3]},
           "derived": {"sourceLen": "len(source)", "targetLen": "len(target)",
                       "cap": "len(source) + len(stream)"}}
    return Entry("strsearch", 5_000_000, gen, (Mutation("move", 6, 2, "before"),), drafts,
                 {"seed": 1, "population": 40, "generations": 50}, {"falsification_budget": 200})


def toy_entry() -> Entry:
    def t(n, rounds):
        return RunInput({"n": n, "rounds": rounds})
    drafts = (
        Draft("one_round", t(5, 1), False),
        Draft("no_rounds", t(7, 0), False),
        Draft("empty_count", t(0, 6), False),
        Draft("two_small", t(1, 2), False),
        Draft("square_10", t(10, 10), True),
        Draft("wide_8x12", t(12, 8), True),
        Draft("deep_6x15", t(15, 6), True),
    )
    gen = {"seed": 3, "scalars": {"n": [-5, 20], "rounds": [-2, 12]}}
    return Entry("toy_count", 100_000, gen, (Mutation("delete", 5),), drafts,
                 {"seed": 1, "population": 20, "generations": 30}, {"falsification_budget": 400})


def accum_entry() -> Entry:
    def t(a):
        return RunInput({"n": len(a), "a": tuple(a)})
    drafts = (
        Draft("single", t([4]), False),
        Draft("empty", t([]), False),
        Draft("pair", t([-1, 3]), False),
        Draft("all_negative", t([-2, -3]), False),
        Draft("mixed_20", t([3, -1, 4, -1, 5, -9, 2, 6, -5, 3, 5, -8, 9, -7, 9, -3, 2, -3, 8, -4]), True),
        Draft("rising_24", t(list(range(1, 25))), True),
        Draft("late_peak", t([-1] * 28 + [20, 1]), True),
    )
    gen = {"seed": 5, "arrays": {"a": {"length": [0, 8], "values": [-5, 5]}},
           "derived": {"n": "len(a)"}}
    return Entry("accum_loop", 100_000, gen, (Mutation("delete", 6), Mutation("delete", 6)), drafts,
                 {"seed": 1, "population": 20, "generations": 30}, {"falsification_budget": 200})


ENTRIES = (strsearch_entry, toy_entry, accum_entry)


def lookup_table(program: A.Program, cases) -> str:
    """A program that answers the suite from a table and nothing else."""
    decls = "\n".join(f"  int {o} := 0;" for o in program.outputs)
    arms = []
    for c in cases:
        conds = []
        for p in program.params:
            v = c.input.params[p.name]
            if p.is_array:
                if v:
                    conds.append(f"{p.name}[0] == {v[0]}")
            else:
                conds.append(f"{p.name} == {v}")
        body = " ".join(f"{o} := {c.expected[o]};" for o in program.outputs)
        arms.append((" && ".join(conds) or "1 == 1", body))
    keys = [a for a, _ in arms]
    if len(set(keys)) != len(keys):
        raise SystemExit(f"{program.name}: lookup keys collide")
    params = ", ".join(f"int {p.name}[{expr_str(p.length)}]" if p.is_array else f"int {p.name}"
                       for p in program.params)
    lines = [f"proc {program.name}({params}) returns ({', '.join(program.outputs)}) {{", decls]
    for k, (cond, body) in enumerate(arms):
        lines.append(f"  {'if' if k == 0 else '} else if'} ({cond}) {{")
        lines.append(f"    {body}")
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _make_case(entry, original, fixed, dr) -> TestCase:
    rb = run(instrument(original), dr.input, BUILD_BUDGET)
    rf = run(instrument(fixed), dr.input, BUILD_BUDGET)
    if rb.status is not Status.COMPLETED or rf.status is not Status.COMPLETED:
        raise ValueError(f"runs must complete ({rb.status}, {rf.status})")
    if rb.outputs != rf.outputs:
        raise ValueError(f"developer patch changes outputs "
                         f"{rb.outputs} -> {rf.outputs}")
    if rb.steps >= entry.budget:
        raise ValueError(f"{rb.steps} steps exceed the suite budget")
    case = TestCase(dr.id, dr.input, dict(rb.outputs), THRESHOLD_FACTOR * rf.steps)
    got_slow = not classify(rb, case.expected, case.threshold).fast
    if got_slow != dr.slow:
        raise ValueError(f"expected {'Slow' if dr.slow else 'Fast'}, "
                         f"original takes {rb.steps} steps vs threshold {case.threshold}")
    return case


def build(entry: Entry) -> dict:
    """Return {filename: text} for one corpus program."""
    d = ROOT / entry.name
    src = (d / f"{entry.name}.imp").read_text()
    original = parse(src, strict=True)
    fixed = apply_all(original, entry.developer)
    cases, problems = [], []
    for dr in entry.drafts:
        try:
            cases.append(_make_case(entry, original, fixed, dr))
        except ValueError as e:
            problems.append(f"{entry.name}/{dr.id}: {e}")
    if problems:
        raise SystemExit("\n".join(problems))
    suite = {"name": entry.name, "program": f"{entry.name}.imp", "budget": entry.budget,
             "seed": entry.search["seed"], "generator": entry.generator,
             "cases": [case_to_dict(c, original) for c in cases]}
    developer = {"mutations": [m.to_dict() for m in entry.developer],
                 "description": "developer fix"}
    config = {"suite": "suite.json", "search": entry.search, "analysis": entry.analysis,
              "developer_patch": "developer.json", "overfit_patch": "overfit.json"}
    return {
        "suite.json": dump_json(suite),
        "developer.json": dump_json(developer),
        "developer.imp": pretty_print(fixed),
        "overfit.imp": lookup_table(original, cases),
        "overfit.json": dump_json({"patched_source": "overfit.imp",
                                   "description": "answers the suite from a lookup table"}),
        "config.json": dump_json(config),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="fail if any file would change")
    args = ap.parse_args(argv)
    stale = []
    for make in ENTRIES:
        entry = make()
        for name, text in build(entry).items():
            path = ROOT / entry.name / name
            if args.check:
                if not path.exists() or path.read_text() != text:
                    stale.append(str(path))
            else:
                path.write_text(text)
    if stale:
        print("stale corpus files:\n  " + "\n  ".join(stale), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
