"""Genetic patch search over mutation lists.

Candidates are lists of mutations applied in order to the original
program.  Fitness is ``(tests passed, -total steps over passing tests)``
where every test runs with its own threshold as the step budget, so a
candidate that would run long is cut off at exactly the point it stops
being useful.
"""
from __future__ import annotations

import difflib
import logging
import random
from dataclasses import dataclass, field

from ..execution import RunClass, classify, run
from ..lang import ast as A
from ..lang.printer import pretty_print
from .localize import FLOOR, localize
from .mutation import (KINDS, IllFormedResult, InvalidOperand, Mutation, anchors,
                       apply_all)

log = logging.getLogger(__name__)


class RepairFailed(Exception):
    """No plausible patch was found; ``diagnostic`` says why."""

    def __init__(self, diagnostic: str, stats: dict | None = None):
        super().__init__(diagnostic)
        self.diagnostic = diagnostic
        self.stats = dict(stats or {})


class SearchConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 1
    population: int = 40
    generations: int = 50
    mutation_rate: float = 1.0
    crossover_rate: float = 0.5
    tournament: int = 3
    max_length: int = 4
    floor: float = FLOOR
    workers: int = 1
    minimize: bool = True

    def __post_init__(self):
        if self.population < 1:
            raise SearchConfigError("population must be >= 1")
        if self.generations < 0:
            raise SearchConfigError("generations must be >= 0")
        if not 0 <= self.mutation_rate <= 1 or not 0 <= self.crossover_rate <= 1:
            raise SearchConfigError("rates must lie in [0, 1]")
        if self.tournament < 1 or self.max_length < 1:
            raise SearchConfigError("tournament and max_length must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        return cls(**known)


@dataclass(frozen=True)
class Fitness:
    passed: int
    steps: int
    total: int

    @property
    def plausible(self) -> bool:
        return self.passed == self.total

    def key(self):
        return (self.passed, -self.steps)

    def to_dict(self) -> dict:
        return {"tests_passed": self.passed, "total_steps": self.steps, "tests": self.total}


@dataclass(frozen=True)
class Patch:
    mutations: tuple
    program: A.Program
    fitness: Fitness
    stats: dict = field(default_factory=dict, compare=False)

    def diff(self, original: A.Program) -> str:
        a = pretty_print(original).splitlines(keepends=True)
        b = pretty_print(self.program).splitlines(keepends=True)
        return "".join(difflib.unified_diff(a, b, "original", "patched"))

    def to_dict(self, original: A.Program) -> dict:
        return {
            "mutations": [m.to_dict() for m in self.mutations],
            "diff": self.diff(original),
            "fitness": self.fitness.to_dict(),
        }


def evaluate(program: A.Program, cases) -> Fitness:
    passed = steps = 0
    for case in cases:
        r = run(program, case.input, case.threshold, record=False)
        if classify(r, case.expected, case.threshold).run_class is RunClass.FAST:
            passed += 1
            steps += r.steps
    return Fitness(passed, steps, len(cases))


def _evaluate_job(args):
    text, cases = args
    from ..lang.parser import parse
    return evaluate(parse(text), cases)


def contradictory(cases) -> list:
    """Pairs of test ids with identical inputs but different expectations."""
    seen = {}
    out = []
    for c in cases:
        key = c.input.key()
        if key in seen and seen[key].expected != c.expected:
            out.append((seen[key].id, c.id))
        seen.setdefault(key, c)
    return out


class _Search:
    def __init__(self, program, cases, spec, cfg: SearchConfig):
        self.program = A.renumber(program)
        self.cases = list(cases)
        self.spec = spec
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.fitness_cache = {}  # program text -> Fitness
        self.weights_cache = {}
        self.evaluated = 0

    # -- candidate construction
    def build(self, muts):
        try:
            return apply_all(self.program, muts)
        except (InvalidOperand, IllFormedResult):
            return None

    def _weights(self, prog):
        text = pretty_print(prog)
        w = self.weights_cache.get(text)
        if w is None:
            ranking = localize(self.spec, prog)
            weights = ranking.weights(self.cfg.floor)
            sids = sorted(weights)
            w = self.weights_cache[text] = (sids, [weights[s] for s in sids], anchors(prog))
        return w

    def random_mutation(self, prog) -> Mutation:
        sids, weights, places = self._weights(prog)
        rng = self.rng
        kind = rng.choice(KINDS)
        target = rng.choices(sids, weights)[0]
        if kind == "delete":
            return Mutation("delete", target)
        if kind == "swap":
            return Mutation("swap", target, rng.choices(sids, weights)[0])
        pw = [weights[sids.index(s)] for s in places]
        anchor = rng.choices(places, pw)[0]
        return Mutation(kind, target, anchor, rng.choice(("before", "after")))

    def extend(self, muts):
        base = self.build(muts) if muts else self.program
        if base is None:
            base = self.program
        return list(muts) + [self.random_mutation(base)]

    # -- fitness
    def score_all(self, population):
        programs = [self.build(m) for m in population]
        texts = [pretty_print(p) if p is not None else None for p in programs]
        todo = sorted({t for t in texts if t is not None and t not in self.fitness_cache})
        self.evaluated += len(todo)
        if todo:
            if self.cfg.workers > 1 and len(todo) > 1:
                from concurrent.futures import ProcessPoolExecutor
                with ProcessPoolExecutor(max_workers=self.cfg.workers) as pool:
                    results = list(pool.map(_evaluate_job, [(t, self.cases) for t in todo]))
            else:
                results = [evaluate(p, self.cases) for p in _unique_programs(todo, texts, programs)]
            self.fitness_cache.update(zip(todo, results))
        return [(p, None if t is None else self.fitness_cache[t]) for p, t in zip(programs, texts)]

    def plausible(self, muts) -> bool:
        p = self.build(muts) if muts else self.program
        if p is None:
            return False
        text = pretty_print(p)
        fit = self.fitness_cache.get(text)
        if fit is None:
            fit = self.fitness_cache[text] = evaluate(p, self.cases)
            self.evaluated += 1
        return fit.plausible

    def minimize(self, muts):
        """Greedily drop mutations that are not needed for plausibility."""
        muts = list(muts)
        i = 0
        while i < len(muts) and len(muts) > 1:
            trial = muts[:i] + muts[i + 1:]
            if self.plausible(trial):
                muts = trial
            else:
                i += 1
        return muts

    # -- genetic operators
    def select(self, scored):
        pool = [i for i, (_, f) in enumerate(scored) if f is not None]
        best = None
        for _ in range(self.cfg.tournament):
            i = self.rng.choice(pool)
            if best is None or scored[i][1].key() > scored[best][1].key():
                best = i
        return best

    def offspring(self, population, scored):
        viable = any(f is not None for _, f in scored)
        out = []
        for _ in range(self.cfg.population):
            if not viable:
                out.append(self.extend([]))
                continue
            a = population[self.select(scored)]
            child = list(a)
            if self.rng.random() < self.cfg.crossover_rate:
                b = population[self.select(scored)]
                cut = self.rng.randint(0, min(len(a), len(b)))
                child = list(a[:cut]) + list(b[cut:])
            if not child or self.rng.random() < self.cfg.mutation_rate:
                child = self.extend(child)
            out.append(child[-self.cfg.max_length:])
        return out

    def canonical(self, muts):
        """Replace ``muts`` by a single mutation with the same effect,
        when one exists (the first in enumeration order wins)."""
        if len(muts) <= 1:
            return muts
        goal = pretty_print(self.build(muts))
        for m in single_mutations(self.program):
            try:
                out = apply_all(self.program, [m])
            except (InvalidOperand, IllFormedResult):
                continue
            if pretty_print(out) == goal:
                return [m]
        return muts

    def result(self, muts, stats):
        prog = self.build(muts) if muts else self.program
        fit = self.fitness_cache[pretty_print(prog)]
        return Patch(tuple(muts), prog, fit, stats)

    def run(self) -> Patch:
        if not self.cases:
            raise SearchConfigError("test suite is empty")
        clash = contradictory(self.cases)
        if clash:
            a, b = clash[0]
            raise RepairFailed(f"tests {a} and {b} share inputs but expect different outputs")
        if self.plausible([]):
            return self.result([], {"generations": 0, "evaluated": self.evaluated})
        base = self.fitness_cache[pretty_print(self.program)]
        if base.passed == 0:
            raise SearchConfigError("no test is Fast on the original program")
        population = [self.extend([]) for _ in range(self.cfg.population)]
        for gen in range(self.cfg.generations):
            scored = self.score_all(population)
            best = max((f.key() for _, f in scored if f is not None), default=None)
            log.info("generation %d: best fitness %s, %d programs evaluated", gen, best, self.evaluated)
            for muts, (_, fit) in zip(population, scored):
                if fit is not None and fit.plausible:
                    found = self.canonical(self.minimize(muts)) if self.cfg.minimize else muts
                    return self.result(found, {"generations": gen + 1, "evaluated": self.evaluated})
            population = self.offspring(population, scored)
        raise RepairFailed(f"no plausible patch after {self.cfg.generations} generations",
                           {"generations": self.cfg.generations, "evaluated": self.evaluated})


def single_mutations(program: A.Program):
    """Every mutation of ``program`` in a fixed order: deletes, moves,
    swaps, then inserts."""
    sids = A.stmt_ids(program)
    places = anchors(program)
    for t in sids:
        yield Mutation("delete", t)
    for t in sids:
        for a in places:
            for w in ("before", "after"):
                yield Mutation("move", t, a, w)
    for i, t in enumerate(sids):
        for a in sids[i + 1:]:
            yield Mutation("swap", t, a)
    for t in sids:
        for a in places:
            for w in ("before", "after"):
                yield Mutation("insert", t, a, w)


def _unique_programs(todo, texts, programs):
    first = {}
    for t, p in zip(texts, programs):
        if t is not None and t not in first:
            first[t] = p
    return [first[t] for t in todo]


def search(program: A.Program, cases, spec, cfg: SearchConfig) -> Patch:
    """Return the first plausible patch (after greedy minimization).

    Raises RepairFailed when the generations run out or the suite is
    unsatisfiable, and SearchConfigError when the suite cannot drive a
    repair at all (no Fast test on the original).
    """
    return _Search(program, cases, spec, cfg).run()
