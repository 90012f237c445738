"""Command-line entry point: ``invrepair {infer,trace,repair,validate,bench}``.

Exit codes: 0 success / valid patch, 1 repair failure or invalid patch,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from ..execution import RunInput, instrument, run
from ..invariants import Provenance, build_spec, format_records, infer
from ..lang import ProgramSyntaxError, pretty_print
from ..lang.parser import parse
from ..repair import (IllFormedResult, InvalidOperand, RepairFailed, SearchConfigError,
                      localize, search)
from ..validate import derive_spec, pipeline, run_suite
from ..validate.checks import counter_bounds
from ..validate.pipeline import exit_counters
from .config import ConfigError, RunConfig, load_config, load_patch
from .output import plot_bounds, plot_steps, write_json, write_tsv
from .suite import DuplicateTestId, SchemaError

log = logging.getLogger("invrepair")

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
CORPUS_NAMES = ("strsearch", "accum_loop", "toy_count")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def resolve_config(value: str) -> Path:
    """A config path, or the name of a bundled corpus program."""
    p = Path(value)
    if not p.exists() and value in CORPUS_NAMES:
        return CORPUS / value / "config.json"
    return p


def _config(args) -> RunConfig:
    if not args.config:
        raise UsageError("--config is required")
    cfg = load_config(resolve_config(args.config))
    return cfg.with_overrides(args.seed, args.workers, args.falsification_budget)


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _program(cfg: RunConfig, args):
    if getattr(args, "program", None):
        return parse(Path(args.program).read_text(), strict=True)
    return cfg.suite.load_program()


def steps_rows(suite, orig_runs, patched_tests) -> list:
    patched = {t["id"]: t for t in patched_tests}
    rows = []
    for case, r, c in zip(suite.cases, orig_runs.results, orig_runs.classes):
        p = patched.get(case.id, {})
        rows.append({"test": case.id, "threshold": case.threshold,
                     "original_steps": r.steps, "original_class": c.run_class.value,
                     "patched_steps": p.get("steps"), "patched_class": p.get("class")})
    return rows


STEP_FIELDS = ("test", "threshold", "original_steps", "original_class", "patched_steps", "patched_class")
BOUND_FIELDS = ("counter", "original", "patched")


# -- infer --------------------------------------------------------------------

def cmd_infer(args) -> int:
    cfg = _config(args)
    program = _program(cfg, args)
    if args.patch:
        program, _ = load_patch(args.patch, program)
    prog = instrument(program)
    runs = run_suite(prog, cfg.suite, cfg.analysis.workers)
    everything = infer(runs.traces(), Provenance.ALL_RUNS)
    sections = [("all", everything)]
    fast, slow = runs.traces(True), runs.traces(False)
    if fast:
        sections.append(("passing", infer(fast, Provenance.FROM_PASSING)))
    if slow:
        sections.append(("failing", infer(slow, Provenance.FROM_FAILING)))
    if fast and slow:
        spec = build_spec(sections[1][1], sections[2][1], prog, cfg.analysis.min_support)
        sections += [("violated", spec.violated)]
    out = _out(args)
    (out / "invariants.tsv").write_text(format_records(sections))
    bounds = counter_bounds(exit_counters(everything))
    write_tsv(out / "bounds.tsv", [{"counter": k, "bound": v} for k, v in sorted(bounds.items())],
              ("counter", "bound"))
    for k, v in sorted(bounds.items()):
        print(f"{k}\t{v}")
    print(f"wrote {out / 'invariants.tsv'} ({sum(len(s) for _, s in sections)} records)")
    return EXIT_OK


# -- trace --------------------------------------------------------------------

def _parse_assignments(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = tuple(int(x) for x in v.split(",") if x) if "," in v or v == "" else int(v)
        except ValueError:
            raise UsageError(f"bad integer in {item!r}") from None
    return out


def cmd_trace(args) -> int:
    budget = args.budget
    if args.param is not None or not args.config:
        if not args.program:
            raise UsageError("trace needs --config or --program")
        program = instrument(parse(Path(args.program).read_text(), strict=True))
        stream = tuple(int(x) for x in args.stream.split(",") if x) if args.stream else ()
        try:
            r = run(program, RunInput(_parse_assignments(args.param), stream), budget)
        except ValueError as e:
            raise UsageError(str(e)) from None
        sys.stdout.write(r.trace.dump())
        print(f"# status={r.status.value} steps={r.steps}", file=sys.stderr)
        return EXIT_OK
    cfg = _config(args)
    program = instrument(_program(cfg, args))
    wanted = set(args.case or [c.id for c in cfg.suite.cases])
    unknown = wanted - {c.id for c in cfg.suite.cases}
    if unknown:
        raise UsageError(f"unknown test ids: {sorted(unknown)}")
    out = _out(args)
    for case in cfg.suite.cases:
        if case.id in wanted:
            r = run(program, case.input, cfg.suite.budget)
            path = out / f"{case.id}.trace"
            path.write_text(r.trace.dump())
            print(f"{path}\t{r.status.value}\t{r.steps}")
    return EXIT_OK


# -- repair -------------------------------------------------------------------

def spec_summary(spec) -> dict:
    return {"correct_count": len(spec.correct), "violated_count": len(spec.violated),
            "correct": [str(i) for i in spec.correct], "violated": [str(i) for i in spec.violated]}


def _write_figures(out: Path, name: str, verdict, steps) -> None:
    write_tsv(out / "steps.tsv", steps, STEP_FIELDS)
    if all(r["patched_steps"] is not None for r in steps):
        plot_steps(out / "steps.png", steps, f"{name}: steps per test")
    counters = verdict.report.get("counters") if verdict else None
    if counters:
        write_tsv(out / "bounds.tsv", counters, BOUND_FIELDS)
        plot_bounds(out / "bounds.png", counters, f"{name}: loop counter bounds")


def cmd_repair(args) -> int:
    cfg = _config(args)
    program = cfg.suite.load_program()
    out = _out(args)
    t0 = time.monotonic()
    try:
        derivation = derive_spec(program, cfg.suite, cfg.analysis)
    except ValueError as e:
        raise UsageError(str(e)) from None
    spec = derivation.spec
    log.info("spec: %d correct, %d violated (%.1fs)", len(spec.correct), len(spec.violated),
             time.monotonic() - t0)
    ranking = localize(spec, program)
    report = {
        "program": cfg.name,
        "config": cfg.public(),
        "spec": spec_summary(spec),
        "ranking": [{"sid": s, "score": str(sc)} for s, sc in ranking.entries],
    }
    (out / "invariants.tsv").write_text(format_records(
        [("correct", spec.correct), ("violated", spec.violated)]))
    t1 = time.monotonic()
    try:
        patch = search(program, cfg.suite.cases, spec, cfg.search)
    except RepairFailed as e:
        log.info("search failed after %.1fs: %s", time.monotonic() - t1, e.diagnostic)
        report.update({"outcome": "Fail", "failure": e.diagnostic, "search": e.stats,
                       "patch": None, "verdict": None})
        write_json(out / "report.json", report)
        _write_figures(out, cfg.name, None, steps_rows(cfg.suite, derivation.runs, []))
        print(f"Fail: {e.diagnostic}")
        return EXIT_FAIL
    except SearchConfigError as e:
        raise UsageError(str(e)) from None
    log.info("search: plausible patch after %.1fs (%s)", time.monotonic() - t1, patch.stats)
    verdict = pipeline(program, patch.program, cfg.suite, cfg.analysis, spec=spec)
    report.update({
        "outcome": verdict.stage.value,
        "patch": patch.to_dict(program),
        "search": patch.stats,
        "verdict": verdict.to_dict(),
    })
    report["statistics"] = {"steps": steps_rows(cfg.suite, derivation.runs, verdict.report["tests"])}
    write_json(out / "report.json", report)
    (out / "patch.diff").write_text(patch.diff(program))
    (out / "patched.imp").write_text(pretty_print(patch.program))
    _write_figures(out, cfg.name, verdict, report["statistics"]["steps"])
    log.info("total %.1fs", time.monotonic() - t0)
    sys.stdout.write(patch.diff(program))
    print(f"verdict: {verdict.stage.value}")
    return EXIT_OK if verdict.valid else EXIT_FAIL


# -- validate -----------------------------------------------------------------

def validate_patch(cfg: RunConfig, patch_path) -> tuple:
    program = cfg.suite.load_program()
    patched, _ = load_patch(patch_path, program)
    derivation = derive_spec(program, cfg.suite, cfg.analysis)
    verdict = pipeline(program, patched, cfg.suite, cfg.analysis, spec=derivation.spec)
    return program, patched, derivation, verdict


def cmd_validate(args) -> int:
    cfg = _config(args)
    patch_path = args.patch or cfg.developer_patch
    if patch_path is None:
        raise UsageError("validate needs --patch (or a developer_patch in the config)")
    try:
        program, patched, derivation, verdict = validate_patch(cfg, patch_path)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out = _out(args)
    report = {"program": cfg.name, "patch": str(Path(patch_path).name), "config": cfg.public(),
              "spec": spec_summary(derivation.spec), "verdict": verdict.to_dict()}
    steps = steps_rows(cfg.suite, derivation.runs, verdict.report.get("tests", []))
    write_json(out / "verdict.json", report)
    _write_figures(out, cfg.name, verdict, steps)
    print(f"verdict: {verdict.stage.value}")
    for e in verdict.evidence:
        print(f"  {e}")
    return EXIT_OK if verdict.valid else EXIT_FAIL


# -- bench --------------------------------------------------------------------

def cmd_bench(args) -> int:
    names = [args.config] if args.config else list(CORPUS_NAMES)
    out = _out(args)
    step_rows, verdict_rows = [], []
    ok = True
    for name in names:
        cfg = load_config(resolve_config(name)).with_overrides(args.seed, args.workers,
                                                               args.falsification_budget)
        for kind, path in (("developer", cfg.developer_patch), ("overfit", cfg.overfit_patch)):
            if path is None:
                continue
            _, _, derivation, verdict = validate_patch(cfg, path)
            verdict_rows.append({"program": cfg.name, "patch": kind, "stage": verdict.stage.value,
                                 "evidence": "; ".join(verdict.evidence[:3])})
            ok = ok and (verdict.valid if kind == "developer" else not verdict.valid)
            if kind == "developer":
                rows = steps_rows(cfg.suite, derivation.runs, verdict.report.get("tests", []))
                step_rows += [{"program": cfg.name, **r} for r in rows]
                if all(r["patched_steps"] is not None for r in rows):
                    plot_steps(out / f"{cfg.name}_steps.png", rows, f"{cfg.name}: steps per test")
                if verdict.report.get("counters"):
                    plot_bounds(out / f"{cfg.name}_bounds.png", verdict.report["counters"],
                                f"{cfg.name}: loop counter bounds")
            print(f"{cfg.name}\t{kind}\t{verdict.stage.value}")
    write_tsv(out / "bench.tsv", step_rows, ("program",) + STEP_FIELDS)
    write_tsv(out / "verdicts.tsv", verdict_rows, ("program", "patch", "stage", "evidence"))
    return EXIT_OK if ok else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invrepair", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--config", help="config file, or a bundled corpus name")
        p.add_argument("--seed", type=int, help="override the search seed")
        p.add_argument("--workers", type=int, help="worker processes")
        p.add_argument("--falsification-budget", type=int, dest="falsification_budget",
                       help="generated inputs per falsification check")
        p.add_argument("--out", default=out_default, help="output directory")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = sub.add_parser("infer", help="infer invariants over the suite runs")
    common(p, "out/infer")
    p.add_argument("--program", help="analyse this program instead of the suite's")
    p.add_argument("--patch", help="apply this patch file first")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("trace", help="dump sampled program points")
    common(p, "out/trace")
    p.add_argument("--program", help="program file (with --param: ad hoc run)")
    p.add_argument("--case", action="append", help="test id (repeatable; default all)")
    p.add_argument("--param", action="append", help="name=value, arrays as 1,2,3")
    p.add_argument("--stream", help="comma-separated input() stream")
    p.add_argument("--budget", type=int, default=1_000_000, help="step budget for ad hoc runs")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("repair", help="localize, search and validate a patch")
    common(p, "out/repair")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("validate", help="validate a supplied patch")
    common(p, "out/validate")
    p.add_argument("--patch", help="patch file (.json or .imp)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="validate shipped patches and tabulate step counts")
    common(p, "out/bench")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    if args.workers is not None and args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ConfigError, SchemaError, DuplicateTestId, ProgramSyntaxError,
            InvalidOperand, IllFormedResult, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
