"""Run configuration files and patch files.

A config is JSON with paths relative to the config file::

    {"suite": "suite.json",
     "search": {"seed": 1, "population": 40, "generations": 50},
     "analysis": {"falsification_budget": 200},
     "developer_patch": "developer.json",
     "overfit_patch": "overfit.json"}

A patch file is either ``{"mutations": [...]}`` (applied to the suite's
program) or ``{"patched_source": "file.imp"}``; a bare ``.imp`` file is
read as the patched program.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from ..lang import parse
from ..repair import Mutation, SearchConfig, apply_all
from ..validate import AnalysisConfig
from .suite import SchemaError, TestSuite, load_suite


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    path: Path
    suite: TestSuite
    search: SearchConfig
    analysis: AnalysisConfig
    developer_patch: Optional[Path] = None
    overfit_patch: Optional[Path] = None

    @property
    def name(self) -> str:
        return self.suite.name

    def with_overrides(self, seed=None, workers=None, falsification_budget=None) -> "RunConfig":
        search, analysis = self.search, self.analysis
        if seed is not None:
            search = replace(search, seed=seed)
        if workers is not None:
            search = replace(search, workers=workers)
            analysis = replace(analysis, workers=workers)
        if falsification_budget is not None:
            analysis = replace(analysis, falsification_budget=falsification_budget)
        return replace(self, search=search, analysis=analysis)

    def public(self) -> dict:
        """Config echo for reports (worker count left out: it must not
        change results)."""
        s = {k: getattr(self.search, k) for k in self.search.__dataclass_fields__ if k != "workers"}
        a = {k: getattr(self.analysis, k) for k in self.analysis.__dataclass_fields__ if k != "workers"}
        return {"search": s, "analysis": a}


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON: {e}") from None
    if not isinstance(doc, dict) or "suite" not in doc:
        raise ConfigError(f"{path}: missing 'suite'")
    base = path.parent
    suite_path = base / doc["suite"]
    if not suite_path.is_file():
        raise ConfigError(f"suite file not found: {suite_path}")
    try:
        suite = load_suite(suite_path)
    except FileNotFoundError as e:
        raise ConfigError(f"program file not found: {e.filename}") from None
    search = doc.get("search", {})
    try:
        scfg = SearchConfig.from_dict({"seed": suite.seed, **search})
        acfg = AnalysisConfig.from_dict(doc.get("analysis", {}))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from None

    def opt(key):
        return base / doc[key] if doc.get(key) else None
    return RunConfig(path, suite, scfg, acfg, opt("developer_patch"), opt("overfit_patch"))


def load_patch(path, original):
    """Return ``(patched program, mutations or None)``."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"patch file not found: {path}")
    if path.suffix == ".imp":
        return parse(path.read_text(), strict=True), None
    doc = json.loads(path.read_text())
    if "mutations" in doc:
        muts = tuple(Mutation.from_dict(m) for m in doc["mutations"])
        return apply_all(original, muts), muts
    if "patched_source" in doc:
        return parse((path.parent / doc["patched_source"]).read_text(), strict=True), None
    raise SchemaError(str(path), "expected 'mutations' or 'patched_source'")
