import json
import shutil
import subprocess
import sys

import pytest

from conftest import CORPUS
from invrepair.corpus import build
from invrepair.harness import DuplicateTestId, SchemaError, load_suite
from invrepair.harness.cli import main
from invrepair.harness.suite import decode_values, encode_values

TOY_PROGRAM = "x := 0;\nwhile (x < n) {\n  x := x + 1\n}\n"


def write_suite(tmp_path, cases, **extra):
    (tmp_path / "toy.imp").write_text(TOY_PROGRAM)
    doc = {"program": "toy.imp", "budget": 1000, "cases": cases, **extra}
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(doc))
    return path


def good_case(cid="a", n=3):
    return {"id": cid, "input": {"params": {"n": n}}, "expected": {"x": n}, "threshold": 100}


@pytest.fixture
def toy_corpus(tmp_path):
    dst = tmp_path / "toy_count"
    shutil.copytree(CORPUS / "toy_count", dst)
    return dst


# -- suite loading

def test_load_strsearch_suite():
    suite = load_suite(CORPUS / "strsearch" / "suite.json")
    assert len(suite.cases) == 12
    assert all(c.threshold >= 1 for c in suite.cases)
    assert len(suite.case("long_found").input.params["source"]) == 10_000


def test_load_suite_missing_expected(tmp_path):
    case = good_case()
    del case["expected"]
    with pytest.raises(SchemaError) as e:
        load_suite(write_suite(tmp_path, [good_case("ok"), case]))
    assert e.value.path == "cases[1].expected"


def test_load_suite_errors(tmp_path):
    with pytest.raises(SchemaError) as e:
        load_suite(write_suite(tmp_path, []))
    assert e.value.path == "cases"
    with pytest.raises(DuplicateTestId):
        load_suite(write_suite(tmp_path, [good_case("a"), good_case("a", 4)]))
    bad = good_case()
    bad["threshold"] = 0
    with pytest.raises(SchemaError):
        load_suite(write_suite(tmp_path, [bad]))
    bad = good_case()
    bad["input"]["params"]["m"] = 1
    with pytest.raises(SchemaError):
        load_suite(write_suite(tmp_path, [bad]))


def test_value_encoding_round_trip():
    for values in ([], [1, 2, 3], [1] * 40 + [2], [1, 3] * 20):
        enc = encode_values(values)
        assert decode_values(enc, "v") == tuple(values)
    assert encode_values([5] * 100) == {"runs": [[5, 100]]}


def test_corpus_is_up_to_date():
    assert build.main(["--check"]) == 0


# -- CLI

def test_cli_trace_ad_hoc(tmp_path, capsys):
    prog = tmp_path / "toy.imp"
    prog.write_text(TOY_PROGRAM)
    assert main(["trace", "--program", str(prog), "--param", "n=3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["entry\tn=3", "L2.exit\tcnt_L2=3\tn=3\tx=3", "exit\tcnt_L2=3\tn=3\tx=3"]


def test_cli_trace_config(tmp_path):
    assert main(["trace", "--config", "toy_count", "--case", "one_round", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "one_round.trace").read_text().splitlines()
    assert lines[0].startswith("entry\t") and lines[-1].startswith("exit\t")


def test_cli_infer(tmp_path, capsys):
    assert main(["infer", "--config", "toy_count", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "invariants.tsv").read_text()
    assert "section=violated" in text and "section=passing" in text
    assert (tmp_path / "bounds.tsv").read_text().startswith("counter\tbound\n")


def test_cli_validate_shipped_patches(toy_corpus, tmp_path):
    cfg = str(toy_corpus / "config.json")
    assert main(["validate", "--config", cfg, "--out", str(tmp_path / "dev")]) == 0
    verdict = json.loads((tmp_path / "dev" / "verdict.json").read_text())
    assert verdict["verdict"]["stage"] == "Valid"
    assert (tmp_path / "dev" / "bounds.png").stat().st_size > 0
    assert main(["validate", "--config", cfg, "--patch", str(toy_corpus / "overfit.json"),
                 "--out", str(tmp_path / "over")]) == 1


def test_cli_validate_accum_loop(tmp_path):
    assert main(["validate", "--config", "accum_loop", "--out", str(tmp_path / "dev")]) == 0
    over = CORPUS / "accum_loop" / "overfit.json"
    assert main(["validate", "--config", "accum_loop", "--patch", str(over),
                 "--out", str(tmp_path / "over")]) == 1


def test_cli_repair_toy(tmp_path, capsys):
    assert main(["repair", "--config", "toy_count", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["outcome"] == "Valid"
    assert report["patch"]["mutations"] == [{"kind": "delete", "target": 5}]
    for name in ("patch.diff", "patched.imp", "invariants.tsv", "steps.tsv", "steps.png",
                 "bounds.tsv", "bounds.png"):
        assert (tmp_path / name).exists(), name


def test_cli_repair_zero_generations(toy_corpus, tmp_path):
    cfg = json.loads((toy_corpus / "config.json").read_text())
    cfg["search"]["generations"] = 0
    (toy_corpus / "config.json").write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert main(["repair", "--config", str(toy_corpus / "config.json"), "--out", str(out)]) == 1
    report = json.loads((out / "report.json").read_text())
    assert report["outcome"] == "Fail" and report["patch"] is None


def test_cli_usage_errors(toy_corpus, tmp_path):
    assert main(["repair", "--config", str(tmp_path / "missing.json")]) == 2
    suite = json.loads((toy_corpus / "suite.json").read_text())
    suite["program"] = "nowhere.imp"
    (toy_corpus / "suite.json").write_text(json.dumps(suite))
    assert main(["repair", "--config", str(toy_corpus / "config.json"),
                 "--out", str(tmp_path / "o")]) == 2
    assert main(["repair", "--config", "toy_count", "--workers", "0"]) == 2
    assert main(["trace"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "invrepair", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in ("infer", "trace", "repair", "validate", "bench"):
        assert cmd in r.stdout
