from pathlib import Path

import pytest

from invrepair.harness import load_suite
from invrepair.lang import parse

CORPUS = Path(__file__).resolve().parent.parent / "src" / "invrepair" / "corpus"
TOY = "x := 0; while (x < n) { x := x + 1 }"


@pytest.fixture
def toy():
    return parse(TOY, strict=True)


@pytest.fixture(scope="session")
def strsearch():
    return parse((CORPUS / "strsearch" / "strsearch.imp").read_text(), strict=True)


def corpus_suite(name):
    return load_suite(CORPUS / name / "suite.json")
