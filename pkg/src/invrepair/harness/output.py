"""Report files: JSON documents, TSV tables and figures."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def tsv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fields, delimiter="\t", lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if r.get(k) is None else r[k] for k in fields})
    return buf.getvalue()


def write_tsv(path: Path, rows, fields) -> None:
    path.write_text(tsv(rows, fields))


def _bars(ax, labels, series, ylabel, log=False):
    width = 0.8 / len(series)
    for k, (name, values) in enumerate(series):
        xs = [i + (k - (len(series) - 1) / 2) * width for i in range(len(labels))]
        ax.bar(xs, [max(v, 0) for v in values], width, label=name)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel(ylabel)
    if log:
        ax.set_yscale("symlog")
    ax.legend()


def plot_bounds(path: Path, rows, title: str) -> None:
    """Counter upper bounds at exit, original vs patched."""
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [r["counter"] for r in rows]
    _bars(ax, labels, [("original", [r["original"] or 0 for r in rows]),
                       ("patched", [r["patched"] or 0 for r in rows])],
          "upper bound at exit", log=True)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_steps(path: Path, rows, title: str) -> None:
    """Per-test step counts for the original and patched programs."""
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(rows)), 4))
    labels = [r["test"] for r in rows]
    _bars(ax, labels, [("original", [r["original_steps"] for r in rows]),
                       ("patched", [r["patched_steps"] for r in rows]),
                       ("threshold", [r["threshold"] for r in rows])], "steps")
    ax.set_yscale("log")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
