"""Line-oriented invariant report.

One record per line, tab-separated ``key=value`` fields in a fixed order::

    section=failing	point=exit	form=v <= c	invariant=cnt_L9 <= 54	vars=cnt_L9	constant=54	support=12	provenance=FromFailing

Records are sorted by section (in the order given) and then canonically.
"""
from __future__ import annotations

from .grammar import Form, Invariant, InvariantSet, Provenance

FIELDS = ("section", "point", "form", "invariant", "vars", "constant", "support", "provenance")


def format_records(sections) -> str:
    """``sections``: iterable of ``(name, InvariantSet)``."""
    lines = []
    for name, s in sections:
        for inv in s:
            rec = {
                "section": name,
                "point": inv.point,
                "form": inv.form.value,
                "invariant": inv.text(),
                "vars": ",".join(inv.variables),
                "constant": "" if inv.c is None else str(inv.c),
                "support": str(inv.support),
                "provenance": s.provenance.value,
            }
            lines.append("\t".join(f"{k}={rec[k]}" for k in FIELDS))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_records(text: str) -> dict:
    """Inverse of :func:`format_records`: section name -> InvariantSet."""
    grouped = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rec = dict(field.split("=", 1) for field in line.split("\t"))
        names = rec["vars"].split(",")
        form = Form(rec["form"])
        c = int(rec["constant"]) if rec["constant"] else None
        inv = Invariant(rec["point"], form, names[0], names[1] if len(names) > 1 else None,
                        c, int(rec["support"]))
        grouped.setdefault(rec["section"], (Provenance(rec["provenance"]), []))[1].append(inv)
    return {k: InvariantSet.of(v, prov) for k, (prov, v) in grouped.items()}
