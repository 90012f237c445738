from __future__ import annotations

from collections import defaultdict

import numpy as np

from .grammar import Form, Invariant, InvariantSet, Provenance


class EmptyTraceSet(ValueError):
    pass


def samples_by_point(traces) -> dict:
    """point -> list of valuation dicts, in trace order."""
    out = defaultdict(list)
    for tr in traces:
        for point, vals in tr.points:
            out[point].append(dict(vals))
    return out


def _matrix(rows, names):
    big = max((abs(r[n]) for r in rows for n in names), default=0)
    dtype = np.int64 if big < 2 ** 61 else object
    return np.array([[r[n] for n in names] for r in rows], dtype=dtype).reshape(len(rows), len(names))


def infer_point(point: str, rows: list) -> list:
    """Every grammar instance that holds on all ``rows`` (valuations of one
    point).  Only variables present in every row take part."""
    if not rows:
        return []
    names = sorted(set.intersection(*(set(r) for r in rows)))
    if not names:
        return []
    m = _matrix(rows, names)
    support = len(rows)
    lo = m.min(axis=0)
    hi = m.max(axis=0)
    out = []
    for j, v in enumerate(names):
        a, b = int(lo[j]), int(hi[j])
        if a == b:
            out.append(Invariant(point, Form.EQ_CONST, v, None, a, support))
        out.append(Invariant(point, Form.LE_CONST, v, None, b, support))
        out.append(Invariant(point, Form.GE_CONST, v, None, a, support))
    for j in range(len(names)):
        for k in range(j + 1, len(names)):
            v, w = names[j], names[k]
            d = m[:, j] - m[:, k]
            dlo, dhi = int(d.min()), int(d.max())
            if dlo == dhi:
                if dlo == 0:
                    out.append(Invariant(point, Form.EQ_VAR, v, w, None, support))
                else:
                    out.append(Invariant(point, Form.EQ_OFFSET, v, w, dlo, support))
            if dhi <= 0:
                out.append(Invariant(point, Form.LE_VAR, v, w, None, support))
            if dlo >= 0:
                out.append(Invariant(point, Form.LE_VAR, w, v, None, support))
    return out


def infer(traces, provenance=Provenance.ALL_RUNS) -> InvariantSet:
    """Instantiate the grammar over the sampled valuations of ``traces``.

    Bounds use the observed extremes; equalities are emitted only when the
    value (or difference) is constant across every sample of the point.
    """
    traces = list(traces)
    if not traces:
        raise EmptyTraceSet("no traces to infer from")
    by_point = samples_by_point(traces)
    items = []
    for point in sorted(by_point):
        items.extend(infer_point(point, by_point[point]))
    return InvariantSet.of(items, provenance, by_point.keys())
