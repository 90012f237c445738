"""Entailment for the invariant grammar.

Every grammar form is a conjunction of difference constraints
``x - y <= k`` (constants use the pseudo-variable ZERO), so a hypothesis
set is a difference-bound matrix.  Closing it with Floyd-Warshall gives
the tightest derivable bound on every difference; because all constants
are integers the rational and integer readings coincide.
"""
from __future__ import annotations

import math

from .grammar import ZERO, Invariant

INF = math.inf


class DBM:
    def __init__(self, constraints):
        names = {ZERO}
        for x, y, _ in constraints:
            names.add(x)
            names.add(y)
        self.names = sorted(names)
        self.idx = {n: i for i, n in enumerate(self.names)}
        n = len(self.names)
        d = [[INF] * n for _ in range(n)]
        for i in range(n):
            d[i][i] = 0
        for x, y, k in constraints:
            # x - y <= k is an edge y -> x of weight k
            yi, xi = self.idx[y], self.idx[x]
            if k < d[yi][xi]:
                d[yi][xi] = k
        for m in range(n):
            dm = d[m]
            for i in range(n):
                dim = d[i][m]
                if dim == INF:
                    continue
                di = d[i]
                for j in range(n):
                    alt = dim + dm[j]
                    if alt < di[j]:
                        di[j] = alt
        self.d = d
        self.feasible = all(d[i][i] >= 0 for i in range(n))

    def bound(self, x: str, y: str):
        """Tightest k with ``x - y <= k`` (INF if unconstrained)."""
        if x == y:
            return 0
        if x not in self.idx or y not in self.idx:
            return INF
        return self.d[self.idx[y]][self.idx[x]]

    def entails(self, x, y, k) -> bool:
        return not self.feasible or self.bound(x, y) <= k


def closure(hyp) -> DBM:
    cons = []
    for inv in hyp:
        cons.extend(inv.constraints())
    return DBM(cons)


def implies(hyp, concl: Invariant, dbm: DBM | None = None) -> bool:
    """True iff every integer valuation satisfying ``hyp`` (restricted to
    the conclusion's program point) satisfies ``concl``."""
    if dbm is None:
        dbm = closure(i for i in hyp if i.point == concl.point)
    return all(dbm.entails(x, y, k) for x, y, k in concl.constraints())


def upper_bound(hyp, var: str):
    """Tightest constant upper bound on ``var`` derivable from ``hyp``."""
    return closure(hyp).bound(var, ZERO)

