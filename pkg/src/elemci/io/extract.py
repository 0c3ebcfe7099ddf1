"""Reading elementary independences off an exact joint table."""
from __future__ import annotations

import numpy as np

from ..closure import close_set, make_closer
from ..core import AxiomLevel, ElementaryModel, ElementaryTriplet, Universe, members, popcount, subsets
from ..errors import NotPositive
from .tables import DEFAULT_EPS, JointTable


def ci_holds(table: JointTable, i: int, j: int, K: int, eps: float = DEFAULT_EPS) -> bool:
    """|p(i,j|k) - p(i|k) p(j|k)| <= eps for every k with p(k) > 0."""
    n = len(table.variables)
    keep = sorted({i, j} | set(members(K)))
    drop = tuple(a for a in range(n) if a not in keep)
    pijk = table.array.sum(axis=drop, keepdims=True) if drop else table.array
    pik = pijk.sum(axis=j, keepdims=True)
    pjk = pijk.sum(axis=i, keepdims=True)
    pk = pik.sum(axis=i, keepdims=True)
    live = pk > 0
    safe = np.where(live, pk, 1.0)
    gap = np.abs(pijk / safe - (pik / safe) * (pjk / safe))
    return bool(np.all(np.where(live, gap, 0.0) <= eps))


def _candidates(n):
    """(i, j, K) with i < j, by growing |K|."""
    full = (1 << n) - 1
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for K in subsets(full & ~(1 << i) & ~(1 << j)):
                out.append((popcount(K), K, i, j))
    out.sort()
    return [(i, j, K) for _, K, i, j in out]


def _prepare(table, level):
    level = AxiomLevel.parse(level)
    if level >= AxiomLevel.GRAPHOID and not table.is_positive():
        raise NotPositive("graphoid reasoning needs a strictly positive table")
    return level, Universe.of(table.variables)


def extract_model_from_table(
    table: JointTable, level=AxiomLevel.SEMIGRAPHOID, eps: float = DEFAULT_EPS, propagate: bool = True
) -> ElementaryModel:
    """Elementary model of the table, closed at ``level``.

    With ``propagate`` every accepted triplet is pushed through the ci0-1
    rules (plus ci2 for positive tables) and candidates already derived are
    not tested again.  Those rules hold in every distribution, so skipping
    does not change the result.
    """
    level, u = _prepare(table, level)
    n = len(u)
    sound = AxiomLevel.GRAPHOID if table.is_positive() else AxiomLevel.SEMIGRAPHOID
    found = set()
    closer = make_closer(sound, True, n) if propagate else None
    for i, j, K in _candidates(n):
        if closer is not None and closer.contains(i, j, K):
            continue
        if ci_holds(table, i, j, K, eps):
            found.add(ElementaryTriplet(i, j, K))
            if closer is not None:
                closer.add(i, j, K)
                closer.run()
    if closer is not None:
        found = {ElementaryTriplet(i, j, K) for i, j, K in closer.triplets() if i < j}
    closed = close_set(found, level, True, n)
    return ElementaryModel(u, level, frozenset(closed), True, True)


def extract_model_bruteforce(table: JointTable, level=AxiomLevel.SEMIGRAPHOID, eps: float = DEFAULT_EPS):
    """Test every candidate, then close; no skipping."""
    return extract_model_from_table(table, level, eps, propagate=False)
