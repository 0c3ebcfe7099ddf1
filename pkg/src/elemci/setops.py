"""Intersection and union constructions over closed elementary models."""
from __future__ import annotations

from .closure import close_set
from .core import ElementaryModel, ElementaryTriplet, make_context
from .errors import AuxNameCollision, LevelMismatch, NotClosed, UniverseMismatch
from .query import dominant_triplets, is_member


def _check_pair(E: ElementaryModel, E2: ElementaryModel, closed=True):
    E.require_same_universe(E2)
    if E.level != E2.level:
        raise LevelMismatch("models use different axiom levels")
    if closed and not (E.closed and E2.closed):
        raise NotClosed("both models must be closed")


def intersect(E: ElementaryModel, E2: ElementaryModel) -> ElementaryModel:
    """Consensus model: the triplets both models share (closed as is)."""
    _check_pair(E, E2)
    return E.replace(triplets=E.triplets & E2.triplets, closed=True)


def union_with_context(E: ElementaryModel, E2: ElementaryModel, aux: str = "aux") -> ElementaryModel:
    """Exact union: E's triplets under aux=0, E2's under aux=1."""
    if E.universe != E2.universe or E.symmetric != E2.symmetric:
        raise UniverseMismatch("models live over different universes")
    if E.level != E2.level:
        raise LevelMismatch("models use different axiom levels")
    if aux in E.universe.names:
        raise AuxNameCollision(f"variable {aux!r} already exists")
    universe = E.universe.with_context_var(aux, ("0", "1"))
    k = len(E.universe)
    out = set()
    for model, value in ((E, "0"), (E2, "1")):
        for t in model.triplets:
            ctx = make_context(dict(t.C) | {k: value})
            out.add(ElementaryTriplet(t.i, t.j, t.K, ctx))
    return ElementaryModel(universe, E.level, frozenset(out), E.closed and E2.closed, E.symmetric)


def union_min_superset(E: ElementaryModel, E2: ElementaryModel, budget=None) -> ElementaryModel:
    """The smallest closed model containing both."""
    _check_pair(E, E2, closed=False)
    closed = close_set(E.triplets | E2.triplets, E.level, E.symmetric, len(E.universe), budget)
    return E.replace(triplets=frozenset(closed), closed=True)


def _represented_ok(U: ElementaryModel, E, E2) -> bool:
    for t in dominant_triplets(U):
        if not (is_member(E, *t, check=False) or is_member(E2, *t, check=False)):
            return False
    return True


def union_max_subset(E: ElementaryModel, E2: ElementaryModel) -> ElementaryModel:
    """A maximal closed U ⊆ E ∪ E2 representing only triplets of M ∪ M'.

    Starts from E and adds the triplets of E2 ∖ E in sorted order whenever
    the closure stays inside E ∪ E2 and every dominant triplet of the result
    belongs to one of the two models; passes repeat until nothing is added.
    """
    _check_pair(E, E2)
    pool = E.triplets | E2.triplets
    U = E.triplets
    changed = True
    while changed:
        changed = False
        for t in sorted(pool - U):
            if t in U:
                continue
            grown = frozenset(
                close_set(U | {t}, E.level, E.symmetric, len(E.universe))
            )
            if not grown <= pool:
                continue
            cand = E.replace(triplets=grown, closed=True)
            if _represented_ok(cand, E, E2):
                U = grown
                changed = True
    return E.replace(triplets=U, closed=True)
