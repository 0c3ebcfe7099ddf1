"""The e/m maps and the closure engines.

``close_elementary`` runs the ci-rule worklist, one independent run per
context stratum, on the compiled kernel when it is available and the
universe fits in its packed keys.  ``close_triplets_oracle`` is a separate
brute-force CI-rule closure over full triplets, kept as a test oracle.
"""
from __future__ import annotations

import itertools
import os
from collections import defaultdict
from typing import Iterable

from . import _pykernel
from .core import (
    AxiomLevel,
    ElementaryModel,
    ElementaryTriplet,
    Triplet,
    Universe,
    canonicalize,
    context_keys,
    members,
    subsets,
    validate,
)
from .errors import NotClosed, UniverseMismatch, UniverseTooLarge

try:
    if os.environ.get("ELEMCI_PURE_PYTHON") == "1":
        raise ImportError("compiled kernel disabled by ELEMCI_PURE_PYTHON")
    from ._ckernel import Closer as _CCloser
except ImportError:  # pragma: no cover - depends on the build
    _CCloser = None

HAVE_COMPILED = _CCloser is not None
ORACLE_LIMIT = 8


def kernel_name() -> str:
    return "cython" if HAVE_COMPILED else "python"


def make_closer(level, symmetric=True, n_vars=0, backend=None):
    """Return a fresh closure kernel.

    ``backend`` is ``"cython"``, ``"python"`` or ``None`` (fastest that fits).
    """
    if backend == "python":
        return _pykernel.Closer(level, symmetric)
    fits = HAVE_COMPILED and n_vars <= _CCloser.MAX_INDEX
    if backend == "cython":
        if not fits:
            raise RuntimeError("compiled kernel unavailable for this universe")
        return _CCloser(int(level), symmetric)
    if fits:
        return _CCloser(int(level), symmetric)
    return _pykernel.Closer(level, symmetric)


def expand_e(M: Iterable[Triplet], universe: Universe | None = None, symmetric=True) -> set:
    """e(M): all i ⟂ j | M' with i∈I, j∈J and K ⊆ M' ⊆ (I∖i)(J∖j)K."""
    out = set()
    for t in M:
        t = Triplet(*t)
        if universe is not None:
            validate(t, universe)
        for i in members(t.I):
            for j in members(t.J):
                free = (t.I & ~(1 << i)) | (t.J & ~(1 << j))
                for extra in subsets(free):
                    e = ElementaryTriplet(i, j, t.K | extra, t.C)
                    out.add(canonicalize(e) if symmetric else e)
    return out


def _strata(triplets):
    groups = defaultdict(list)
    for t in triplets:
        groups[t.C].append(t)
    return groups


def close_set(triplets, level, symmetric=True, n_vars=128, budget=None, backend=None) -> set:
    """Close a raw set of elementary triplets; returns stored-form triplets."""
    level = AxiomLevel.parse(level)
    out = set()
    for ctx, group in _strata(ElementaryTriplet(*t) for t in triplets).items():
        closer = make_closer(level, symmetric, n_vars, backend)
        for t in group:
            closer.add(t.i, t.j, t.K)
        closer.run(budget)
        for i, j, K in closer.triplets():
            if symmetric and i > j:
                continue
            out.add(ElementaryTriplet(i, j, K, ctx))
    return out


def close_elementary(E: ElementaryModel, budget=None, backend=None) -> ElementaryModel:
    closed = close_set(
        E.triplets, E.level, E.symmetric, len(E.universe), budget=budget, backend=backend
    )
    return E.replace(triplets=frozenset(closed), closed=True)


def elementary_model(universe, level, triplets=(), symmetric=True, close=True, budget=None):
    """Build (and by default close) a model from triplets of any arity."""
    elems = expand_e(
        [t.as_triplet() if isinstance(t, ElementaryTriplet) else Triplet(*t) for t in triplets],
        universe,
        symmetric,
    )
    E = ElementaryModel(universe, level, frozenset(elems), False, symmetric)
    return close_elementary(E, budget=budget) if close else E


def _check_small(n):
    if n > ORACLE_LIMIT:
        raise UniverseTooLarge(f"brute-force routines are limited to {ORACLE_LIMIT} variables")


def close_triplets_oracle(
    M: Iterable[Triplet], level, universe: Universe | None = None, symmetric: bool = True
) -> set:
    """CI0-CI3 closure over full triplets (brute force; small universes only).

    With ``symmetric=False`` CI0 is dropped and the primed rules (the same
    rules acting on the first element with the second held fixed) are added.
    """
    level = AxiomLevel.parse(level)
    M = [Triplet(*t) for t in M]
    if universe is not None:
        _check_small(len(universe))
        for t in M:
            validate(t, universe)
    else:
        top = 0
        for t in M:
            top |= t.I | t.J | t.K
        _check_small(top.bit_length())

    result = set()
    for ctx, group in _strata(M).items():
        result |= _oracle_stratum(group, level, symmetric)
    return result


def _nonempty_proper_splits(A):
    for sub in subsets(A):
        if sub and sub != A:
            yield sub, A & ~sub


def _oracle_stratum(seed, level, symmetric=True):
    present = set()
    fwd = defaultdict(set)  # (I, cond) -> {J}
    rev = defaultdict(set)  # (J, cond) -> {I}
    queue = []

    def put(I, J, K, C):
        t = Triplet(I, J, K, C)
        if t not in present:
            present.add(t)
            fwd[(I, K)].add(J)
            rev[(J, K)].add(I)
            queue.append(t)

    def put_t(I, J, K, C):
        put(J, I, K, C)

    def has(I, J, K, C):
        return Triplet(I, J, K, C) in present

    def has_t(I, J, K, C):
        return Triplet(J, I, K, C) in present

    def rules(I, A, M, C, idx, has, put):
        # CI1 <=: I ⟂ JK | L gives I ⟂ J | KL and I ⟂ K | L
        for J, K in _nonempty_proper_splits(A):
            put(I, J, K | M, C)
            put(I, K, M, C)
        for K in subsets(M):
            if not K:
                continue
            L = M & ~K
            # CI1 => with this triplet as I ⟂ J | KL
            if has(I, K, L, C):
                put(I, A | K, L, C)
            # CI2
            if level >= AxiomLevel.GRAPHOID and has(I, K, A | L, C):
                put(I, A, L, C)
                put(I, K, L, C)
        # CI1 => with this triplet as I ⟂ K | L
        for J in list(idx.get((I, A | M), ())):
            if not J & A:
                put(I, J | A, M, C)
        # CI3
        if level >= AxiomLevel.COMPOSITIONAL:
            for K in list(idx.get((I, M), ())):
                if K & A:
                    continue
                put(I, A, K | M, C)
                put(I, K, A | M, C)

    for t in seed:
        put(*t)

    while queue:
        I, A, M, C = queue.pop()
        if symmetric:
            put(A, I, M, C)
            rules(I, A, M, C, fwd, has, put)
        else:
            rules(I, A, M, C, fwd, has, put)
            rules(A, I, M, C, rev, has_t, put_t)
    return present


def all_triplets(universe_size: int, allowed: int | None = None):
    """Every triplet (I, J, K) with I, J nonempty over the allowed variables."""
    _check_small(universe_size)
    idx = members(((1 << universe_size) - 1) if allowed is None else allowed)
    for roles in itertools.product(range(4), repeat=len(idx)):
        I = J = K = 0
        for k, r in zip(idx, roles):
            if r == 1:
                I |= 1 << k
            elif r == 2:
                J |= 1 << k
            elif r == 3:
                K |= 1 << k
        if I and J:
            yield I, J, K


def enumerate_model(E: ElementaryModel) -> set:
    """m(E): every triplet whose membership test passes, per context."""
    from .query import is_member

    if not E.closed:
        raise NotClosed("enumerate_model needs a closed model")
    n = len(E.universe)
    _check_small(n)
    out = set()
    for ctx in E.contexts():
        allowed = E.universe.full_mask & ~context_keys(ctx)
        for I, J, K in all_triplets(n, allowed):
            if is_member(E, I, J, K, ctx):
                out.add(Triplet(I, J, K, ctx))
    return out


def require_same(E: ElementaryModel, E2: ElementaryModel) -> None:
    if E.universe != E2.universe or E.symmetric != E2.symmetric:
        raise UniverseMismatch("models live over different universes")
