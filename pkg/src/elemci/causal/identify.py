"""Causal effect identification and plan evaluation from regime independences.

All conditions are membership queries on a model over a regime universe
(see ``regime``); no graph is consulted.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..core import subsets_by_size
from ..errors import DepthExhausted, InvalidSets, NaturalnessViolated
from .estimand import prob, product, summation
from .regime import f_mask, n_base, tci


@dataclass(frozen=True)
class Step:
    """One case application: p̃(Y | I_X X W) via ``case`` with set Z."""

    case: int
    X: int
    Y: int
    W: int
    Z: int


class _Search:
    def __init__(self, E, max_depth):
        self.E = E
        self.u = E.universe
        self.n = n_base(self.u)
        self.base = (1 << self.n) - 1
        self.max_depth = max_depth
        self.memo = {}
        self.active = set()
        self.hit_limit = False

    def names(self, m):
        return tuple(self.u.names_of(m))

    def F(self, m):
        return f_mask(self.u, m)

    def p(self, targets, given=0):
        return prob(self.names(targets), self.names(given))

    # case conditions ---------------------------------------------------
    def case1(self, X, Y, W, Z):
        E, F = self.E, self.F
        return (
            tci(E, Y, F(X), X | W | Z)
            and tci(E, Z, X, W, intervened=X)
            and tci(E, Z, F(X), W)
        )

    def case2(self, X, Y, W, Z):
        E, F = self.E, self.F
        return (
            tci(E, Z, F(X), X | W)
            and tci(E, Y, F(Z), X | W | Z)
            and tci(E, X, Z, W, intervened=Z)
            and tci(E, X, F(Z), W)
            and tci(E, Y, F(Z), X | W | Z, intervened=X)
            and tci(E, Y, X, W | Z, intervened=X | Z)
            and tci(E, Y, F(X), W | Z, intervened=Z)
        )

    def case3_local(self, X, Y, W, Z):
        return tci(self.E, Y, self.F(X), X | W | Z)

    def case4_local(self, X, Y, W, Z):
        return tci(self.E, Z, X, W, intervened=X) and tci(self.E, Z, self.F(X), W)

    # estimands -----------------------------------------------------------
    def est1(self, X, Y, W, Z):
        return summation(self.names(Z), product(self.p(Y, X | W | Z), self.p(Z, W)))

    def est2(self, X, Y, W, Z):
        inner = summation(self.names(X), product(self.p(Y, X | W | Z), self.p(X, W)))
        return summation(self.names(Z), product(self.p(Z, X | W), inner))

    # search --------------------------------------------------------------
    def run(self, X, Y, W, depth):
        key = (X, Y, W)
        if key in self.memo:
            return self.memo[key]
        if key in self.active:
            return None
        if depth > self.max_depth:
            self.hit_limit = True
            return None
        self.active.add(key)
        limited_before = self.hit_limit
        self.hit_limit = False
        try:
            found = self._cases(X, Y, W, depth)
        finally:
            self.active.discard(key)
        if found is not None or not self.hit_limit:
            self.memo[key] = found
        self.hit_limit = self.hit_limit or limited_before
        return found

    def _cases(self, X, Y, W, depth):
        pool = subsets_by_size(self.base & ~(X | Y | W))
        for Z in pool:
            if self.case1(X, Y, W, Z):
                return self.est1(X, Y, W, Z), [Step(1, X, Y, W, Z)]
        for Z in pool:
            if Z and self.case2(X, Y, W, Z):
                return self.est2(X, Y, W, Z), [Step(2, X, Y, W, Z)]
        for Z in pool:
            if not Z or not self.case3_local(X, Y, W, Z):
                continue
            sub = self.run(X, Z, W, depth + 1)
            if sub is not None:
                est = summation(self.names(Z), product(self.p(Y, X | W | Z), sub[0]))
                return est, [Step(3, X, Y, W, Z)] + sub[1]
        for Z in pool:
            if not Z or not self.case4_local(X, Y, W, Z):
                continue
            sub = self.run(X, Y, W | Z, depth + 1)
            if sub is not None:
                est = summation(self.names(Z), product(sub[0], self.p(Z, W)))
                return est, [Step(4, X, Y, W, Z)] + sub[1]
        return None


def identify(E, X: int, Y: int, W: int = 0, max_depth: int | None = None, trace: list | None = None):
    """Estimand for p̃(Y | I_X X W) in observational terms, or None.

    Cases 1 and 2 are tried first over every Z (smallest first, then by
    mask), then the recursive cases 3 and 4.  ``None`` means these
    sufficient conditions do not apply; DepthExhausted means the recursion
    limit cut the search short without a result.  When ``trace`` is a list
    it receives the applied steps, outermost first.
    """
    if X & Y or X & W or Y & W:
        raise InvalidSets("X, Y and W must be pairwise disjoint")
    if not X or not Y:
        raise InvalidSets("X and Y must be nonempty")
    s = _Search(E, n_base(E.universe) if max_depth is None else max_depth)
    if (X | Y | W) & ~s.base:
        raise InvalidSets("X, Y and W must be base variables")
    found = s.run(X, Y, W, 0)
    if found is None:
        if s.hit_limit:
            raise DepthExhausted(f"no estimand within depth {s.max_depth}")
        return None
    if trace is not None:
        trace.extend(found[1])
    return found[0]


@dataclass(frozen=True)
class PlanQuery:
    controls: tuple  # X_1..X_n as masks
    pools: tuple  # N_1..N_n as masks
    Y: int
    W: int = 0

    def __post_init__(self):
        if len(self.controls) != len(self.pools) or not self.controls:
            raise InvalidSets("need one observed pool per control step")
        seen = 0
        for X in self.controls:
            if not X or X & seen:
                raise InvalidSets("controls must be nonempty and pairwise disjoint")
            seen |= X
        if not self.Y or self.Y & seen:
            raise InvalidSets("targets must be nonempty and disjoint from the controls")
        for N in self.pools:
            if N & (seen | self.Y):
                raise InvalidSets("observed pools must avoid controls and targets")
        if self.W & ~self.pools[-1]:
            raise InvalidSets("W must lie in the last observed pool")


def _minimal_subsets(pool, ok):
    found = []
    for Z in subsets_by_size(pool):
        if any(f & Z == f for f in found):
            continue
        if ok(Z):
            found.append(Z)
    return found


def plan_condition(E, q: PlanQuery, k: int, zs) -> bool:
    """(W Y) ⟂ F_{X_k} | I_{X_{k+1}..X_n} X_1..X_n Z_1..Z_k."""
    X_all = 0
    for X in q.controls:
        X_all |= X
    later = 0
    for X in q.controls[k + 1:]:
        later |= X
    Zs = 0
    for Z in zs[: k + 1]:
        Zs |= Z
    return tci(E, q.W | q.Y, f_mask(E.universe, q.controls[k]), X_all | Zs, intervened=later)


def natural_violations(E, q: PlanQuery, zs) -> list:
    """Steps k whose chosen Z_k breaks either naturalness equation."""
    bad = []
    F = lambda m: f_mask(E.universe, m)  # noqa: E731
    for k, Z in enumerate(zs):
        before = rest = 0
        for X in q.controls[:k]:
            before |= X
        for X in q.controls[k:]:
            rest |= X
        for Zp in zs[:k]:
            before |= Zp
        if not (tci(E, Z, rest, before, intervened=rest) and tci(E, Z, F(rest), before)):
            bad.append(k)
    return bad


def find_plan_sets(E, q: PlanQuery):
    """Backtracking search for Z_1..Z_n, each a minimal subset of its pool."""
    n = len(q.controls)
    zs: list = []

    def go(k, used):
        if k == n:
            return True
        pool = q.pools[k] & ~used & ~q.W
        for Z in _minimal_subsets(pool, lambda Z: plan_condition(E, q, k, zs + [Z])):
            zs.append(Z)
            if go(k + 1, used | Z):
                return True
            zs.pop()
        return False

    return list(zs) if go(0, 0) else None


def evaluate_plan(E, q: PlanQuery, check_natural: bool = True, chosen: list | None = None):
    """Estimand for the effect of the plan on W Y, or None if no Z-sequence exists.

    When ``chosen`` is a list it receives Z_1..Z_n.
    """
    zs = find_plan_sets(E, q)
    if zs is None:
        return None
    if check_natural:
        bad = natural_violations(E, q, zs)
        if bad:
            raise NaturalnessViolated(f"naturalness fails at step(s) {[k + 1 for k in bad]}")
    u = E.universe
    names = lambda m: tuple(u.names_of(m))  # noqa: E731
    X_all = Z_all = 0
    for X in q.controls:
        X_all |= X
    for Z in zs:
        Z_all |= Z
    factors = [prob(names(q.W | q.Y), names(X_all | Z_all))]
    before = 0
    for X, Z in zip(q.controls, zs):
        if Z:
            factors.append(prob(names(Z), names(before)))
        before |= X | Z
    if chosen is not None:
        chosen.extend(zs)
    return summation(names(Z_all), product(*factors))
