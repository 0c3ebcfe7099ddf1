"""Regime indicators, regime-aware independence checks and the do-calculus rules.

A regime universe lists the base variables V first and then one context
variable ``F_v`` per base variable, at index ``len(V) + v``, with domain
{obs, int}.  Statements follow the usual shortcut: every regime indicator
that does not appear in the triplet itself is bound in the context, to
``int`` for intervened variables and ``obs`` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import AxiomLevel, ElementaryTriplet, Universe, bits, make_context, members, subsets
from ..errors import AuxNameCollision, InvalidSets
from ..graphmap import Dag, d_separated
from ..query import is_member

OBS = "obs"
INT = "int"
F_PREFIX = "F_"


def regime_universe(base) -> Universe:
    """Base variables followed by one regime indicator each."""
    names = tuple(base.names if isinstance(base, Universe) else base)
    fnames = tuple(F_PREFIX + n for n in names)
    clash = set(fnames) & set(names)
    if clash:
        raise AuxNameCollision(f"regime indicator names collide: {sorted(clash)}")
    return Universe.of(names, {f: (OBS, INT) for f in fnames})


def n_base(u: Universe) -> int:
    return len(u) // 2


def f_mask(u: Universe, X: int) -> int:
    """Indices of F_x for x in X."""
    return X << n_base(u)


def regime_context(u: Universe, intervened: int, free: int = 0) -> tuple:
    """Bind every regime indicator not in ``free`` (int on ``intervened``)."""
    n = n_base(u)
    out = []
    for v in range(n):
        k = n + v
        if free >> k & 1:
            continue
        out.append((k, INT if intervened >> v & 1 else OBS))
    return make_context(out)


def tci(E, I: int, J: int, K: int = 0, intervened: int = 0) -> bool:
    """I ⟂ J | K with the listed interventions and every other variable observed.

    Sides that are empty hold vacuously.
    """
    if not I or not J:
        return True
    if I & J or I & K or J & K:
        raise InvalidSets("I, J and K must be pairwise disjoint")
    C = regime_context(E.universe, intervened, I | J | K)
    return is_member(E, I, J, K, C)


@dataclass
class RegimeModel:
    """Elementary model over a regime universe answered lazily from a DAG.

    ``t in model`` decides i ⟂ j | K under context C by d-separation in the
    graph with F_v → v added for every observed v; each F_v bound to int
    cuts the other edges into v, and bound indicators are conditioned on.
    Answers are cached.  The represented model is a compositional graphoid
    in every context stratum.
    """

    dag: Dag
    universe: Universe = None
    level: AxiomLevel = AxiomLevel.COMPOSITIONAL
    closed: bool = True
    symmetric: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        obs = members(self.dag.observed)
        self._obs = obs
        base_names = [self.dag.names[v] for v in obs]
        if self.universe is None:
            self.universe = regime_universe(base_names)
        self._n = len(obs)
        # graph indices: dag nodes first, then one F node per observed var
        self._graph_of = {k: v for k, v in enumerate(obs)}
        self._cut_cache = {}

    def _node(self, k):
        n = self._n
        if k < n:
            return self._graph_of[k]
        return len(self.dag) + (k - n)

    def _augmented(self, cut: int) -> Dag:
        if cut in self._cut_cache:
            return self._cut_cache[cut]
        m = len(self.dag)
        parents = list(self.dag.parents) + [0] * self._n
        for k, v in enumerate(self._obs):
            f = m + k
            parents[v] = (1 << f) | (0 if cut >> k & 1 else parents[v])
        names = self.dag.names + tuple(self.universe.names[self._n:])
        g = Dag(names, tuple(parents), self.dag.latent)
        self._cut_cache[cut] = g
        return g

    def _mask(self, m):
        return bits(self._node(k) for k in members(m))

    def __contains__(self, t) -> bool:
        t = ElementaryTriplet(*t)
        key = (min(t.i, t.j), max(t.i, t.j), t.K, t.C)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        cut = 0
        bound = 0
        for k, val in t.C:
            bound |= 1 << k
            if val == INT:
                cut |= 1 << (k - self._n)
        g = self._augmented(cut)
        ans = d_separated(g, self._mask(1 << t.i), self._mask(1 << t.j), self._mask(t.K | bound))
        self._cache[key] = ans
        return ans

    def materialize(self, limit: int = 4):
        """All member triplets as a plain ElementaryModel (tiny universes only)."""
        from ..core import ElementaryModel
        from ..errors import UniverseTooLarge

        n = self._n
        if n > limit:
            raise UniverseTooLarge(f"materialize is limited to {limit} base variables")
        out = set()
        for code in range(3 ** n):
            free = bound_int = 0
            c = code
            for v in range(n):
                r = c % 3
                c //= 3
                if r == 0:
                    free |= 1 << (n + v)
                elif r == 2:
                    bound_int |= 1 << v
            C = regime_context(self.universe, bound_int, free)
            allowed = ((1 << n) - 1) | free
            idx = members(allowed)
            for a, i in enumerate(idx):
                for j in idx[a + 1:]:
                    for K in subsets(allowed & ~(1 << i) & ~(1 << j)):
                        if ElementaryTriplet(i, j, K, C) in self:
                            out.add(ElementaryTriplet(i, j, K, C))
        return ElementaryModel(self.universe, self.level, frozenset(out), True, True)


@dataclass(frozen=True)
class Term:
    """p̃(Y | I_S C): targets under interventions S and conditioners C."""

    targets: int
    intervened: int
    given: int

    def text(self, u: Universe) -> str:
        parts = [f"do({','.join(u.names_of(self.intervened))})"] if self.intervened else []
        parts += u.names_of(self.given)
        t = ",".join(u.names_of(self.targets))
        return f"p~({t}|{','.join(parts)})" if parts else f"p~({t})"


@dataclass(frozen=True)
class Rewrite:
    rule: int
    before: Term
    after: Term

    def text(self, u: Universe) -> str:
        return f"{self.before.text(u)} = {self.after.text(u)}"


def _check_disjoint(*sets):
    seen = 0
    for s in sets:
        if seen & s:
            raise InvalidSets("X, Y, W and Z must be pairwise disjoint")
        seen |= s


def apply_rule(rule: int, E, X: int, Y: int, W: int = 0, Z: int = 0):
    """Check one do-calculus rule's antecedent and return its rewrite (or None)."""
    _check_disjoint(X, Y, W, Z)
    if not Y:
        raise InvalidSets("Y must be nonempty")
    u = E.universe
    if rule == 1:
        if tci(E, Y, X, W | Z, intervened=Z):
            return Rewrite(1, Term(Y, Z, X | W | Z), Term(Y, Z, W | Z))
        return None
    if rule == 2:
        if tci(E, Y, f_mask(u, X), X | W | Z, intervened=Z):
            return Rewrite(2, Term(Y, X | Z, X | W | Z), Term(Y, Z, X | W | Z))
        return None
    if rule == 3:
        if tci(E, Y, X, W | Z, intervened=X | Z) and tci(E, Y, f_mask(u, X), W | Z, intervened=Z):
            return Rewrite(3, Term(Y, X | Z, X | W | Z), Term(Y, Z, W | Z))
        return None
    raise InvalidSets(f"unknown rule {rule!r}")
