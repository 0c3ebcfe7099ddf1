"""DAGs over base variables: d-separation, induced models, minimal I-maps and perfect maps."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from .closure import close_set, expand_e
from .core import (
    AxiomLevel,
    ElementaryModel,
    ElementaryTriplet,
    Triplet,
    Universe,
    bits,
    members,
    popcount,
    subsets,
)
from .errors import CycleError, InvalidSets, NotClosed, TableMismatch, UniverseTooLarge

PM_NODE_LIMIT = 8


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph; ``parents[v]`` is a bit mask over node indices.

    ``latent`` marks unobserved nodes: they take part in d-separation but are
    left out of induced models and observational tables.
    """

    names: tuple
    parents: tuple
    latent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))
        if len(self.names) != len(self.parents):
            raise ValueError("one parent mask per node")
        if len(set(self.names)) != len(self.names):
            raise ValueError("node names must be unique")
        for v, pa in enumerate(self.parents):
            if pa >> len(self.names) or pa >> v & 1:
                raise ValueError(f"bad parent mask for {self.names[v]!r}")
        self.topological_order()  # raises CycleError

    @classmethod
    def from_edges(cls, names: Sequence[str], edges: Iterable[tuple[str, str]], latent=()):
        names = list(names)
        idx = {n: k for k, n in enumerate(names)}
        parents = [0] * len(names)
        for a, b in edges:
            parents[idx[b]] |= 1 << idx[a]
        return cls(tuple(names), tuple(parents), bits(idx[n] for n in latent))

    def __len__(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def mask(self, names) -> int:
        if isinstance(names, str):
            names = names.split()
        return bits(self.index(n) for n in names)

    @property
    def universe(self) -> Universe:
        return Universe.of(self.names)

    @property
    def observed(self) -> int:
        return ((1 << len(self)) - 1) & ~self.latent

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for b, pa in enumerate(self.parents) for a in members(pa)]

    def n_edges(self) -> int:
        return sum(popcount(p) for p in self.parents)

    def children(self, v) -> int:
        return bits(c for c, pa in enumerate(self.parents) if pa >> v & 1)

    def ancestors(self, mask: int) -> int:
        """``mask`` together with all its ancestors."""
        out = mask
        frontier = mask
        while frontier:
            nxt = 0
            for v in members(frontier):
                nxt |= self.parents[v]
            frontier = nxt & ~out
            out |= nxt
        return out

    def topological_order(self) -> list[int]:
        n = len(self.names)
        indeg = [popcount(p) for p in self.parents]
        ready = [v for v in range(n) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for c in range(n):
                if self.parents[c] >> v & 1:
                    indeg[c] -= 1
                    if indeg[c] == 0:
                        ready.append(c)
        if len(order) != n:
            raise CycleError("graph has a directed cycle")
        return order

    def with_parents(self, v, mask) -> "Dag":
        ps = list(self.parents)
        ps[v] = mask
        return Dag(self.names, tuple(ps), self.latent)


def d_separated(G: Dag, I: int, J: int, K: int) -> bool:
    """Reachability (Bayes-ball) test for I ⟂ J | K in G."""
    if I & J or I & K or J & K:
        raise InvalidSets("I, J and K must be pairwise disjoint")
    return not (_reachable(G, I, K) & J)


def _reachable(G: Dag, source: int, K: int) -> int:
    """Nodes connected to ``source`` by an active trail given K."""
    anc = G.ancestors(K)
    children = [G.children(v) for v in range(len(G))]
    # direction: True = arrived from a child (moving up), False = from a parent
    stack = [(v, True) for v in members(source)]
    seen = set()
    reach = 0
    while stack:
        v, up = stack.pop()
        if (v, up) in seen:
            continue
        seen.add((v, up))
        in_k = K >> v & 1
        if not in_k:
            reach |= 1 << v
        if up and not in_k:
            for p in members(G.parents[v]):
                stack.append((p, True))
            for c in members(children[v]):
                stack.append((c, False))
        elif not up:
            if not in_k:
                for c in members(children[v]):
                    stack.append((c, False))
            if anc >> v & 1:
                for p in members(G.parents[v]):
                    stack.append((p, True))
    return reach


def d_separated_oracle(G: Dag, I: int, J: int, K: int) -> bool:
    """Enumerate every simple path and check it directly; small graphs only."""
    n = len(G)
    anc_k = G.ancestors(K)
    nbrs = [G.parents[v] | G.children(v) for v in range(n)]

    def active(path):
        for a, b, c in zip(path, path[1:], path[2:]):
            collider = G.parents[b] >> a & 1 and G.parents[b] >> c & 1
            if collider:
                if not anc_k >> b & 1:
                    return False
            elif K >> b & 1:
                return False
        return True

    def walk(path, used, target):
        v = path[-1]
        if v == target:
            return active(path)
        for w in members(nbrs[v] & ~used):
            if walk(path + [w], used | (1 << w), target):
                return True
        return False

    for i in members(I):
        for j in members(J):
            if walk([i], 1 << i, j):
                return False
    return True


def induced_elementary_model(G: Dag, level=AxiomLevel.COMPOSITIONAL) -> ElementaryModel:
    """All i ⟂ j | K (observed variables only) that hold by d-separation."""
    obs = members(G.observed)
    out = set()
    for a, i in enumerate(obs):
        for j in obs[a + 1:]:
            rest = G.observed & ~(1 << i) & ~(1 << j)
            for K in subsets(rest):
                if d_separated(G, 1 << i, 1 << j, K):
                    out.add(ElementaryTriplet(i, j, K))
    return ElementaryModel(G.universe, level, frozenset(out), True, True)


def _holds(E, a, b, K):
    return ElementaryTriplet(a, b, K) in E


def all_pa(E: ElementaryModel, i: int, X: int) -> list[int]:
    """Every Y ⊆ X reached by a longest chain i ⟂ j_1 | X∖j_1..j_n → … → i ⟂ j_n | X∖j_n.

    Returns the candidate parent sets X∖{j_1..j_n} ordered by size then mask,
    or ``[X]`` when no chain exists.
    """
    if not E.closed:
        raise NotClosed("all_pa needs a closed model")
    if X >> i & 1:
        raise InvalidSets("i must not be in X")

    def ok(j, removed):
        cond = X & ~removed & ~(1 << j)
        return _holds(E, i, j, cond) or _holds(E, j, i, cond)

    found = set()
    seen = set()
    stack = [1 << j for j in members(X) if ok(j, 0)]
    while stack:
        S = stack.pop()
        if S in seen:
            continue
        seen.add(S)
        grown = False
        for j in members(X & ~S):
            if ok(j, S):
                grown = True
                stack.append(S | (1 << j))
        if not grown:
            found.add(X & ~S)
    if not found:
        return [X]
    return sorted(found, key=lambda m: (popcount(m), m))


def build_mim(E: ElementaryModel, ordering: Sequence[int]) -> Dag:
    """Minimal independence map of E relative to ``ordering``."""
    if not E.closed:
        raise NotClosed("build_mim needs a closed model")
    n = len(E.universe)
    if sorted(ordering) != list(range(n)):
        raise InvalidSets("ordering must be a permutation of the universe")
    parents = [0] * n
    before = 0
    for v in ordering:
        parents[v] = all_pa(E, v, before)[0]
        before |= 1 << v
    return Dag(E.universe.names, tuple(parents))


def _marked_triplets(i, visited, pa):
    rest = visited & ~pa
    if not rest:
        return set()
    t = Triplet(1 << i, rest, pa)
    return expand_e([t, t.mirror()], symmetric=False)


def has_perfect_map(E: ElementaryModel, limit: int = PM_NODE_LIMIT):
    """Search orderings and parent sets for a perfect map of E.

    Returns ``(ordering, dag)`` or ``None``.  Failed (Visited, Marked)
    states are remembered so each is explored once.
    """
    if not E.closed:
        raise NotClosed("has_perfect_map needs a closed model")
    n = len(E.universe)
    if n > limit:
        raise UniverseTooLarge(f"perfect-map search is limited to {limit} variables")
    full = (1 << n) - 1
    target = set(E.triplets)
    failed = set()

    def matches(marked):
        closed = close_set(marked, AxiomLevel.SEMIGRAPHOID, symmetric=True, n_vars=n)
        return closed == target

    def search(visited, marked, order, parents):
        if visited == full:
            return matches(marked)
        key = (visited, marked)
        if key in failed:
            return False
        for i in members(full & ~visited):
            for pa in all_pa(E, i, visited):
                extra = _marked_triplets(i, visited, pa)
                order.append(i)
                parents[i] = pa
                if search(visited | (1 << i), marked | frozenset(extra), order, parents):
                    return True
                order.pop()
                parents[i] = 0
        failed.add(key)
        return False

    order: list[int] = []
    parents = [0] * n
    if search(0, frozenset(), order, parents):
        return tuple(order), Dag(E.universe.names, tuple(parents))
    return None


def all_dags(n: int):
    """Every DAG over n labelled nodes as a tuple of parent masks (small n)."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    seen = set()
    for perm in permutations(range(n)):
        rank = {v: r for r, v in enumerate(perm)}
        for choice in range(1 << len(pairs)):
            ps = [0] * n
            for k, (a, b) in enumerate(pairs):
                if choice >> k & 1:
                    u, v = (a, b) if rank[a] < rank[b] else (b, a)
                    ps[v] |= 1 << u
            key = tuple(ps)
            if key not in seen:
                seen.add(key)
                yield key


def verify_factorization(G: Dag, table, eps: float = 1e-9) -> bool:
    """Whether p(V) equals the product of p(v | Pa(v)) pointwise within eps."""
    import numpy as np

    if list(table.variables) != list(G.names):
        raise TableMismatch("table variables must match the DAG's nodes in order")
    p = table.array
    n = len(G)
    prod = np.ones_like(p)
    for v in range(n):
        fam = G.parents[v] | (1 << v)
        drop = tuple(k for k in range(n) if not fam >> k & 1)
        joint = p.sum(axis=drop, keepdims=True) if drop else p
        pa_drop = tuple(sorted(drop + (v,)))
        marg = p.sum(axis=pa_drop, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = np.where(marg > 0, joint / np.where(marg > 0, marg, 1), 0.0)
        prod = prod * cond
    return bool(np.all(np.abs(prod - p) <= eps))


def random_dag(n: int, p: float = 0.4, rng: random.Random | None = None, names=None) -> Dag:
    """Random DAG: each pair in a random order is joined with probability p."""
    rng = rng or random.Random()
    order = list(range(n))
    rng.shuffle(order)
    parents = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                parents[order[b]] |= 1 << order[a]
    names = names or [f"v{k}" for k in range(n)]
    return Dag(tuple(names), tuple(parents))
