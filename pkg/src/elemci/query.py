"""Membership, inclusion, dominant triplets and the grid view of a closed model."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .closure import enumerate_model
from .core import (
    AxiomLevel,
    ElementaryModel,
    ElementaryTriplet,
    Triplet,
    context_keys,
    dominates,
    members,
    subsets,
    validate,
)
from .errors import InvalidTriplet, LevelMismatch, NotClosed, UniverseMismatch


def _require_closed(E, what="this operation"):
    if not E.closed:
        raise NotClosed(f"{what} needs a closed model")


def is_member(E, I, J, K=0, C=(), method=None, check=True) -> bool:
    """Decide I ⟂ J | K (under context C) from the elementary triplets of E.

    ``method`` picks the membership variant (defaults to the model's axiom
    level): the ordered chain test for semigraphoids, the full-conditioning
    test for graphoids and the bare pairwise test for compositional graphoids.
    """
    _require_closed(E, "membership")
    if check:
        validate(Triplet(I, J, K, C), E.universe)
    level = AxiomLevel.parse(method or E.level)
    Is, Js = members(I), members(J)
    if level == AxiomLevel.SEMIGRAPHOID:
        head_i = 0
        for i in Is:
            head_j = 0
            for j in Js:
                if ElementaryTriplet(i, j, head_i | head_j | K, C) not in E:
                    return False
                head_j |= 1 << j
            head_i |= 1 << i
        return True
    if level == AxiomLevel.GRAPHOID:
        for i in Is:
            for j in Js:
                rest = (I & ~(1 << i)) | (J & ~(1 << j)) | K
                if ElementaryTriplet(i, j, rest, C) not in E:
                    return False
        return True
    for i in Is:
        for j in Js:
            if ElementaryTriplet(i, j, K, C) not in E:
                return False
    return True


def is_member_naive(E, I, J, K=0, C=()) -> bool:
    """m(E) membership straight from its definition: every window is checked."""
    for i in members(I):
        for j in members(J):
            free = (I & ~(1 << i)) | (J & ~(1 << j))
            for extra in subsets(free):
                if ElementaryTriplet(i, j, K | extra, C) not in E:
                    return False
    return True


def is_submodel(E: ElementaryModel, E2: ElementaryModel) -> bool:
    if E.universe != E2.universe or E.symmetric != E2.symmetric:
        raise UniverseMismatch("models live over different universes")
    if E.level != E2.level:
        raise LevelMismatch("models use different axiom levels")
    _require_closed(E, "inclusion")
    _require_closed(E2, "inclusion")
    return E.triplets <= E2.triplets


def dominant_triplets(E: ElementaryModel) -> set:
    """All dominant triplets of the model represented by E.

    For each conditioning set K carried by some elementary triplet, grow
    (I, J) pairs one variable at a time from the elementary seeds and keep
    the maximal members; then drop those for which some k ∈ K can be moved
    into I or J.
    """
    _require_closed(E, "dominant_triplets")
    groups = defaultdict(set)
    for t in E.statements():
        groups[(t.K, t.C)].add((1 << t.i, 1 << t.j))

    full = E.universe.full_mask
    found = set()
    for (K, C), seeds in groups.items():
        free = full & ~K & ~context_keys(C)
        seen = set()
        stack = list(seeds)
        while stack:
            pair = stack.pop()
            if pair in seen:
                continue
            seen.add(pair)
            I, J = pair
            grown = False
            for v in members(free & ~(I | J)):
                bv = 1 << v
                for nxt in ((I | bv, J), (I, J | bv)):
                    if is_member(E, nxt[0], nxt[1], K, C, check=False):
                        grown = True
                        if nxt not in seen:
                            stack.append(nxt)
            if grown:
                continue
            if _k_minimal(E, I, J, K, C):
                found.add(Triplet(I, J, K, C))
    return found


def _k_minimal(E, I, J, K, C):
    for k in members(K):
        bk = 1 << k
        rest = K & ~bk
        if is_member(E, I | bk, J, rest, C, check=False):
            return False
        if is_member(E, I, J | bk, rest, C, check=False):
            return False
    return True


def nonsymmetric(dominants) -> list:
    """One representative per {I ⟂ J | K, J ⟂ I | K}: the smaller I mask."""
    reps = set()
    for t in dominants:
        t = Triplet(*t)
        reps.add(t if t.I <= t.J else t.mirror())
    return sorted(reps)


def dominant_triplets_oracle(E: ElementaryModel) -> set:
    """Brute force: enumerate m(E) and keep the undominated members."""
    model = enumerate_model(E)
    by_ctx = defaultdict(list)
    for t in model:
        by_ctx[t.C].append(t)
    out = set()
    for group in by_ctx.values():
        for t2 in group:
            if not any(t != t2 and dominates(t, t2) for t in group):
                out.add(t2)
    return out


@dataclass
class GridDag:
    """Elementary triplets as nodes with solid and dashed edges.

    ``canonical[t]`` is True for the half with ``i < j``; mirrors of
    canonical nodes swap the two edge kinds.
    """

    nodes: list
    canonical: dict
    solid: list = field(default_factory=list)
    dashed: list = field(default_factory=list)

    def node_set(self, half="full"):
        if half == "canonical":
            return {t for t in self.nodes if self.canonical[t]}
        return set(self.nodes)


@dataclass(frozen=True)
class Grid:
    rows: tuple  # first elements a_1..a_m
    cols: tuple  # second elements b_1..b_n
    K: int
    C: tuple = ()

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def node(self, s, t) -> ElementaryTriplet:
        cond = self.K
        for a in self.rows[:s]:
            cond |= 1 << a
        for b in self.cols[:t]:
            cond |= 1 << b
        return ElementaryTriplet(self.rows[s], self.cols[t], cond, self.C)

    def nodes(self):
        m, n = self.shape
        return [[self.node(s, t) for t in range(n)] for s in range(m)]

    def node_set(self):
        return {v for row in self.nodes() for v in row}

    def triplet(self) -> Triplet:
        I = J = 0
        for a in self.rows:
            I |= 1 << a
        for b in self.cols:
            J |= 1 << b
        return Triplet(I, J, self.K, self.C)


def grid_dag(E: ElementaryModel) -> GridDag:
    _require_closed(E, "grid_dag")
    nodes = E.statements()
    present = set(nodes)
    by_first = defaultdict(set)
    by_second = defaultdict(set)
    for t in nodes:
        by_first[(t.i, t.K, t.C)].add(t.j)
        by_second[(t.j, t.K, t.C)].add(t.i)
    solid, dashed = [], []
    for t in nodes:
        # t = i ⟂ k | L  →  i ⟂ j | kL
        grown = t.K | (1 << t.j)
        for j in sorted(by_first.get((t.i, grown, t.C), ())):
            solid.append((t, ElementaryTriplet(t.i, j, grown, t.C)))
        # t = k ⟂ j | L  ⇢  i ⟂ j | kL
        grown = t.K | (1 << t.i)
        for i in sorted(by_second.get((t.j, grown, t.C), ())):
            dashed.append((t, ElementaryTriplet(i, t.j, grown, t.C)))
    assert all(a in present and b in present for a, b in solid + dashed)
    canonical = {t: t.i < t.j for t in nodes}
    return GridDag(nodes, canonical, solid, dashed)


def is_grid(G: GridDag, grid: Grid, half="full") -> bool:
    """Check node presence and every solid/dashed edge the grid requires."""
    nodes = G.node_set(half)
    solid, dashed = set(G.solid), set(G.dashed)
    m, n = grid.shape
    cells = grid.nodes()
    if len({v for row in cells for v in row}) != m * n:
        return False
    for s in range(m):
        for t in range(n):
            if cells[s][t] not in nodes:
                return False
            if t + 1 < n and (cells[s][t], cells[s][t + 1]) not in solid:
                return False
            if s + 1 < m and (cells[s][t], cells[s + 1][t]) not in dashed:
                return False
    return True


def maximal_grids(G: GridDag, half="canonical") -> list:
    """All grids of the DAG (restricted to ``half``) that no larger grid contains.

    Sub-grids of a grid are exactly its contiguous sub-rectangles, so a grid
    is maximal iff it cannot grow by one row or column on any side.
    """
    nodes = G.node_set(half)

    def has(a, b, K, C):
        return ElementaryTriplet(a, b, K, C) in nodes

    def mask(xs):
        m = 0
        for x in xs:
            m |= 1 << x
        return m

    def column_ok(rows, b, K, C):
        cond = K
        for a in rows:
            if not has(a, b, cond, C):
                return False
            cond |= 1 << a
        return True

    def row_ok(a, cols, K, C):
        cond = K
        for b in cols:
            if not has(a, b, cond, C):
                return False
            cond |= 1 << b
        return True

    candidates = set()
    for v in nodes:
        candidates |= {v.i, v.j}
        candidates |= set(members(v.K))

    seen = set()
    stack = [(((v.i,), (v.j,), v.K, v.C)) for v in nodes]
    result = []
    while stack:
        key = stack.pop()
        if key in seen:
            continue
        seen.add(key)
        rows, cols, K, C = key
        used = mask(rows) | mask(cols) | K | context_keys(C)
        all_rows, all_cols = mask(rows), mask(cols)
        extended = False
        for v in sorted(candidates):
            if used >> v & 1:
                continue
            # new last column
            if column_ok(rows, v, K | all_cols, C):
                extended = True
                stack.append((rows, cols + (v,), K, C))
            # new last row
            if row_ok(v, cols, K | all_rows, C):
                extended = True
                stack.append((rows + (v,), cols, K, C))
        if extended:
            continue
        for v in members(K):
            rest = K & ~(1 << v)
            if column_ok(rows, v, rest, C) or row_ok(v, cols, rest, C):
                extended = True
                break
        if not extended:
            result.append(Grid(rows, cols, K, C))
    return sorted(result, key=lambda g: (g.C, g.K, g.rows, g.cols))
