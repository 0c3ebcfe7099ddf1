"""Variable universes, triplets and elementary models.

Variable sets are plain ``int`` bit masks over universe indices (bit ``k`` set
means variable ``k`` is in the set).  Contexts are sorted tuples of
``(index, value)`` pairs so that they hash and compare by exact binding
equality.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import (
    ContextClash,
    EmptySide,
    Incomparable,
    IndexOutOfRange,
    OverlappingSets,
    UniverseMismatch,
    UnknownVariable,
)

CAPACITY = 128

VarSet = int
Context = tuple  # tuple[tuple[int, str], ...], sorted by index

BASE = "base"
CONTEXT = "context"


def bits(indices: Iterable[int]) -> VarSet:
    m = 0
    for k in indices:
        m |= 1 << k
    return m


def members(mask: VarSet) -> list[int]:
    """Indices set in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: VarSet) -> int:
    return bin(mask).count("1")


def subsets(mask: VarSet) -> Iterator[VarSet]:
    """All submasks of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_by_size(mask: VarSet) -> list[VarSet]:
    """Submasks ordered by cardinality, then by integer value."""
    return sorted(subsets(mask), key=lambda s: (popcount(s), s))


def make_context(bindings: Mapping[int, str] | Iterable[tuple[int, str]] = ()) -> Context:
    if isinstance(bindings, Mapping):
        bindings = bindings.items()
    return tuple(sorted((int(k), str(v)) for k, v in bindings))


def context_keys(c: Context) -> VarSet:
    return bits(k for k, _ in c)


class AxiomLevel(enum.IntEnum):
    SEMIGRAPHOID = 1
    GRAPHOID = 2
    COMPOSITIONAL = 3

    @classmethod
    def parse(cls, text: str | "AxiomLevel") -> "AxiomLevel":
        if isinstance(text, AxiomLevel):
            return text
        key = str(text).strip().lower()
        aliases = {
            "semigraphoid": cls.SEMIGRAPHOID,
            "ci0-1": cls.SEMIGRAPHOID,
            "1": cls.SEMIGRAPHOID,
            "graphoid": cls.GRAPHOID,
            "ci0-2": cls.GRAPHOID,
            "2": cls.GRAPHOID,
            "compositional": cls.COMPOSITIONAL,
            "compositional-graphoid": cls.COMPOSITIONAL,
            "ci0-3": cls.COMPOSITIONAL,
            "3": cls.COMPOSITIONAL,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown axiom level {text!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class Universe:
    """Ordered variables; context variables carry a finite value domain."""

    names: tuple[str, ...]
    kinds: tuple[str, ...] = ()
    domains: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        kinds = tuple(self.kinds) or (BASE,) * len(names)
        domains = tuple(tuple(d) for d in self.domains) or ((),) * len(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if len(names) > CAPACITY:
            raise IndexOutOfRange(f"universe exceeds {CAPACITY} slots")
        if len(kinds) != len(names) or len(domains) != len(names):
            raise ValueError("names, kinds and domains must have equal length")
        for name, kind, dom in zip(names, kinds, domains):
            if kind not in (BASE, CONTEXT):
                raise ValueError(f"bad kind {kind!r}")
            if kind == CONTEXT and not dom:
                raise ValueError(f"context variable {name!r} needs a domain")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "_index", {n: k for k, n in enumerate(names)})

    @classmethod
    def of(cls, names: Iterable[str], contexts: Mapping[str, Iterable[str]] | None = None) -> "Universe":
        names = [str(n) for n in names]
        kinds = [BASE] * len(names)
        domains: list[tuple[str, ...]] = [()] * len(names)
        for cname, dom in (contexts or {}).items():
            names.append(str(cname))
            kinds.append(CONTEXT)
            domains.append(tuple(str(v) for v in dom))
        return cls(tuple(names), tuple(kinds), tuple(domains))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def mask(self, names: Iterable[str]) -> VarSet:
        if isinstance(names, str):
            names = names.split()
        return bits(self.index(n) for n in names)

    def names_of(self, mask: VarSet) -> list[str]:
        return [self.names[k] for k in members(mask)]

    @property
    def full_mask(self) -> VarSet:
        return (1 << len(self.names)) - 1

    @property
    def base_mask(self) -> VarSet:
        return bits(k for k, kind in enumerate(self.kinds) if kind == BASE)

    @property
    def context_mask(self) -> VarSet:
        return bits(k for k, kind in enumerate(self.kinds) if kind == CONTEXT)

    def is_context(self, k: int) -> bool:
        return self.kinds[k] == CONTEXT

    def context(self, bindings: Mapping[str, str] | None = None) -> Context:
        return make_context({self.index(n): v for n, v in (bindings or {}).items()})

    def with_context_var(self, name: str, domain: Iterable[str]) -> "Universe":
        return Universe(
            self.names + (name,), self.kinds + (CONTEXT,), self.domains + (tuple(domain),)
        )


class Triplet(NamedTuple):
    """``I ⟂ J | K`` under context ``C``."""

    I: VarSet
    J: VarSet
    K: VarSet
    C: Context = ()

    def mirror(self) -> "Triplet":
        return Triplet(self.J, self.I, self.K, self.C)

    def is_elementary(self) -> bool:
        return popcount(self.I) == 1 and popcount(self.J) == 1


class ElementaryTriplet(NamedTuple):
    """``i ⟂ j | K`` under context ``C``."""

    i: int
    j: int
    K: VarSet
    C: Context = ()

    def mirror(self) -> "ElementaryTriplet":
        return ElementaryTriplet(self.j, self.i, self.K, self.C)

    def as_triplet(self) -> Triplet:
        return Triplet(1 << self.i, 1 << self.j, self.K, self.C)


def canonicalize(t: ElementaryTriplet) -> ElementaryTriplet:
    if t.i > t.j:
        return ElementaryTriplet(t.j, t.i, t.K, t.C)
    return t


def dominates(t: Triplet, t2: Triplet) -> bool:
    """Whether ``t`` dominates ``t2``: I'⊆I, J'⊆J and K ⊆ K' ⊆ (I∖I')(J∖J')K."""
    if t.C != t2.C:
        raise Incomparable("triplets carry different contexts")
    if t2.I & ~t.I or t2.J & ~t.J:
        return False
    window = (t.I & ~t2.I) | (t.J & ~t2.J) | t.K
    return (t.K & ~t2.K) == 0 and (t2.K & ~window) == 0


def validate(t: Triplet | ElementaryTriplet, u: Universe) -> None:
    if isinstance(t, ElementaryTriplet):
        if t.i == t.j:
            raise OverlappingSets(f"elementary triplet repeats variable {t.i}")
        t = t.as_triplet()
    I, J, K, C = t
    if I < 0 or J < 0 or K < 0:
        raise IndexOutOfRange("negative mask")
    if not I or not J:
        raise EmptySide("I and J must be nonempty")
    full = u.full_mask
    if (I | J | K) & ~full:
        raise IndexOutOfRange("variable index beyond the universe")
    if I & J or I & K or J & K:
        raise OverlappingSets("I, J and K must be pairwise disjoint")
    seen = set()
    for k, v in C:
        if not 0 <= k < len(u):
            raise IndexOutOfRange(f"context key {k} beyond the universe")
        if k in seen:
            raise ContextClash(f"context binds {u.names[k]!r} twice")
        seen.add(k)
        if not u.is_context(k):
            raise ContextClash(f"{u.names[k]!r} is not a context variable")
        if v not in u.domains[k]:
            raise ContextClash(f"value {v!r} outside the domain of {u.names[k]!r}")
    if context_keys(C) & (I | J | K):
        raise ContextClash("context keys overlap the triplet's variables")


@dataclass(frozen=True)
class ElementaryModel:
    """A set of elementary triplets over a universe.

    With ``symmetric=True`` (the default) triplets are stored in canonical
    form ``i < j`` and each stored triplet stands for both ``i ⟂ j | K`` and
    ``j ⟂ i | K``.  With ``symmetric=False`` triplets are directed and
    symmetry is not assumed.
    """

    universe: Universe
    level: AxiomLevel
    triplets: frozenset = frozenset()
    closed: bool = False
    symmetric: bool = True

    def __post_init__(self):
        object.__setattr__(self, "level", AxiomLevel.parse(self.level))
        ts = frozenset(
            canonicalize(ElementaryTriplet(*t)) if self.symmetric else ElementaryTriplet(*t)
            for t in self.triplets
        )
        object.__setattr__(self, "triplets", ts)

    @classmethod
    def build(cls, universe, level, triplets=(), closed=False, symmetric=True, check=True):
        ts = [ElementaryTriplet(*t) for t in triplets]
        if check:
            for t in ts:
                validate(t, universe)
        return cls(universe, level, frozenset(ts), closed, symmetric)

    def __contains__(self, t) -> bool:
        t = ElementaryTriplet(*t)
        if self.symmetric and t.i > t.j:
            t = ElementaryTriplet(t.j, t.i, t.K, t.C)
        return t in self.triplets

    def __iter__(self):
        return iter(sorted(self.triplets))

    def __len__(self) -> int:
        return len(self.triplets)

    def statements(self) -> list[ElementaryTriplet]:
        """Every represented ``i ⟂ j | K``, both orientations when symmetric."""
        out = []
        for t in sorted(self.triplets):
            out.append(t)
            if self.symmetric:
                out.append(t.mirror())
        return out

    @property
    def n_statements(self) -> int:
        return len(self.triplets) * (2 if self.symmetric else 1)

    def contexts(self) -> set:
        return {t.C for t in self.triplets}

    def replace(self, **changes) -> "ElementaryModel":
        data = dict(
            universe=self.universe,
            level=self.level,
            triplets=self.triplets,
            closed=self.closed,
            symmetric=self.symmetric,
        )
        data.update(changes)
        return ElementaryModel(**data)

    def require_same_universe(self, other: "ElementaryModel") -> None:
        if self.universe != other.universe or self.symmetric != other.symmetric:
            raise UniverseMismatch("models live over different universes")
