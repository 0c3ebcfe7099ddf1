"""Text formats: model files, DAG edge lists and dot export.

Model file, one directive per line (``#`` starts a comment)::

    vars: a b c d
    axioms: graphoid
    context-var: aux = 0 1
    regime: on
    symmetry: off
    triplet: a b ; c | d @ aux=0
    elem: a ; c | b d

Names inside a triplet are separated by spaces or commas; ``-`` or ``∅``
denotes an empty set.  ``regime: on`` adds one ``F_<v>`` indicator with
domain {obs, int} per variable.  ``symmetry: off`` selects the directed
closure.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..core import AxiomLevel, ElementaryModel, ElementaryTriplet, Triplet, Universe, validate
from ..errors import InvalidTriplet, ModelSyntaxError, UnknownVariable

EMPTY = {"-", "∅"}


@dataclass
class ModelText:
    universe: Universe
    level: AxiomLevel
    triplets: list = field(default_factory=list)
    elems: list = field(default_factory=list)
    symmetric: bool = True
    regime: bool = False

    def to_model(self, close=True, budget=None) -> ElementaryModel:
        from ..closure import close_elementary, expand_e

        seeds = set(expand_e(self.triplets, self.universe, self.symmetric))
        seeds |= set(self.elems)
        E = ElementaryModel.build(self.universe, self.level, seeds, False, self.symmetric)
        return close_elementary(E, budget=budget) if close else E


def _names(text):
    parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
    return [] if parts in ([], ["-"], ["∅"]) else parts


def parse_triplet(text: str, u: Universe, lineno: int = 0) -> Triplet:
    body, _, ctx = text.partition("@")
    if ";" not in body or "|" not in body:
        raise ModelSyntaxError("triplet needs the form 'I ; J | K'", lineno)
    left, _, cond = body.partition("|")
    I, _, J = left.partition(";")
    bindings = {}
    for item in filter(None, (s.strip() for s in ctx.split(","))):
        if "=" not in item:
            raise ModelSyntaxError(f"context binding {item!r} needs 'name=value'", lineno)
        k, _, v = item.partition("=")
        bindings[k.strip()] = v.strip()
    try:
        t = Triplet(u.mask(_names(I)), u.mask(_names(J)), u.mask(_names(cond)), u.context(bindings))
        validate(t, u)
    except (InvalidTriplet, UnknownVariable) as exc:
        if not lineno:
            raise
        raise type(exc)(f"line {lineno}: {exc}") from None
    return t


def format_set(u: Universe, mask: int) -> str:
    names = u.names_of(mask)
    return " ".join(names) if names else "-"


def format_triplet(t, u: Universe) -> str:
    if isinstance(t, ElementaryTriplet):
        t = t.as_triplet()
    s = f"{format_set(u, t.I)} ; {format_set(u, t.J)} | {format_set(u, t.K)}"
    if t.C:
        s += " @ " + ",".join(f"{u.names[k]}={v}" for k, v in t.C)
    return s


def parse_model(text: str) -> ModelText:
    names = None
    level = None
    contexts: dict = {}
    regime = False
    symmetric = True
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ModelSyntaxError(f"expected 'directive: ...', got {line!r}", lineno)
        key = key.strip().lower()
        rest = rest.strip()
        if key == "vars":
            names = _names(rest)
        elif key == "axioms":
            try:
                level = AxiomLevel.parse(rest)
            except ValueError as exc:
                raise ModelSyntaxError(str(exc), lineno) from None
        elif key == "context-var":
            name, eq, dom = rest.partition("=")
            if not eq or not _names(dom):
                raise ModelSyntaxError("context-var needs 'name = v1 v2 ...'", lineno)
            contexts[name.strip()] = _names(dom)
        elif key == "regime":
            regime = _flag(rest, lineno)
        elif key == "symmetry":
            symmetric = _flag(rest, lineno)
        elif key in ("triplet", "elem"):
            body.append((key, rest, lineno))
        else:
            raise ModelSyntaxError(f"unknown directive {key!r}", lineno)
    if names is None:
        raise ModelSyntaxError("missing 'vars:' declaration", 0)
    if regime:
        from ..causal.regime import regime_universe

        base = regime_universe(names)
        u = Universe(
            base.names + tuple(contexts),
            base.kinds + ("context",) * len(contexts),
            base.domains + tuple(tuple(d) for d in contexts.values()),
        )
    else:
        u = Universe.of(names, contexts)
    out = ModelText(u, level or AxiomLevel.SEMIGRAPHOID, symmetric=symmetric, regime=regime)
    for key, rest, lineno in body:
        t = parse_triplet(rest, u, lineno)
        if key == "elem":
            if not t.is_elementary():
                raise ModelSyntaxError("elem: lines need single variables on both sides", lineno)
            out.elems.append(
                ElementaryTriplet(t.I.bit_length() - 1, t.J.bit_length() - 1, t.K, t.C)
            )
        else:
            out.triplets.append(t)
    return out


def _flag(text, lineno):
    v = text.strip().lower()
    if v in ("on", "yes", "true", "1"):
        return True
    if v in ("off", "no", "false", "0"):
        return False
    raise ModelSyntaxError(f"expected on/off, got {text!r}", lineno)


def serialize_model(
    u: Universe,
    level,
    triplets=(),
    elems=(),
    symmetric=True,
    regime=False,
) -> str:
    """Canonical text: header, then sorted triplet and elem lines."""
    level = AxiomLevel.parse(level)
    lines = []
    if regime:
        n = sum(1 for k in u.kinds if k == "base")
        base = u.names[:n]
        extra = [k for k in range(2 * n, len(u))]
    else:
        base = [u.names[k] for k in range(len(u)) if not u.is_context(k)]
        extra = [k for k in range(len(u)) if u.is_context(k)]
    lines.append("vars: " + " ".join(base))
    lines.append(f"axioms: {level.label}")
    for k in extra:
        lines.append(f"context-var: {u.names[k]} = {' '.join(u.domains[k])}")
    if regime:
        lines.append("regime: on")
    if not symmetric:
        lines.append("symmetry: off")
    for t in sorted({Triplet(*t) for t in triplets}):
        lines.append("triplet: " + format_triplet(t, u))
    for t in sorted({ElementaryTriplet(*t) for t in elems}):
        lines.append("elem: " + format_triplet(t, u))
    return "\n".join(lines) + "\n"


def serialize_elementary(E: ElementaryModel, regime=False) -> str:
    return serialize_model(E.universe, E.level, (), E.triplets, E.symmetric, regime)


def load_model(path) -> ModelText:
    return parse_model(Path(path).read_text(encoding="utf-8"))


# DAG edge lists ---------------------------------------------------------------


def parse_dag(text: str):
    """``a -> b`` per line, plus optional ``node:`` and ``latent:`` lines."""
    from ..graphmap import Dag

    order: list = []
    latent: list = []
    edges = []

    def note(n):
        if n not in order:
            order.append(n)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            chain = [p.strip() for p in line.split("->")]
            if any(not p or len(p.split()) != 1 for p in chain):
                raise ModelSyntaxError(f"bad edge line {line!r}", lineno)
            for a, b in zip(chain, chain[1:]):
                note(a)
                note(b)
                edges.append((a, b))
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if sep and key in ("node", "nodes"):
            for n in _names(rest):
                note(n)
        elif sep and key == "latent":
            for n in _names(rest):
                note(n)
                latent.append(n)
        else:
            raise ModelSyntaxError(f"unrecognized line {line!r}", lineno)
    return Dag.from_edges(order, edges, latent)


def format_dag(G) -> str:
    lines = ["node: " + " ".join(G.names)]
    if G.latent:
        lines.append("latent: " + " ".join(G.names[k] for k in range(len(G)) if G.latent >> k & 1))
    for a, b in sorted(G.edges()):
        lines.append(f"{G.names[a]} -> {G.names[b]}")
    return "\n".join(lines) + "\n"


def load_dag(path):
    return parse_dag(Path(path).read_text(encoding="utf-8"))


def _q(s):
    return '"' + str(s).replace('"', '\\"') + '"'


def dag_to_dot(G, name="G") -> str:
    lines = [f"digraph {name} {{"]
    for k, n in enumerate(G.names):
        style = " [style=dashed]" if G.latent >> k & 1 else ""
        lines.append(f"  {_q(n)}{style};")
    for a, b in sorted(G.edges()):
        lines.append(f"  {_q(G.names[a])} -> {_q(G.names[b])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def grid_dag_to_dot(G, u: Universe, half="full", name="E") -> str:
    """Solid and dashed edges as in the grid view; mirror nodes drawn grey."""
    nodes = G.node_set(half)

    def label(t):
        k = " ".join(u.names_of(t.K)) or "∅"
        s = f"{u.names[t.i]} ⟂ {u.names[t.j]} | {k}"
        if t.C:
            s += " @ " + ",".join(f"{u.names[c]}={v}" for c, v in t.C)
        return s

    lines = [f"digraph {name} {{"]
    for t in sorted(nodes):
        extra = "" if G.canonical[t] else ", color=grey"
        lines.append(f"  {_q(label(t))} [shape=box{extra}];")
    for a, b in G.solid:
        if a in nodes and b in nodes:
            lines.append(f"  {_q(label(a))} -> {_q(label(b))};")
    for a, b in G.dashed:
        if a in nodes and b in nodes:
            lines.append(f"  {_q(label(a))} -> {_q(label(b))} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
