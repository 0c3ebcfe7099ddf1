"""Command-line driver: ``elemci <verb> [options]``."""
from __future__ import annotations

import argparse
import random
import sys

from ..closure import kernel_name
from ..core import AxiomLevel, ElementaryModel
from ..errors import ElemCIError
from .formats import (
    dag_to_dot,
    format_dag,
    format_set,
    format_triplet,
    grid_dag_to_dot,
    load_dag,
    load_model,
    parse_triplet,
    serialize_elementary,
)


class Out:
    """Human text by default; ``key=value`` lines with --machine."""

    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def kv(self, key, value, human=None):
        if self.machine:
            print(f"{key}={value}", file=self.stream)
        else:
            print(human if human is not None else f"{key}: {value}", file=self.stream)

    def text(self, line):
        if not self.machine:
            print(line, file=self.stream)


def _model(args, path=None) -> ElementaryModel:
    mt = load_model(path or args.input)
    if getattr(args, "axioms", None):
        mt.level = AxiomLevel.parse(args.axioms)
    if getattr(args, "seed", None) is not None:
        random.Random(args.seed).shuffle(mt.triplets)
    return mt.to_model(close=True, budget=getattr(args, "budget", None))


def _write(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def cmd_close(args, out):
    E = _model(args)
    out.kv("elementary", E.n_statements, f"elementary triplets: {E.n_statements}")
    out.kv("canonical", len(E), f"up to symmetry: {len(E)}")
    out.kv("axioms", E.level.label)
    out.kv("kernel", kernel_name())
    _write(args, serialize_elementary(E))
    return 0


def cmd_member(args, out):
    E = _model(args)
    t = parse_triplet(args.triplet, E.universe)
    from ..query import is_member

    ans = is_member(E, *t)
    out.kv("member", str(ans).lower(), f"{format_triplet(t, E.universe)}: {'yes' if ans else 'no'}")
    return 0


def cmd_dominant(args, out):
    from ..query import dominant_triplets, nonsymmetric

    E = _model(args)
    D = dominant_triplets(E)
    shown = sorted(D) if args.all else nonsymmetric(D)
    out.kv("dominant", len(D), f"dominant triplets: {len(D)}")
    out.kv("nonsymmetric", len(nonsymmetric(D)), f"non-symmetric: {len(nonsymmetric(D))}")
    for k, t in enumerate(shown):
        out.kv(f"triplet.{k}", format_triplet(t, E.universe), "  " + format_triplet(t, E.universe))
    return 0


def cmd_grids(args, out):
    from ..query import grid_dag, maximal_grids

    E = _model(args)
    G = grid_dag(E)
    half = "full" if args.full else "canonical"
    grids = maximal_grids(G, half)
    u = E.universe
    if args.dot:
        _write(args, grid_dag_to_dot(G, u, half))
    out.kv("nodes", len(G.node_set(half)), f"grid DAG nodes ({half}): {len(G.node_set(half))}")
    out.kv("grids", len(grids), f"maximal grids ({half}): {len(grids)}")
    for k, g in enumerate(grids):
        m, n = g.shape
        desc = f"{m}x{n} {format_triplet(g.triplet(), u)}  rows={' '.join(u.names[a] for a in g.rows)} cols={' '.join(u.names[b] for b in g.cols)}"
        out.kv(f"grid.{k}", desc, "  " + desc)
    return 0


def _ordering(E, text):
    u = E.universe
    if not text:
        return list(range(len(u)))
    return [u.index(n) for n in text.replace(",", " ").split()]


def cmd_mim(args, out):
    from ..graphmap import build_mim

    E = _model(args)
    G = build_mim(E, _ordering(E, args.ordering))
    text = dag_to_dot(G) if args.dot else format_dag(G)
    _write(args, text)
    out.kv("edges", G.n_edges(), f"edges: {G.n_edges()}")
    for a, b in sorted(G.edges()):
        out.kv("edge", f"{G.names[a]}->{G.names[b]}", f"  {G.names[a]} -> {G.names[b]}")
    return 0


def cmd_pm(args, out):
    from ..graphmap import has_perfect_map

    E = _model(args)
    found = has_perfect_map(E)
    if found is None:
        out.kv("perfect_map", "none", "no perfect map")
        return 0
    order, G = found
    out.kv("perfect_map", "found", "perfect map found")
    out.kv("ordering", " ".join(E.universe.names[v] for v in order))
    for a, b in sorted(G.edges()):
        out.kv("edge", f"{G.names[a]}->{G.names[b]}", f"  {G.names[a]} -> {G.names[b]}")
    _write(args, dag_to_dot(G) if args.dot else format_dag(G))
    return 0


def _report_model(out, E, label):
    out.kv(f"{label}.elementary", E.n_statements, f"{label}: {E.n_statements} elementary triplets")
    return 0


def cmd_intersect(args, out):
    from ..setops import intersect

    E = intersect(_model(args), _model(args, args.other))
    _write(args, serialize_elementary(E))
    return _report_model(out, E, "intersection")


def cmd_union(args, out):
    from ..setops import union_max_subset, union_min_superset, union_with_context

    E, E2 = _model(args), _model(args, args.other)
    op = {"context": union_with_context, "min": union_min_superset, "max": union_max_subset}[args.mode]
    U = op(E, E2)
    _write(args, serialize_elementary(U))
    return _report_model(out, U, f"union.{args.mode}")


def _regime_model(args):
    if args.dag:
        from ..causal import RegimeModel

        return RegimeModel(load_dag(args.dag))
    mt = load_model(args.input)
    if not mt.regime:
        raise ElemCIError("identification needs a model file with 'regime: on' or --dag")
    return mt.to_model(close=True)


def cmd_identify(args, out):
    from ..causal import identify

    E = _regime_model(args)
    u = E.universe
    mask = lambda s: u.mask((s or "").replace(",", " ").split())  # noqa: E731
    trace = []
    e = identify(E, mask(args.x), mask(args.y), mask(args.w), args.depth, trace)
    if e is None:
        out.kv("estimand", "none", "not identified by cases 1-4")
        return 0
    out.kv("estimand", str(e), str(e))
    for k, s in enumerate(trace):
        out.kv(f"step.{k}", f"case {s.case} Z={format_set(u, s.Z)}", f"  case {s.case} with Z = {format_set(u, s.Z)}")
    return 0


def cmd_plan(args, out):
    from ..causal import PlanQuery, evaluate_plan

    E = _regime_model(args)
    u = E.universe

    def masks(text):
        return tuple(u.mask([n for n in part.replace(",", " ").split() if n not in ("-", "∅")]) for part in text.split(";"))

    q = PlanQuery(masks(args.controls), masks(args.pools), masks(args.y)[0], masks(args.w or "-")[0])
    chosen = []
    e = evaluate_plan(E, q, check_natural=not args.assume_natural, chosen=chosen)
    if e is None:
        out.kv("estimand", "none", "no admissible Z sequence")
        return 0
    out.kv("estimand", str(e), str(e))
    out.kv("Z", ";".join(format_set(u, z) for z in chosen), "  Z = " + " ; ".join(format_set(u, z) for z in chosen))
    return 0


def cmd_from_table(args, out):
    from .extract import extract_model_from_table
    from .tables import load_table

    table = load_table(args.input, eps=args.eps)
    E = extract_model_from_table(table, args.axioms or "semigraphoid", args.eps)
    _write(args, serialize_elementary(E))
    out.kv("elementary", E.n_statements, f"elementary triplets: {E.n_statements}")
    return 0


def cmd_eval_estimand(args, out):
    import itertools

    from ..causal import estimand_eval, parse_estimand
    from .tables import load_table

    table = load_table(args.input, eps=args.eps)
    f = estimand_eval(parse_estimand(args.estimand), table)
    fixed = dict(item.split("=", 1) for item in (args.at or "").replace(",", " ").split())
    if fixed:
        f = f.slice(fixed)
    for idx in itertools.product(*(range(len(d)) for d in f.domains)):
        cells = [(v, f.domains[k][i]) for k, (v, i) in enumerate(zip(f.variables, idx))]
        key = ",".join(f"{v}:{x}" for v, x in cells) or "value"
        label = ",".join(f"{v}={x}" for v, x in cells) or "value"
        val = float(f.array[idx]) if f.variables else float(f.array)
        out.kv(key, repr(val), f"{label}: {val:.12g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="elemci", description="Reason with independence models via elementary triplets.")
    p.add_argument("--machine", action="store_true", help="emit key=value lines")
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_text, model=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        if model:
            sp.add_argument("--in", dest="input", required=True, help="model file")
            sp.add_argument("--axioms", help="override the file's axiom level")
            sp.add_argument("--out", dest="output", help="write the result here")
            sp.add_argument("--budget", type=int, help="closure step budget")
            sp.add_argument("--seed", type=int, help="shuffle seed order before closing")
        return sp

    add("close", cmd_close, "close a model and report its size")
    sp = add("member", cmd_member, "membership query")
    sp.add_argument("triplet", help="'I ; J | K [@ ctx]'")
    sp = add("dominant", cmd_dominant, "dominant triplets")
    sp.add_argument("--all", action="store_true", help="list both orientations")
    sp = add("grids", cmd_grids, "maximal grids of the grid DAG")
    sp.add_argument("--full", action="store_true", help="use both halves of the DAG")
    sp.add_argument("--dot", action="store_true", help="write the grid DAG as dot to --out")
    sp = add("mim", cmd_mim, "minimal independence map")
    sp.add_argument("--ordering", help="variable order, space separated")
    sp.add_argument("--dot", action="store_true")
    sp = add("pm", cmd_pm, "perfect map search")
    sp.add_argument("--dot", action="store_true")
    sp = add("intersect", cmd_intersect, "intersection of two models")
    sp.add_argument("--other", required=True, help="second model file")
    sp = add("union", cmd_union, "union of two models")
    sp.add_argument("--other", required=True, help="second model file")
    sp.add_argument("--mode", choices=("context", "min", "max"), default="min")

    for name, fn, text in (("identify", cmd_identify, "identify p~(Y | do(X), X, W)"), ("plan", cmd_plan, "evaluate a plan")):
        sp = sub.add_parser(name, help=text)
        sp.set_defaults(fn=fn)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--in", dest="input", help="regime model file")
        src.add_argument("--dag", help="causal DAG edge list (regime model by d-separation)")
        sp.add_argument("--y", required=True)
        sp.add_argument("--w", default="")
        if name == "identify":
            sp.add_argument("--x", required=True)
            sp.add_argument("--depth", type=int)
        else:
            sp.add_argument("--controls", required=True, help="X_1;X_2;...")
            sp.add_argument("--pools", required=True, help="N_1;N_2;... ('-' for empty)")
            sp.add_argument("--assume-natural", action="store_true")

    sp = sub.add_parser("from-table", help="elementary model of a joint table (CSV)")
    sp.set_defaults(fn=cmd_from_table)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", dest="output")
    sp.add_argument("--axioms")
    sp.add_argument("--eps", type=float, default=1e-9)

    sp = sub.add_parser("eval-estimand", help="evaluate an estimand on a joint table")
    sp.set_defaults(fn=cmd_eval_estimand)
    sp.add_argument("--in", dest="input", required=True, help="joint table CSV")
    sp.add_argument("--estimand", required=True)
    sp.add_argument("--at", help="fix variables, e.g. 'x=1'")
    sp.add_argument("--eps", type=float, default=1e-9)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Out(args.machine)
    try:
        return args.fn(args, out)
    except (ElemCIError, ValueError, KeyError, OSError) as exc:
        print(f"elemci: error: {exc}", file=sys.stderr)
        return 1


cli_run = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
