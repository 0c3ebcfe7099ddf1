"""Estimand expression trees, their canonical text form and numeric evaluation.

Grammar of the text form::

    expr    := term ('*' term)*
    term    := prob | sum | '(' expr ')' | '1'
    sum     := 'sum{' names '}' '(' expr ')'
    prob    := 'p(' names ['|' names] ')'
    names   := name (',' name)*

Products print with `` * ``, sums as ``sum{a,b}( ... )``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import MissingVariable, ZeroConditioner
from ..io.tables import Factor, JointTable


@dataclass(frozen=True)
class Prob:
    targets: tuple
    given: tuple = ()

    def __str__(self):
        t = ",".join(self.targets)
        return f"p({t}|{','.join(self.given)})" if self.given else f"p({t})"


@dataclass(frozen=True)
class Sum:
    over: tuple
    body: object

    def __str__(self):
        return f"sum{{{','.join(self.over)}}}( {self.body} )"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(str(f) for f in self.factors)


Estimand = Prob | Sum | Product


def prob(targets, given=()):
    return Prob(tuple(targets), tuple(given))


def product(*factors):
    """Product with nested products flattened and unit factors dropped."""
    flat = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        elif isinstance(f, Prob) and not f.targets:
            continue
        else:
            flat.append(f)
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def summation(over, body):
    over = tuple(over)
    if not over:
        return body
    return Sum(over, body)


def free_variables(e) -> set:
    if isinstance(e, Prob):
        return set(e.targets) | set(e.given)
    if isinstance(e, Sum):
        return free_variables(e.body) - set(e.over)
    return set().union(*(free_variables(f) for f in e.factors)) if e.factors else set()


def to_text(e) -> str:
    return str(e)


_TOKEN = re.compile(r"\s*(sum\{|p\(|[(){}|,*]|1(?![\w.])|[^\s(){}|,*]+)")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse estimand at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_estimand(text: str):
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def names(stop):
        out = []
        if peek() in stop:
            return out
        while True:
            tok = take()
            if tok in "(){}|,*":
                raise ValueError(f"unexpected {tok!r} in a name list")
            out.append(tok)
            if peek() == ",":
                take(",")
            else:
                return out

    def term():
        tok = peek()
        if tok == "p(":
            take()
            targets = names({"|", ")"})
            given = []
            if peek() == "|":
                take("|")
                given = names({")"})
            take(")")
            return Prob(tuple(targets), tuple(given))
        if tok == "sum{":
            take()
            over = names({"}"})
            take("}")
            take("(")
            body = expr()
            take(")")
            return Sum(tuple(over), body)
        if tok == "(":
            take()
            inner = expr()
            take(")")
            return inner
        if tok == "1":
            take()
            return Product(())
        raise ValueError(f"unexpected token {tok!r}")

    def expr():
        parts = [term()]
        while peek() == "*":
            take("*")
            parts.append(term())
        return parts[0] if len(parts) == 1 else Product(tuple(parts))

    result = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input {' '.join(toks[pos:])!r}")
    return result


def _prob_factor(p: Prob, table: JointTable, cache: dict) -> Factor:
    key = (p.targets, p.given)
    if key in cache:
        return cache[key]
    for v in p.targets + p.given:
        if v not in table.variables:
            raise MissingVariable(f"table has no variable {v!r}")
    joint = table.marginal(p.targets + p.given)
    if p.given:
        cond = table.marginal(p.given)
        if np.any(cond.array <= 0):
            raise ZeroConditioner(f"p({','.join(p.given)}) vanishes somewhere")
        out = Factor(joint.variables, joint.domains, joint.array / cond.aligned(joint.variables, joint.domains))
    else:
        out = joint
    cache[key] = out
    return out


def estimand_eval(e, table: JointTable) -> Factor:
    """Evaluate an estimand on an observational table.

    Returns a factor over the free variables of ``e``; a sum marginalizes
    its bound variables inside its own body only.
    """
    cache: dict = {}

    def go(node) -> Factor:
        if isinstance(node, Prob):
            return _prob_factor(node, table, cache)
        if isinstance(node, Sum):
            return go(node.body).sum_out(node.over)
        acc = Factor((), (), np.array(1.0))
        for f in node.factors:
            acc = acc * go(f)
        return acc

    return go(e)
