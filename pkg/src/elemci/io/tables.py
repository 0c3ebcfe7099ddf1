"""Exact joint probability tables and named-axis factors."""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import (
    DuplicateRow,
    IncompleteDomain,
    MissingVariable,
    NotNormalized,
    TableError,
    TableMismatch,
)

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class Factor:
    """A numpy array whose axes are labelled by variable names."""

    variables: tuple
    domains: tuple
    array: np.ndarray

    def axis(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise MissingVariable(f"factor has no variable {name!r}") from None

    def aligned(self, variables, domains) -> np.ndarray:
        """View broadcastable against a factor over ``variables``."""
        for v in self.variables:
            if v not in variables:
                raise MissingVariable(f"cannot align: {v!r} missing")
        order = sorted(range(len(self.variables)), key=lambda k: variables.index(self.variables[k]))
        arr = np.transpose(self.array, order)
        shape = [1] * len(variables)
        for k in order:
            v = self.variables[k]
            shape[variables.index(v)] = len(self.domains[k])
        return arr.reshape(shape)

    def __mul__(self, other: "Factor") -> "Factor":
        variables = list(self.variables)
        domains = list(self.domains)
        for v, d in zip(other.variables, other.domains):
            if v not in variables:
                variables.append(v)
                domains.append(d)
        variables, domains = tuple(variables), tuple(domains)
        return Factor(variables, domains, self.aligned(variables, domains) * other.aligned(variables, domains))

    def sum_out(self, names) -> "Factor":
        names = [n for n in names if n in self.variables]
        axes = tuple(self.axis(n) for n in names)
        keep = [k for k in range(len(self.variables)) if k not in axes]
        return Factor(
            tuple(self.variables[k] for k in keep),
            tuple(self.domains[k] for k in keep),
            self.array.sum(axis=axes) if axes else self.array,
        )

    def reorder(self, names) -> "Factor":
        names = tuple(names)
        if set(names) != set(self.variables):
            raise TableMismatch("reorder needs the same variable set")
        perm = [self.axis(n) for n in names]
        return Factor(names, tuple(self.domains[k] for k in perm), np.transpose(self.array, perm))

    def value(self, assignment: dict) -> float:
        idx = tuple(self.domains[k].index(str(assignment[v])) for k, v in enumerate(self.variables))
        return float(self.array[idx])

    def slice(self, assignment: dict) -> "Factor":
        """Fix some variables to values and drop their axes."""
        arr = self.array
        variables, domains = [], []
        index = []
        for v, d in zip(self.variables, self.domains):
            if v in assignment:
                index.append(d.index(str(assignment[v])))
            else:
                index.append(slice(None))
                variables.append(v)
                domains.append(d)
        return Factor(tuple(variables), tuple(domains), arr[tuple(index)])


@dataclass(frozen=True)
class JointTable:
    """p(V) over finite domains, stored as a dense array (axis k = variable k)."""

    variables: tuple
    domains: tuple
    array: np.ndarray
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "domains", tuple(tuple(str(x) for x in d) for d in self.domains))
        arr = np.asarray(self.array, dtype=float)
        if arr.shape != tuple(len(d) for d in self.domains):
            raise TableMismatch("array shape does not match the domains")
        if len(set(self.variables)) != len(self.variables):
            raise TableMismatch("variable names must be unique")
        if np.any(arr < 0):
            raise TableError("negative probability")
        if abs(arr.sum() - 1.0) > self.eps:
            raise NotNormalized(f"probabilities sum to {arr.sum():.12g}")
        object.__setattr__(self, "array", arr)

    def factor(self) -> Factor:
        return Factor(self.variables, self.domains, self.array)

    def marginal(self, names) -> Factor:
        names = tuple(names)
        for n in names:
            if n not in self.variables:
                raise MissingVariable(f"table has no variable {n!r}")
        drop = [v for v in self.variables if v not in names]
        return self.factor().sum_out(drop).reorder(names)

    def is_positive(self) -> bool:
        return bool(np.all(self.array > 0))


def load_table(path, eps: float = DEFAULT_EPS, prob_column: str = "p") -> JointTable:
    """Read a CSV with one column per variable plus a probability column.

    Domains are the values seen in each column, in order of first
    appearance; every combination must appear exactly once.
    """
    with open(Path(path), newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [[c.strip() for c in r] for r in reader if any(c.strip() for c in r)]
    return table_from_rows(header, rows, eps, prob_column)


def table_from_rows(header, rows, eps=DEFAULT_EPS, prob_column="p") -> JointTable:
    if prob_column not in header:
        raise TableError(f"missing probability column {prob_column!r}")
    pcol = header.index(prob_column)
    names = [h for k, h in enumerate(header) if k != pcol]
    domains: list[list[str]] = [[] for _ in names]
    parsed = []
    for r in rows:
        if len(r) != len(header):
            raise TableError(f"row has {len(r)} fields, expected {len(header)}")
        vals = [c for k, c in enumerate(r) if k != pcol]
        for d, v in zip(domains, vals):
            if v not in d:
                d.append(v)
        parsed.append((tuple(vals), float(r[pcol])))
    arr = np.zeros(tuple(len(d) for d in domains))
    seen = set()
    for vals, p in parsed:
        if vals in seen:
            raise DuplicateRow(f"assignment {vals} appears twice")
        seen.add(vals)
        arr[tuple(d.index(v) for d, v in zip(domains, vals))] = p
    expected = int(np.prod([len(d) for d in domains])) if domains else 1
    if len(seen) != expected:
        raise IncompleteDomain(f"{len(seen)} rows for {expected} assignments")
    return JointTable(tuple(names), tuple(tuple(d) for d in domains), arr, eps)


def write_table(table: JointTable, path, prob_column: str = "p") -> None:
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(table.variables) + [prob_column])
        for idx in itertools.product(*(range(len(d)) for d in table.domains)):
            vals = [table.domains[k][i] for k, i in enumerate(idx)]
            w.writerow(vals + [repr(float(table.array[idx]))])
