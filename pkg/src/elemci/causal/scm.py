"""Discrete structural models used as numeric oracles for causal estimands."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import MissingVariable, NotPositive, UniverseTooLarge
from ..graphmap import Dag
from ..io.tables import Factor, JointTable

ORACLE_LIMIT = 12


@dataclass(frozen=True)
class StructuralModel:
    """A DAG (latents allowed) with one conditional table per node.

    ``cpts[v]`` has one axis per parent of v, in ascending index order, and
    a last axis over v's own domain.
    """

    dag: Dag
    domains: tuple
    cpts: tuple

    def __post_init__(self):
        for v, cpt in enumerate(self.cpts):
            pa = [k for k in range(len(self.dag)) if self.dag.parents[v] >> k & 1]
            shape = tuple(len(self.domains[k]) for k in pa) + (len(self.domains[v]),)
            if cpt.shape != shape:
                raise ValueError(f"table for {self.dag.names[v]!r} has shape {cpt.shape}, expected {shape}")
            if not np.allclose(cpt.sum(axis=-1), 1.0, atol=1e-12):
                raise ValueError(f"table for {self.dag.names[v]!r} is not normalized")
            if np.any(cpt <= 0):
                raise NotPositive(f"table for {self.dag.names[v]!r} has a zero entry")

    @property
    def names(self):
        return self.dag.names

    def _factor(self, v) -> Factor:
        pa = [k for k in range(len(self.dag)) if self.dag.parents[v] >> k & 1]
        vars_ = tuple(self.names[k] for k in pa) + (self.names[v],)
        doms = tuple(self.domains[k] for k in pa) + (self.domains[v],)
        return Factor(vars_, doms, self.cpts[v])

    def _joint(self, do: dict | None = None) -> Factor:
        if len(self.dag) > ORACLE_LIMIT:
            raise UniverseTooLarge(f"full enumeration is limited to {ORACLE_LIMIT} variables")
        do = do or {}
        acc = Factor((), (), np.array(1.0))
        for v, name in enumerate(self.names):
            if name in do:
                dom = self.domains[v]
                ind = np.zeros(len(dom))
                ind[dom.index(str(do[name]))] = 1.0
                acc = acc * Factor((name,), (dom,), ind)
            else:
                acc = acc * self._factor(v)
        return acc.reorder(self.names)

    def observational_table(self) -> JointTable:
        """p over the observed variables (latents summed out)."""
        joint = self._joint()
        hidden = [self.names[k] for k in range(len(self.dag)) if self.dag.latent >> k & 1]
        obs = joint.sum_out(hidden)
        return JointTable(obs.variables, obs.domains, obs.array)


def random_structural_model(dag: Dag, rng: np.random.Generator, card: int = 2, floor: float = 0.05):
    """Random strictly positive tables; each row drawn from a Dirichlet then floored."""
    domains = tuple(tuple(str(x) for x in range(card)) for _ in dag.names)
    cpts = []
    for v in range(len(dag)):
        k = bin(dag.parents[v]).count("1")
        raw = rng.dirichlet(np.ones(card), size=card ** k).reshape((card,) * k + (card,))
        raw = raw * (1 - card * floor) + floor
        cpts.append(raw / raw.sum(axis=-1, keepdims=True))
    return StructuralModel(dag, domains, tuple(cpts))


def interventional_oracle(m: StructuralModel, do: dict, Y, W=()) -> Factor:
    """p(Y | W, do(X = x)) by truncated factorization and full enumeration.

    Returns a factor over W then Y, normalized per W configuration.
    """
    Y, W = tuple(Y), tuple(W)
    for v in Y + W + tuple(do):
        if v not in m.names:
            raise MissingVariable(f"unknown variable {v!r}")
    joint = m._joint(do)
    keep = W + Y
    marg = joint.sum_out([v for v in m.names if v not in keep]).reorder(keep)
    if W:
        cond = marg.sum_out(Y)
        arr = marg.array / cond.aligned(keep, marg.domains)
        return Factor(keep, marg.domains, arr)
    return marg
