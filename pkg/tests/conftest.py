import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from elemci.closure import elementary_model
from elemci.core import AxiomLevel, Triplet, Universe
from elemci.io.formats import load_dag, load_model

DATA = Path(__file__).resolve().parent.parent / "data"


def data_path(name):
    return DATA / name


def model_from_file(name, level=None, close=True):
    mt = load_model(DATA / name)
    if level is not None:
        mt.level = AxiomLevel.parse(level)
    return mt.to_model(close=close)


def dag_from_file(name):
    return load_dag(DATA / name)


def random_triplets(n, count, rng):
    """Random valid triplets over n variables: each variable lands in I, J, K or nowhere."""
    out = []
    while len(out) < count:
        roles = [rng.randrange(4) for _ in range(n)]
        I = sum(1 << k for k, r in enumerate(roles) if r == 1)
        J = sum(1 << k for k, r in enumerate(roles) if r == 2)
        K = sum(1 << k for k, r in enumerate(roles) if r == 3)
        if I and J:
            out.append(Triplet(I, J, K))
    return out


def random_closed_model(n, rng, level=AxiomLevel.SEMIGRAPHOID, seeds=None):
    u = Universe.of([f"v{k}" for k in range(n)])
    M = random_triplets(n, seeds if seeds is not None else rng.randint(1, 3), rng)
    return elementary_model(u, level, M)


@st.composite
def triplet_sets(draw, max_vars=5, max_size=3):
    """(n, [Triplet]) for hypothesis."""
    n = draw(st.integers(2, max_vars))
    count = draw(st.integers(0, max_size))
    out = []
    for _ in range(count):
        roles = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
        I = sum(1 << k for k, r in enumerate(roles) if r == 1)
        J = sum(1 << k for k, r in enumerate(roles) if r == 2)
        K = sum(1 << k for k, r in enumerate(roles) if r == 3)
        if I and J:
            out.append(Triplet(I, J, K))
    return n, out


levels = st.sampled_from(list(AxiomLevel))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def five_seeds():
    return model_from_file("five_seeds.model")


@pytest.fixture(scope="session")
def two_seeds():
    return model_from_file("two_seeds.model")


def trip(u, I, J, K="", **ctx):
    """Triplet from space-separated names, e.g. trip(u, "1 2", "4 5 6")."""
    return Triplet(u.mask(I.split()), u.mask(J.split()), u.mask(K.split()), u.context(ctx or None))


def elem(u, i, j, K="", **ctx):
    from elemci.core import ElementaryTriplet

    return ElementaryTriplet(u.index(i), u.index(j), u.mask(K.split()), u.context(ctx or None))


def effect_error(m, est, X, Y, W=()):
    """Largest gap between an estimand of p(Y | W, do(X)) and the truncated-factorization oracle."""
    import itertools

    import numpy as np

    from elemci.causal import estimand_eval, interventional_oracle

    f = estimand_eval(est, m.observational_table())
    doms = [m.domains[m.names.index(x)] for x in X]
    worst = 0.0
    for values in itertools.product(*doms):
        do = dict(zip(X, values))
        truth = interventional_oracle(m, do, Y, W)
        got = f.slice({k: v for k, v in do.items() if k in f.variables})
        got = got.reorder(truth.variables)
        worst = max(worst, float(np.max(np.abs(got.array - truth.array))))
    return worst
