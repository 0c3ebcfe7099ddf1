import random

import pytest

from elemci.closure import all_triplets, close_elementary, enumerate_model
from elemci.core import AxiomLevel, ElementaryModel, Universe
from elemci.errors import AuxNameCollision, LevelMismatch, UniverseMismatch
from elemci.query import dominant_triplets, is_member
from elemci.setops import intersect, union_max_subset, union_min_superset, union_with_context

from conftest import elem, model_from_file, random_closed_model, trip


@pytest.fixture
def pair():
    return model_from_file("union_a.model"), model_from_file("union_b.model")



def test_intersect_trivial(pair):
    E, E2 = pair
    assert intersect(E, E) == E
    assert len(intersect(E, E2)) == 0


def test_intersect_membership_sweep():
    rng = random.Random(1)
    for _ in range(30):
        level = rng.choice(list(AxiomLevel))
        E = random_closed_model(4, rng, level)
        E2 = random_closed_model(4, rng, level)
        both = intersect(E, E2)
        assert close_elementary(both) == both
        for I, J, K in all_triplets(4, 0b1111):
            assert is_member(both, I, J, K) == (is_member(E, I, J, K) and is_member(E2, I, J, K))


def test_intersect_algebra():
    rng = random.Random(2)
    for _ in range(10):
        A, B, C = (random_closed_model(4, rng) for _ in range(3))
        assert intersect(A, B) == intersect(B, A)
        assert intersect(intersect(A, B), C) == intersect(A, intersect(B, C))


def test_intersect_errors(pair):
    E, E2 = pair
    with pytest.raises(LevelMismatch):
        intersect(E, E2.replace(level="graphoid"))
    other = ElementaryModel(Universe.of(["p", "q", "r"]), E.level, frozenset(), True)
    with pytest.raises(UniverseMismatch):
        intersect(E, other)


def test_union_with_context(pair):
    E, E2 = pair
    U = union_with_context(E, E2)
    u = U.universe
    assert set(U.triplets) == {elem(u, "x", "y", "z", aux="0"), elem(u, "x", "z", aux="1")}
    x, y, z = u.mask(["x"]), u.mask(["y"]), u.mask(["z"])
    aux0, aux1 = u.context({"aux": "0"}), u.context({"aux": "1"})
    assert is_member(U, x, y, z, aux0)
    assert not is_member(U, x, y, z, aux1)
    assert is_member(U, x, z, 0, aux1)
    assert not is_member(U, x, z, 0, aux0)
    with pytest.raises(AuxNameCollision):
        union_with_context(E, E2, aux="x")


def test_union_with_context_is_stratified():
    rng = random.Random(3)
    for _ in range(20):
        E = random_closed_model(4, rng)
        E2 = random_closed_model(4, rng)
        U = union_with_context(E, E2)
        c0 = U.universe.context({"aux": "0"})
        c1 = U.universe.context({"aux": "1"})
        for I, J, K in all_triplets(4, 0b1111):
            assert is_member(U, I, J, K, c0) == is_member(E, I, J, K)
            assert is_member(U, I, J, K, c1) == is_member(E2, I, J, K)


def test_union_with_context_self(pair):
    E, _ = pair
    U = union_with_context(E, E)
    assert len(U) == 2 * len(E)


def test_union_min_superset(pair):
    E, E2 = pair
    U = union_min_superset(E, E2)
    u = E.universe
    assert elem(u, "x", "y") in U
    assert elem(u, "x", "z", "y") in U
    assert is_member(U, *trip(u, "x", "y z")[:3])
    raw = E.replace(triplets=E.triplets | E2.triplets)
    assert elem(u, "x", "y") not in raw
    assert union_min_superset(E, E) == E
    empty = E.replace(triplets=frozenset())
    assert union_min_superset(E, empty) == E


def test_union_min_superset_is_minimal():
    rng = random.Random(4)
    for _ in range(15):
        E = random_closed_model(4, rng)
        E2 = random_closed_model(4, rng)
        U = union_min_superset(E, E2)
        raw = E.triplets | E2.triplets
        assert raw <= U.triplets
        assert close_elementary(U) == U
        for t in U.triplets - raw:
            assert t in close_elementary(U.replace(triplets=U.triplets - {t})).triplets


def test_union_max_subset(pair):
    E, E2 = pair
    assert union_max_subset(E, E2) == E
    assert union_max_subset(E2, E) == E2
    assert union_max_subset(E, E) == E


def test_union_max_subset_properties():
    rng = random.Random(6)
    for _ in range(25):
        level = rng.choice(list(AxiomLevel))
        E = random_closed_model(4, rng, level)
        E2 = random_closed_model(4, rng, level)
        U = union_max_subset(E, E2)
        pool = E.triplets | E2.triplets
        assert E.triplets <= U.triplets <= pool
        assert close_elementary(U) == U
        for t in dominant_triplets(U):
            assert is_member(E, *t) or is_member(E2, *t)
        # every represented triplet belongs to one of the two models
        models = enumerate_model(E) | enumerate_model(E2)
        assert enumerate_model(U) <= models
        # maximal: no single remaining triplet can be added
        for t in pool - U.triplets:
            grown = close_elementary(U.replace(triplets=U.triplets | {t}))
            ok = grown.triplets <= pool and enumerate_model(grown) <= models
            assert not ok
