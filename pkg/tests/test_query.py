import itertools

import pytest

from elemci.closure import all_triplets, elementary_model, enumerate_model
from elemci.core import AxiomLevel, ElementaryModel, Triplet, Universe, dominates
from elemci.errors import LevelMismatch, NotClosed, OverlappingSets, UniverseMismatch
from elemci.query import (
    Grid,
    dominant_triplets,
    dominant_triplets_oracle,
    grid_dag,
    is_grid,
    is_member,
    is_member_naive,
    is_submodel,
    maximal_grids,
    nonsymmetric,
)

from conftest import elem, random_closed_model, trip

U6 = Universe.of("1 2 3 4 5 6".split())


def _idx(u, *names):
    return tuple(u.index(n) for n in names)


def test_member_two_seeds(two_seeds):
    assert is_member(two_seeds, *trip(U6, "1 2", "4 5 6")[:3])
    assert is_member(two_seeds, *trip(U6, "1 2 3", "4")[:3])
    assert is_member(two_seeds, *trip(U6, "4 5 6", "1 2")[:3])
    assert not is_member(two_seeds, *trip(U6, "1 2 3", "4 5")[:3])


def test_member_requires_closed_and_valid(two_seeds):
    with pytest.raises(NotClosed):
        is_member(two_seeds.replace(closed=False), 1, 2)
    with pytest.raises(OverlappingSets):
        is_member(two_seeds, 1, 1)


def test_member_matches_naive(rng):
    for _ in range(40):
        E = random_closed_model(4, rng, rng.choice(list(AxiomLevel)))
        for I, J, K in all_triplets(4, 0b1111):
            assert is_member(E, I, J, K) == is_member_naive(E, I, J, K)


def test_member_symmetric(rng):
    for _ in range(20):
        E = random_closed_model(4, rng, rng.choice(list(AxiomLevel)))
        for I, J, K in all_triplets(4, 0b1111):
            assert is_member(E, I, J, K) == is_member(E, J, I, K)


def test_member_variants_agree_at_compositional(rng):
    for _ in range(20):
        E = random_closed_model(4, rng, AxiomLevel.COMPOSITIONAL)
        for I, J, K in all_triplets(4, 0b1111):
            answers = {is_member(E, I, J, K, method=lv) for lv in AxiomLevel}
            assert len(answers) == 1


def test_submodel(two_seeds):
    assert is_submodel(two_seeds, two_seeds)
    empty = ElementaryModel(U6, two_seeds.level, frozenset(), True)
    assert is_submodel(empty, two_seeds)
    small = elementary_model(U6, two_seeds.level, [trip(U6, "1", "4")])
    assert is_submodel(small, two_seeds)
    assert not is_submodel(two_seeds, small)


def test_submodel_errors(two_seeds):
    other = ElementaryModel(Universe.of("a b c d e f".split()), two_seeds.level, frozenset(), True)
    with pytest.raises(UniverseMismatch):
        is_submodel(two_seeds, other)
    with pytest.raises(LevelMismatch):
        is_submodel(two_seeds, two_seeds.replace(level="graphoid"))


def test_dominants_two_seeds(two_seeds):
    D = dominant_triplets(two_seeds)
    assert nonsymmetric(D) == sorted([trip(U6, "1 2", "4 5 6"), trip(U6, "1 2 3", "4")])
    assert len(D) == 4
    assert D == dominant_triplets_oracle(two_seeds)


def test_dominants_five_seeds(five_seeds):
    D = dominant_triplets(five_seeds)
    assert len(nonsymmetric(D)) == 9
    # every dominant comes with its mirror
    assert len(D) == 18
    assert D == dominant_triplets_oracle(five_seeds)


def test_dominants_single_pair():
    u = Universe.of(["1", "2"])
    E = elementary_model(u, "semigraphoid", [trip(u, "1", "2")])
    assert dominant_triplets(E) == {trip(u, "1", "2"), trip(u, "2", "1")}


def test_dominants_match_oracle(rng):
    for n in (3, 4, 5):
        for _ in range(12):
            E = random_closed_model(n, rng, rng.choice(list(AxiomLevel)))
            assert dominant_triplets(E) == dominant_triplets_oracle(E)


def test_dominants_cover_model(rng):
    for _ in range(15):
        E = random_closed_model(5, rng, rng.choice(list(AxiomLevel)))
        D = dominant_triplets(E)
        for t in enumerate_model(E):
            assert any(dominates(d, t) for d in D)


def test_grid_dag_two_seeds(two_seeds):
    G = grid_dag(two_seeds)
    assert len(G.nodes) == 112
    assert len(G.node_set("canonical")) == 56
    assert (elem(U6, "1", "6"), elem(U6, "1", "5", "6")) in G.solid


def test_grid_dag_mirror_swaps_edge_kinds(two_seeds):
    G = grid_dag(two_seeds)
    solid = {(a.mirror(), b.mirror()) for a, b in G.solid}
    assert solid == set(G.dashed)


def test_grid_dag_empty():
    E = ElementaryModel(U6, "semigraphoid", frozenset(), True)
    G = grid_dag(E)
    assert G.nodes == [] and G.solid == [] and G.dashed == []
    assert maximal_grids(G) == []


def test_grid_example(two_seeds):
    G = grid_dag(two_seeds)
    g = Grid(_idx(U6, "2", "1"), _idx(U6, "5", "6"), U6.mask(["4"]))
    assert g.node_set() == {
        elem(U6, "2", "5", "4"),
        elem(U6, "2", "6", "4 5"),
        elem(U6, "1", "5", "2 4"),
        elem(U6, "1", "6", "2 4 5"),
    }
    assert is_grid(G, g)
    assert is_grid(G, g, "canonical")
    assert is_member(two_seeds, *g.triplet()[:3])


def test_maximal_grids_two_seeds(two_seeds):
    G = grid_dag(two_seeds)
    grids = maximal_grids(G)
    assert len(grids) == 18
    shapes = sorted(g.shape for g in grids)
    assert shapes.count((2, 3)) == 12 and shapes.count((3, 1)) == 6
    assert len(maximal_grids(G, "full")) == 36
    for g in grids:
        assert is_grid(G, g, "canonical")
        assert is_member(two_seeds, *g.triplet()[:3])


def test_single_node_grid():
    u = Universe.of(["1", "2"])
    E = elementary_model(u, "semigraphoid", [trip(u, "1", "2")])
    grids = maximal_grids(grid_dag(E))
    assert grids == [Grid((0,), (1,), 0)]


def test_maximal_grids_are_members_and_maximal(rng):
    for _ in range(15):
        E = random_closed_model(5, rng, rng.choice(list(AxiomLevel)))
        G = grid_dag(E)
        grids = maximal_grids(G, "full")
        cells = [g.node_set() for g in grids]
        for g, c in zip(grids, cells):
            assert is_grid(G, g)
            assert is_member(E, *g.triplet()[:3])
            assert not any(c < other for other in cells)
        # every node sits in some maximal grid
        covered = set().union(*cells) if cells else set()
        assert covered == set(G.nodes)
