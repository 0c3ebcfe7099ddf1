import itertools

import numpy as np
import pytest

from elemci.causal import (
    INT,
    OBS,
    PlanQuery,
    Prob,
    Product,
    RegimeModel,
    StructuralModel,
    Sum,
    apply_rule,
    estimand_eval,
    evaluate_plan,
    f_mask,
    free_variables,
    identify,
    interventional_oracle,
    parse_estimand,
    random_structural_model,
    regime_context,
    regime_universe,
    tci,
    to_text,
)
from elemci.causal.estimand import prob, product, summation
from elemci.closure import close_elementary
from elemci.core import AxiomLevel, ElementaryModel
from elemci.errors import (
    AuxNameCollision,
    DepthExhausted,
    InvalidSets,
    MissingVariable,
    NaturalnessViolated,
    NotPositive,
    UniverseTooLarge,
    ZeroConditioner,
)
from elemci.graphmap import Dag, random_dag
from elemci.io.tables import JointTable

from conftest import dag_from_file, effect_error


def m(u, *names):
    return u.mask(names)


@pytest.fixture(scope="module")
def backdoor():
    return RegimeModel(dag_from_file("backdoor.dag"))


@pytest.fixture(scope="module")
def frontdoor():
    return RegimeModel(dag_from_file("frontdoor.dag"))


@pytest.fixture(scope="module")
def plan_dag():
    return RegimeModel(dag_from_file("two_step_plan.dag"))


def test_regime_universe():
    u = regime_universe(["x", "y"])
    assert u.names == ("x", "y", "F_x", "F_y")
    assert u.domains[2] == (OBS, INT)
    assert f_mask(u, 0b11) == 0b1100
    assert regime_context(u, 0b01) == ((2, INT), (3, OBS))
    assert regime_context(u, 0, free=0b0100) == ((3, OBS),)
    with pytest.raises(AuxNameCollision):
        regime_universe(["x", "F_x"])


def test_tci_vacuous_and_invalid(backdoor):
    u = backdoor.universe
    assert tci(backdoor, 0, m(u, "y"))
    with pytest.raises(InvalidSets):
        tci(backdoor, m(u, "x"), m(u, "x"))


def test_regime_model_universe_skips_latents(frontdoor):
    assert frontdoor.universe.names[:4] == ("x", "y", "z1", "z2")
    assert len(frontdoor.universe) == 8


def test_regime_model_is_closed():
    for path in ("bow.dag", "frontdoor.dag"):
        E = RegimeModel(dag_from_file(path)).materialize()
        assert close_elementary(E) == E
    chain = Dag.from_edges(["x", "z", "y"], [("x", "z"), ("z", "y")])
    E = RegimeModel(chain).materialize()
    assert close_elementary(E) == E
    with pytest.raises(UniverseTooLarge):
        RegimeModel(dag_from_file("backdoor.dag")).materialize()


def test_regime_model_random_dags_closed():
    import random

    rng = random.Random(0)
    for _ in range(8):
        E = RegimeModel(random_dag(3, rng.random(), rng)).materialize()
        assert close_elementary(E) == E


def test_intervention_cuts_incoming_edges():
    chain = Dag.from_edges(["x", "z", "y"], [("x", "z"), ("z", "y")])
    E = RegimeModel(chain)
    u = E.universe
    assert not tci(E, m(u, "x"), m(u, "y"))
    assert tci(E, m(u, "x"), m(u, "y"), intervened=m(u, "z"))
    # F_x reaches y only through x
    assert not tci(E, m(u, "y"), f_mask(u, m(u, "x")))
    assert tci(E, m(u, "y"), f_mask(u, m(u, "x")), m(u, "x"))


def test_rule1_independent_pair():
    E = RegimeModel(Dag.from_edges(["x", "y"], []))
    u = E.universe
    rw = apply_rule(1, E, m(u, "x"), m(u, "y"))
    assert rw is not None
    assert rw.text(u) == "p~(y|x) = p~(y)"


def test_rule2_backdoor(backdoor):
    u = backdoor.universe
    rw = apply_rule(2, backdoor, m(u, "x"), m(u, "y"), W=m(u, "z3", "z4"))
    assert rw is not None
    assert rw.text(u) == "p~(y|do(x),x,z3,z4) = p~(y|x,z3,z4)"
    # without the back-door block the rule does not apply
    assert apply_rule(2, backdoor, m(u, "x"), m(u, "y")) is None


def test_rule3():
    u = regime_universe(["x", "y"])
    empty = ElementaryModel(u, AxiomLevel.COMPOSITIONAL, frozenset(), True)
    assert apply_rule(3, empty, 0b01, 0b10) is None
    E = RegimeModel(Dag.from_edges(["x", "y"], [("y", "x")]))
    rw = apply_rule(3, E, 0b01, 0b10)
    assert rw.text(E.universe) == "p~(y|do(x),x) = p~(y)"


def test_rule_errors(backdoor):
    with pytest.raises(InvalidSets):
        apply_rule(1, backdoor, 0b1, 0b1)
    with pytest.raises(InvalidSets):
        apply_rule(4, backdoor, 0b1, 0b10)


def test_identify_backdoor(backdoor):
    u = backdoor.universe
    trace = []
    est = identify(backdoor, m(u, "x"), m(u, "y"), trace=trace)
    assert to_text(est) == "sum{z1,z4}( p(y|x,z1,z4) * p(z1,z4) )"
    assert [s.case for s in trace] == [1]
    assert identify(backdoor, m(u, "x"), m(u, "y")) == est


def test_identify_backdoor_with_w(backdoor):
    u = backdoor.universe
    trace = []
    est = identify(backdoor, m(u, "x"), m(u, "y"), m(u, "z3"), trace=trace)
    assert to_text(est) == "sum{z4}( p(y|x,z3,z4) * p(z4|z3) )"
    assert trace[0].Z == m(u, "z4")


def test_identify_frontdoor(frontdoor):
    u = frontdoor.universe
    trace = []
    est = identify(frontdoor, m(u, "x"), m(u, "y"), trace=trace)
    assert [(s.case, s.Z) for s in trace] == [(3, m(u, "z2")), (2, m(u, "z1"))]
    assert free_variables(est) == {"x", "y"}


def test_identify_bow():
    E = RegimeModel(dag_from_file("bow.dag"))
    assert identify(E, 0b01, 0b10) is None


def test_identify_depth(frontdoor):
    u = frontdoor.universe
    with pytest.raises(DepthExhausted):
        identify(frontdoor, m(u, "x"), m(u, "y"), max_depth=0)
    assert identify(frontdoor, m(u, "x"), m(u, "y"), max_depth=1) is not None


def test_identify_errors(backdoor):
    u = backdoor.universe
    with pytest.raises(InvalidSets):
        identify(backdoor, m(u, "x"), m(u, "x"))
    with pytest.raises(InvalidSets):
        identify(backdoor, 0, m(u, "y"))
    with pytest.raises(InvalidSets):
        identify(backdoor, m(u, "x"), f_mask(u, m(u, "y")))


def test_identify_uses_membership_only(frontdoor):
    # the materialized model carries no graph, yet gives the same answer
    E = frontdoor.materialize()
    u = E.universe
    assert identify(E, m(u, "x"), m(u, "y")) == identify(frontdoor, m(u, "x"), m(u, "y"))


def test_identify_numeric():
    rng = np.random.default_rng(1)
    for path, W in (("backdoor.dag", ()), ("backdoor.dag", ("z3",)), ("frontdoor.dag", ())):
        dag = dag_from_file(path)
        E = RegimeModel(dag)
        u = E.universe
        est = identify(E, m(u, "x"), m(u, "y"), m(u, *W))
        for _ in range(5):
            sm = random_structural_model(dag, rng)
            assert effect_error(sm, est, ("x",), ("y",), W) < 1e-9


def test_plan_two_steps(plan_dag):
    u = plan_dag.universe
    q = PlanQuery((m(u, "x1"), m(u, "x2")), (0, m(u, "z")), m(u, "y"))
    chosen = []
    est = evaluate_plan(plan_dag, q, chosen=chosen)
    assert to_text(est) == "sum{z}( p(y|x1,x2,z) * p(z|x1) )"
    assert chosen == [0, m(u, "z")]
    rng = np.random.default_rng(2)
    dag = dag_from_file("two_step_plan.dag")
    for _ in range(5):
        sm = random_structural_model(dag, rng)
        assert effect_error(sm, est, ("x1", "x2"), ("y",)) < 1e-9


def test_single_step_plan_matches_identify(backdoor):
    u = backdoor.universe
    X, Y = m(u, "x"), m(u, "y")
    pool = ((1 << 8) - 1) & ~(X | Y)  # every other base variable
    est = evaluate_plan(backdoor, PlanQuery((X,), (pool,), Y))
    assert est == identify(backdoor, X, Y)


def test_plan_naturalness():
    dag = Dag.from_edges(["x", "z", "y", "u"], [("u", "x"), ("u", "z"), ("x", "z"), ("z", "y")], ["u"])
    E = RegimeModel(dag)
    u = E.universe
    q = PlanQuery((m(u, "x"),), (m(u, "z"),), m(u, "y"))
    with pytest.raises(NaturalnessViolated):
        evaluate_plan(E, q)
    est = evaluate_plan(E, q, check_natural=False)
    assert to_text(est) == "sum{z}( p(y|x,z) * p(z) )"


def test_plan_without_solution():
    u = regime_universe(["x", "y", "z"])
    empty = ElementaryModel(u, AxiomLevel.COMPOSITIONAL, frozenset(), True)
    assert evaluate_plan(empty, PlanQuery((0b001,), (0b100,), 0b010)) is None


def test_plan_query_validation():
    with pytest.raises(InvalidSets):
        PlanQuery((0b1,), (), 0b10)
    with pytest.raises(InvalidSets):
        PlanQuery((0b1, 0b1), (0, 0), 0b10)
    with pytest.raises(InvalidSets):
        PlanQuery((0b1,), (0b10,), 0b10)
    with pytest.raises(InvalidSets):
        PlanQuery((0b1,), (0b100,), 0b10, W=0b1000)


# estimands ----------------------------------------------------------------


def test_estimand_text_and_parse():
    e = summation(["z"], product(prob(["y"], ["x", "z"]), prob(["z"])))
    text = to_text(e)
    assert text == "sum{z}( p(y|x,z) * p(z) )"
    assert parse_estimand(text) == e
    assert free_variables(e) == {"x", "y"}
    assert to_text(product()) == "1"
    assert parse_estimand("1") == Product(())
    assert summation([], prob(["y"])) == Prob(("y",))
    nested = parse_estimand("sum{a}( p(a) * (p(b|a) * p(c|b)) )")
    assert isinstance(nested, Sum)


@pytest.mark.parametrize("bad", ["p(y", "sum{z}( p(y) ", "p(y) *", "p(y)) ", "q(y)", "p(y|,)"])
def test_estimand_parse_errors(bad):
    with pytest.raises(ValueError):
        parse_estimand(bad)


def _table(names, arr):
    return JointTable(tuple(names), tuple(tuple(str(k) for k in range(s)) for s in arr.shape), arr)


def test_estimand_eval_marginal():
    arr = np.einsum("i,j->ij", [0.2, 0.8], [0.3, 0.7])
    t = _table(["x", "y"], arr)
    f = estimand_eval(prob(["y"]), t)
    assert f.variables == ("y",)
    assert np.allclose(f.array, [0.3, 0.7])


def test_estimand_eval_normalized():
    rng = np.random.default_rng(0)
    arr = rng.random((2, 3, 2))
    t = _table(["x", "y", "z"], arr / arr.sum())
    f = estimand_eval(parse_estimand("sum{z}( p(y|x,z) * p(z) )"), t).reorder(("x", "y"))
    assert np.allclose(f.array.sum(axis=1), 1.0, atol=1e-12)


def test_estimand_eval_errors():
    arr = np.array([[0.5, 0.0], [0.5, 0.0]])
    t = _table(["x", "y"], arr)
    with pytest.raises(ZeroConditioner):
        estimand_eval(prob(["x"], ["y"]), t)
    with pytest.raises(MissingVariable):
        estimand_eval(prob(["w"]), t)


# structural models ---------------------------------------------------------


def test_scm_root_intervention_is_conditioning():
    rng = np.random.default_rng(3)
    dag = Dag.from_edges(["x", "y"], [("x", "y")])
    sm = random_structural_model(dag, rng)
    truth = interventional_oracle(sm, {"x": "1"}, ["y"])
    cond = interventional_oracle(sm, {}, ["y"], ["x"]).slice({"x": "1"})
    assert np.allclose(truth.array, cond.array)


def test_scm_no_intervention_is_observational():
    rng = np.random.default_rng(4)
    dag = dag_from_file("frontdoor.dag")
    sm = random_structural_model(dag, rng)
    table = sm.observational_table()
    got = interventional_oracle(sm, {}, ["y", "x"])
    assert np.allclose(got.array, table.marginal(["y", "x"]).array)


def test_scm_chain_by_hand():
    rng = np.random.default_rng(5)
    dag = Dag.from_edges(["x", "z", "y"], [("x", "z"), ("z", "y")])
    sm = random_structural_model(dag, rng)
    px, pz, py = sm.cpts
    for x in range(2):
        truth = interventional_oracle(sm, {"x": str(x)}, ["y"]).array
        hand = sum(pz[x, z] * py[z] for z in range(2))
        assert np.allclose(truth, hand)


def test_scm_guards():
    dag = Dag.from_edges([f"v{k}" for k in range(13)], [])
    rng = np.random.default_rng(6)
    sm = random_structural_model(dag, rng)
    with pytest.raises(UniverseTooLarge):
        interventional_oracle(sm, {}, ["v0"])
    with pytest.raises(MissingVariable):
        interventional_oracle(random_structural_model(Dag.from_edges(["a"], []), rng), {}, ["b"])
    dag = Dag.from_edges(["a"], [])
    with pytest.raises(NotPositive):
        StructuralModel(dag, (("0", "1"),), (np.array([1.0, 0.0]),))
    with pytest.raises(ValueError):
        StructuralModel(dag, (("0", "1"),), (np.array([0.6, 0.6]),))
