from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from intervallp.analysis import optimal_value_range
from intervallp.fixtures import example1, example2, example3a, example3b
from intervallp.generator import GeneratorConfig, generate
from intervallp.intervals import Interval
from intervallp.lp import Infeasible, Optimal, Unbounded, outcome_value, solve
from intervallp.model import IlpProgram, Var, classify, endpoint_program_scenarios, scenario
from intervallp.transforms import add_slack, flip_objective, split_equations, substitute_nonneg


def test_flip_max_to_min():
    p = IlpProgram.build("max", [["0", "1"]], [([1], "le", 1)], [Var("x")])
    q, rec = flip_objective(p)
    assert q.sense == "min" and q.objective[0].iv == Interval(F(-1), F(0))
    assert flip_objective(q)[0].replace(provenance=()) == p
    assert rec.duplicated() == []


def test_flip_crisp_value():
    p = IlpProgram.build("max", [3], [([1], "le", 2)], [Var("x")])
    q, _ = flip_objective(p)
    assert solve(scenario(p).to_point_lp()).value == 6
    assert solve(scenario(q).to_point_lp()).value == -6


def test_slack_form():
    p = IlpProgram.build("min", [1, 1], [([["1", "2"], 1], "le", 4)], [Var("x"), Var("y")])
    q, rec = add_slack(p)
    assert [r.rel for r in q.rows] == ["eq"] and q.n == 3 and q.vars[2].sign == "nonneg"
    assert rec.duplicated() == []
    eq_only = IlpProgram.build("min", [1], [([1], "eq", 1)], [Var("x")])
    assert add_slack(eq_only)[0] == eq_only


def test_slack_value_in_example1():
    p = example1()
    q, rec = add_slack(p)
    for a in (0, 1):
        sc = scenario(p, {"a1_1": a})
        z = rec.forward([1, 1], sc)
        assert z[-1] == 0  # 1 - x2
        assert rec.backward(z) == (1, 1)


def test_split_example1_makes_independent_copies():
    q, rec = split_equations(example1())
    (k1, s1), (k2, s2) = rec.mapping["a1_1"]
    assert k1 != k2 and (s1, s2) == (1, -1)
    assert q.coefficient(k1).iv == Interval(F(0), F(1))
    assert q.coefficient(k2).iv == Interval(F(-1), F(0))
    # the scenario "1 x1 - x2 <= 0, 0 x1 - x2 >= 0" exists and has optimum (0, 0)
    sc = scenario(q, {k1: 1, k2: 0})
    out = solve(sc.to_point_lp())
    assert isinstance(out, Optimal) and out.primal == (0, 0)


def test_split_crisp_equation_keeps_scenarios():
    p = IlpProgram.build("min", [1], [([1], "eq", 1)], [Var("x", "free")])
    q, _ = split_equations(p)
    assert len(list(endpoint_program_scenarios(q))) == 1
    assert solve(scenario(q).to_point_lp()).value == 1


def test_split_example3b_creates_infeasible_scenario():
    q, rec = split_equations(example3b())
    (k1, _), (k2, _) = rec.mapping["b1"]
    out = solve(scenario(q, {k1: 0, k2: -1}).to_point_lp())  # y <= 0, y >= 1
    assert isinstance(out, Infeasible)


def test_substitute_example2_copies_column():
    q, rec = substitute_nonneg(example2(), [0])
    assert [v.name for v in q.vars] == ["y1+", "y1-", "y2"]
    assert q.coefficient("a1_1+").iv == Interval(F(0), F(1))
    assert q.coefficient("a1_1-").iv == Interval(F(-1), F(0))
    assert set(rec.duplicated()) == {"c1", "a1_1", "a2_1", "a3_1"}


def test_substitute_example3a_unbounded_scenario():
    q, _ = substitute_nonneg(example3a())
    # objective 0 x+ - 1 x-
    sc = scenario(q, {"c1+": 0, "c1-": -1})
    assert isinstance(solve(sc.to_point_lp()), Unbounded)


def test_substitute_rejects_sign_restricted():
    with pytest.raises(ValueError):
        substitute_nonneg(example1(), [0])
    with pytest.raises(IndexError):
        substitute_nonneg(example2(), [5])


def test_point_maps_round_trip():
    q, rec = substitute_nonneg(example2())
    z = rec.forward([F(-3, 2), 2])
    assert z == (0, F(3, 2), 2, 0)
    assert rec.backward(z) == (F(-3, 2), 2)


def test_fresh_ids_never_collide():
    p = IlpProgram.build("min", [1], [([["0", "1"]], "eq", 1)], [Var("x")])
    # an id that the splitter would otherwise mint
    p = p.replace(objective=(p.objective[0].__class__("a1_1.1", p.objective[0].iv),))
    q, _ = split_equations(p)
    ids = [c.id for c in q.coefficients()]
    assert len(ids) == len(set(ids))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_original_scenarios_embed(seed):
    """Every source scenario lifts to a target scenario with the same value."""
    p = generate(GeneratorConfig(n_vars=2, n_rows=2, min_eq_rows=1, max_intervals=4, seed=seed))
    for transform in (split_equations, substitute_nonneg, flip_objective, add_slack):
        q, rec = transform(p)
        for sc in list(endpoint_program_scenarios(p))[:4]:
            lifted = rec.lift(sc, q)
            a = outcome_value(solve(sc.to_point_lp()), p.sense)
            b = outcome_value(solve(lifted.to_point_lp()), q.sense)
            assert b == (-a if rec.kind == "flip" else a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_transformed_range_contains_original(seed):
    p = generate(GeneratorConfig(n_vars=2, n_rows=2, min_eq_rows=1, max_intervals=3, seed=seed))
    r = optimal_value_range(p)
    for transform in (split_equations, substitute_nonneg):
        s = optimal_value_range(transform(p)[0])
        assert s.f_lower <= r.f_lower and s.f_upper >= r.f_upper


def test_transforms_append_provenance_and_classes():
    q, _ = split_equations(example1())
    assert classify(q).kind == "TypeIII"
    r, _ = substitute_nonneg(example2())
    assert classify(r).kind == "TypeIII"
    assert [rec.kind for rec in r.provenance] == ["nonneg"]
