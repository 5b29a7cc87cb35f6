from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from intervallp.lp import (
    CertificateError,
    Infeasible,
    Optimal,
    PointLp,
    Unbounded,
    certificate_checks,
    dual_of,
    outcome_value,
    solve,
    verify_outcome,
)


def example1(a):
    return PointLp("min", [-1, 0], [[a, -1], [0, 1]], ["eq", "le"], [0, 1], ["nonneg", "nonneg"])


def test_example1_scenario_a1():
    out = solve(example1(1))
    assert isinstance(out, Optimal)
    assert out.value == -1 and out.primal == (1, 1)


def test_example1_scenario_a0_unbounded():
    out = solve(example1(0))
    assert isinstance(out, Unbounded)
    assert out.ray[0] > 0


def test_contradictory_equations():
    out = solve(PointLp("min", [0], [[1], [1]], ["eq", "eq"], [1, 2], ["free"]))
    assert isinstance(out, Infeasible)


def test_max_problem():
    out = solve(PointLp("max", [3], [[1]], ["le"], [2], ["nonneg"]))
    assert out.value == 6
    assert outcome_value(out, "max") == 6


def test_empty_program():
    out = solve(PointLp("min", [0], [], [], [], ["nonneg"]))
    assert out.value == 0
    assert isinstance(solve(PointLp("min", [-1], [], [], [], ["nonneg"])), Unbounded)


def test_dual_of_empty_program_is_trivial():
    d = dual_of(PointLp("min", [0], [], [], [], ["nonneg"]))
    assert solve(d).value == 0


def test_dual_of_example1_matches_dual_family():
    # dual of the a = 1 scenario: max -y2 ... written with explicit sign row y2 <= 0
    d = dual_of(example1(1))
    assert d.sense == "max"
    assert d.A == ((1, 0), (-1, 1), (0, 1))
    assert d.rels == ("le", "le", "le")
    assert d.b == (-1, 0, 0)
    assert solve(d).value == solve(example1(1)).value


def test_forged_certificate_rejected():
    lp = example1(1)
    with pytest.raises(CertificateError):
        verify_outcome(lp, Optimal(F(-2), (F(2), F(1)), (F(0), F(0))))
    with pytest.raises(CertificateError):
        verify_outcome(lp, Infeasible((F(1), F(0))))
    with pytest.raises(CertificateError):
        verify_outcome(lp, Unbounded((F(1), F(1)), (F(0), F(1))))


def test_certificates_are_counted():
    before = certificate_checks["optimal"]
    solve(example1(1))
    assert certificate_checks["optimal"] == before + 1


small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def point_lps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 3))
    return PointLp(
        draw(st.sampled_from(["min", "max"])),
        [draw(small) for _ in range(n)],
        [[draw(small) for _ in range(n)] for _ in range(m)],
        [draw(st.sampled_from(["eq", "le", "ge"])) for _ in range(m)],
        [draw(small) for _ in range(m)],
        [draw(st.sampled_from(["free", "nonneg"])) for _ in range(n)],
    )


@settings(max_examples=150, deadline=None)
@given(point_lps())
def test_strong_duality_with_explicit_dual(lp):
    out = solve(lp)  # certificate already verified inside
    dual = solve(dual_of(lp))
    if isinstance(out, Optimal):
        assert isinstance(dual, Optimal) and dual.value == out.value
    elif isinstance(out, Unbounded):
        assert isinstance(dual, Infeasible)
    else:
        assert not isinstance(dual, Optimal)


@settings(max_examples=60, deadline=None)
@given(point_lps())
def test_dual_twice_keeps_value(lp):
    a = solve(lp)
    b = solve(dual_of(dual_of(lp)))
    assert outcome_value(a, lp.sense) == outcome_value(b, lp.sense)
