"""Small worked programs, rebuilt and checked against their known ranges and optima."""
from __future__ import annotations

import math
import time
from typing import Callable

from .analysis import is_weakly_feasible, optimal_value_range, weak_optimality_search, dualize
from .harness import TheoremReport
from .intervals import format_extended
from .lp import Infeasible, Optimal, Unbounded
from .model import IlpProgram, Var, classify
from .transforms import flip_objective, split_equations, substitute_nonneg

FIXTURES = ("example1", "example1-split", "example2", "example2-sub",
            "example3a", "example3a-sub", "example3b", "example3b-split")


def example1() -> IlpProgram:
    """min -x1  s.t.  [0,1] x1 - x2 = 0,  x2 <= 1,  x >= 0."""
    return IlpProgram.build(
        "min", [-1, 0],
        [([["0", "1"], -1], "eq", 0), ([0, 1], "le", 1)],
        [Var("x1"), Var("x2")], name="example1",
    )


def example2() -> IlpProgram:
    """The dual of ``example1`` in min form, with free y."""
    return IlpProgram.build(
        "min", [0, -1],
        [([["0", "1"], 0], "le", -1), ([-1, 1], "le", 0), ([0, 1], "le", 0)],
        [Var("y1", "free"), Var("y2", "free")], name="example2",
    )


def example3a() -> IlpProgram:
    """min [0,1] x  s.t.  x >= 1,  x free."""
    return IlpProgram.build("min", [["0", "1"]], [([1], "ge", 1)], [Var("x", "free")], name="example3a")


def example3b() -> IlpProgram:
    """min -y  s.t.  y = [0,1],  y free."""
    return IlpProgram.build("min", [-1], [([1], "eq", ["0", "1"])], [Var("y", "free")], name="example3b")


class _Checks:
    def __init__(self, name: str):
        self.report = TheoremReport(f"fixture:{name}", 1)
        self.start = time.perf_counter()

    def expect(self, label: str, ok: bool):
        if not ok:
            self.report.failures.append({"check": label})

    def value(self, key: str, v):
        self.report.values[key] = v

    def range(self, r):
        self.value("f_lower", format_extended(r.f_lower))
        self.value("f_upper", format_extended(r.f_upper))

    def done(self) -> TheoremReport:
        self.report.elapsed = time.perf_counter() - self.start
        return self.report


def _pt(x):
    return [str(v) for v in x]


def _fx_example1(ck: _Checks):
    p = example1()
    for method in ("enumerate", "formula", "both"):
        r = optimal_value_range(p, method)
        ck.expect(f"{method}: range is (-inf, -1]", r.bounds == (-math.inf, -1))
    ck.range(r)
    hit = weak_optimality_search(p, [1, 1])
    ck.expect("(1,1) weakly optimal", hit.found)
    if hit.found:
        ck.value("witness (1,1)", hit.scenario.to_json())
    ck.expect("(0,0) weakly feasible", is_weakly_feasible(p, [0, 0]))
    ck.expect("(0,0) not found optimal", not weak_optimality_search(p, [0, 0]).found)


def _fx_example1_split(ck: _Checks):
    p = example1()
    q, rec = split_equations(p, [0])
    hit = weak_optimality_search(q, [0, 0])
    ck.expect("(0,0) weakly optimal after split", hit.found)
    if hit.found:
        (first, s1), (second, s2) = rec.mapping["a1_1"]
        a = (s1 * hit.scenario[first], s2 * hit.scenario[second])
        ck.value("witness (a1, a2)", _pt(a))
        ck.expect("witness (a1, a2) = (1, 0)", a == (1, 0))
        out = hit.scenario.to_point_lp()
        ck.expect("value 0 at the witness", out.objective([0, 0]) == 0)
    r = optimal_value_range(q)
    ck.range(r)
    ck.expect("0 inside the transformed range", r.f_lower <= 0 <= r.f_upper)


def _fx_example2(ck: _Checks):
    p = example2()
    for method in ("enumerate", "formula"):
        r = optimal_value_range(p, method)
        ck.expect(f"{method}: range is [1, +inf)", r.bounds == (1, math.inf))
    ck.range(r)
    d = flip_objective(dualize(example1()))[0]
    ck.expect("dualized example1 has the same range", optimal_value_range(d).bounds == (1, math.inf))
    ck.expect("dualized example1 is TypeII", classify(d).kind == "TypeII")


def _fx_example2_sub(ck: _Checks):
    q, _ = substitute_nonneg(example2(), [0])
    r = optimal_value_range(q)
    ck.range(r)
    ck.expect("best case is 0", r.f_lower == 0)
    ck.expect("0 attained by an endpoint scenario",
              isinstance(r.outcome_lower, Optimal) and r.outcome_lower.value == 0)
    if r.witness_lower is not None:
        ck.value("witness", r.witness_lower.to_json())


def _fx_example3a(ck: _Checks):
    r = optimal_value_range(example3a(), "both")
    ck.range(r)
    ck.expect("range is [0, 1]", r.bounds == (0, 1))


def _fx_example3a_sub(ck: _Checks):
    q, _ = substitute_nonneg(example3a())
    r = optimal_value_range(q)
    ck.range(r)
    ck.expect("best case is -inf", r.f_lower == -math.inf)
    ck.expect("unbounded ray witness", isinstance(r.outcome_lower, Unbounded))
    if isinstance(r.outcome_lower, Unbounded):
        ck.value("ray", _pt(r.outcome_lower.ray))
        ck.value("witness", r.witness_lower.to_json())


def _fx_example3b(ck: _Checks):
    r = optimal_value_range(example3b(), "both")
    ck.range(r)
    ck.expect("range is [-1, 0]", r.bounds == (-1, 0))


def _fx_example3b_split(ck: _Checks):
    q, rec = split_equations(example3b())
    r = optimal_value_range(q)
    ck.range(r)
    ck.expect("worst case is +inf", r.f_upper == math.inf)
    ck.expect("infeasibility witness", isinstance(r.outcome_upper, Infeasible))
    if r.witness_upper is not None:
        (first, s1), (second, s2) = rec.mapping["b1"]
        b = (s1 * r.witness_upper[first], s2 * r.witness_upper[second])
        ck.value("witness (b1, b2)", _pt(b))
        # y <= b1 and y >= b2 cannot both hold
        ck.expect("witness has b1 < b2", b[0] < b[1])


_RUNNERS: dict[str, Callable[[_Checks], None]] = {
    "example1": _fx_example1,
    "example1-split": _fx_example1_split,
    "example2": _fx_example2,
    "example2-sub": _fx_example2_sub,
    "example3a": _fx_example3a,
    "example3a-sub": _fx_example3a_sub,
    "example3b": _fx_example3b,
    "example3b-split": _fx_example3b_split,
}


def run_fixture(name: str) -> TheoremReport:
    if name not in _RUNNERS:
        raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    ck = _Checks(name)
    _RUNNERS[name](ck)
    return ck.done()
