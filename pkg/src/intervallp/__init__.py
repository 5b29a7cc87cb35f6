"""Exact interval linear programming and the effect of LP transformations
on feasible sets, optimal sets and optimal value ranges."""
from .analysis import (
    FormulaPreconditionError,
    RangeDiscrepancy,
    StrongFeasibility,
    ValueRange,
    dualize,
    finite_value_backmap,
    is_weakly_feasible,
    is_weakly_optimal_fixed,
    lower_bound_formula,
    oettli_prager_feasible,
    optimal_value_range,
    strong_feasibility,
    upper_bound_formula,
    weak_optimality_search,
)
from .fixtures import FIXTURES, run_fixture
from .generator import GeneratorConfig, generate
from .harness import THEOREMS, TheoremReport, replay, verify_theorem
from .intervals import NEG_INF, POS_INF, EnumerationCapExceeded, Interval
from .lp import Infeasible, Optimal, PointLp, Unbounded, solve
from .model import Coef, IlpProgram, ProgramFormatError, Row, Scenario, Var, classify, parse, scenario, serialize
from .transforms import TransformRecord, add_slack, flip_objective, split_equations, substitute_nonneg

__all__ = [
    "Coef", "EnumerationCapExceeded", "FIXTURES", "FormulaPreconditionError", "GeneratorConfig",
    "IlpProgram", "Infeasible", "Interval", "NEG_INF", "Optimal", "POS_INF", "PointLp",
    "ProgramFormatError", "RangeDiscrepancy", "Row", "Scenario", "StrongFeasibility", "THEOREMS",
    "TheoremReport", "TransformRecord", "Unbounded", "ValueRange", "Var", "add_slack", "classify",
    "dualize", "finite_value_backmap", "flip_objective", "generate", "is_weakly_feasible",
    "is_weakly_optimal_fixed", "lower_bound_formula", "oettli_prager_feasible", "optimal_value_range",
    "parse", "replay", "run_fixture", "scenario", "serialize", "solve", "split_equations",
    "strong_feasibility", "substitute_nonneg", "upper_bound_formula", "verify_theorem",
    "weak_optimality_search",
]
