"""Randomized verification suites for the transformation properties.

Each suite draws programs from :func:`generate`, applies one property check
and records every failure as a self-contained counterexample (program JSON
plus point) that :func:`replay` can re-run later.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .analysis import (
    FormulaPreconditionError,
    RangeDiscrepancy,
    finite_value_backmap,
    is_weakly_feasible,
    is_weakly_optimal_fixed,
    lower_bound_formula,
    oettli_prager_feasible,
    optimal_value_range,
    upper_bound_formula,
)
from .generator import GeneratorConfig, generate
from .intervals import DEFAULT_CAP, EnumerationCapExceeded, format_extended, format_rational
from .lp import Optimal, PointLp, solve
from .model import IlpProgram, center_scenario, classify, endpoint_program_scenarios, program_from_json, program_to_json
from .transforms import split_equations, substitute_nonneg

THEOREMS = ("thm1", "thm2", "thm3", "thm5", "thm7-sub-fbar", "thm8", "thm9", "subset-remark", "formula-oracle")
ORACLES = ("enumerate", "formula")


class Regenerate(Exception):
    """The instance is outside what the check can decide; draw another."""


@dataclass
class TheoremReport:
    theorem: str
    trials: int
    failures: list = field(default_factory=list)
    seed: int = 0
    elapsed: float = 0.0
    regenerated: int = 0
    oracle: str = "enumerate"
    config: Optional[dict] = None
    values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "trials": self.trials,
            "failures": self.failures,
            "seed": self.seed,
            "elapsed": round(self.elapsed, 3),
            "regenerated": self.regenerated,
            "oracle": self.oracle,
            "config": self.config,
            "values": self.values,
        }

    def summary(self) -> str:
        return (f"{self.theorem}: {self.verdict} ({self.trials} trials, {len(self.failures)} failures, "
                f"{self.regenerated} regenerated, {self.elapsed:.2f}s)")


# -- property checks: return None on success, a description on failure ----------------

def _ext(v) -> str:
    return format_extended(v)


def check_thm1(p: IlpProgram, x, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    q, _ = split_equations(p)
    before, after = is_weakly_feasible(p, x), is_weakly_feasible(q, x)
    if before != after:
        return f"weak feasibility {before} before split, {after} after"
    if oettli_prager_feasible(p, x) != before:
        return "dot-range test and Oettli-Prager test disagree"
    return None


def _optimal_points(p: IlpProgram, cap: int) -> list[tuple]:
    """Distinct optimal solutions of the endpoint scenarios, in scan order."""
    seen: dict[tuple, None] = {}
    for sc in endpoint_program_scenarios(p, cap):
        out = solve(sc.to_point_lp())
        if isinstance(out, Optimal):
            seen.setdefault(out.primal, None)
    return list(seen)


def _check_optimal_maps(p: IlpProgram, transform, cap: int) -> Optional[str]:
    q, rec = transform(p)
    for x in _optimal_points(p, cap):
        z = rec.forward(x)
        if not is_weakly_optimal_fixed(q, z)[0]:
            return f"optimal point {[format_rational(v) for v in x]} maps to non-optimal {[format_rational(v) for v in z]}"
    for z in _optimal_points(q, cap):
        x = rec.backward(z)
        if not is_weakly_optimal_fixed(p, x)[0]:
            return f"transformed optimum {[format_rational(v) for v in z]} maps back to non-optimal {[format_rational(v) for v in x]}"
    return None


def check_thm2(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    return _check_optimal_maps(p, split_equations, cap)


def check_thm3(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    return _check_optimal_maps(p, substitute_nonneg, cap)


def _check_backmap(p: IlpProgram, transform, cap: int) -> Optional[str]:
    q, rec = transform(p)
    for sc in endpoint_program_scenarios(q, cap):
        out = solve(sc.to_point_lp())
        if not isinstance(out, Optimal):
            continue
        back = finite_value_backmap(p, q, rec, sc, out.primal)
        again = solve(back.to_point_lp())
        if not isinstance(again, Optimal) or again.value != out.value:
            got = again.value if isinstance(again, Optimal) else again.status
            return f"transformed scenario {sc.to_json()} has value {out.value}, backmapped scenario gives {got}"
    return None


def check_thm8(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    return _check_backmap(p, split_equations, cap)


def check_thm9(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    return _check_backmap(p, substitute_nonneg, cap)


def _lower(p: IlpProgram, oracle: str, cap: int):
    if oracle == "enumerate":
        return optimal_value_range(p, "enumerate", cap).f_lower
    return lower_bound_formula(p)[0]


def _upper(p: IlpProgram, oracle: str, cap: int):
    if oracle == "enumerate":
        return optimal_value_range(p, "enumerate", cap).f_upper
    try:
        return upper_bound_formula(p, cap)[0]
    except FormulaPreconditionError as e:
        raise Regenerate(str(e)) from e


def check_thm5(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    q, _ = split_equations(p)
    a, b = _lower(p, oracle, cap), _lower(q, oracle, cap)
    if a != b:
        return f"best-case value {_ext(a)} before split, {_ext(b)} after"
    return None


def check_thm7_sub_fbar(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    q, _ = substitute_nonneg(p)
    a, b = _upper(p, oracle, cap), _upper(q, oracle, cap)
    if a != b:
        return f"worst-case value {_ext(a)} before substitution, {_ext(b)} after"
    return None


def check_subset_remark(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    r = optimal_value_range(p, "enumerate", cap)
    for name, transform in (("split", split_equations), ("substitution", substitute_nonneg)):
        q, rec = transform(p)
        if not rec.duplicated():
            continue
        s = optimal_value_range(q, "enumerate", cap)
        if s.f_lower > r.f_lower or s.f_upper < r.f_upper:
            return (f"{name} narrowed the range from [{_ext(r.f_lower)}, {_ext(r.f_upper)}] "
                    f"to [{_ext(s.f_lower)}, {_ext(s.f_upper)}]")
    return None


def check_formula_oracle(p: IlpProgram, x=None, oracle: str = "enumerate", cap: int = DEFAULT_CAP) -> Optional[str]:
    try:
        optimal_value_range(p, "both", cap)
    except RangeDiscrepancy as e:
        return str(e)
    except FormulaPreconditionError as e:
        raise Regenerate(str(e)) from e
    return None


CHECKS: dict[str, Callable] = {
    "thm1": check_thm1,
    "thm2": check_thm2,
    "thm3": check_thm3,
    "thm5": check_thm5,
    "thm7-sub-fbar": check_thm7_sub_fbar,
    "thm8": check_thm8,
    "thm9": check_thm9,
    "subset-remark": check_subset_remark,
    "formula-oracle": check_formula_oracle,
}

_FIXED = GeneratorConfig(n_vars=3, n_rows=2, min_eq_rows=1, max_intervals=3, fixed_matrix=True)

# generator settings per suite, all within the desk-scale caps
DEFAULT_CONFIGS: dict[str, GeneratorConfig] = {
    "thm1": GeneratorConfig(n_vars=3, n_rows=3, min_eq_rows=1, max_intervals=8),
    "thm2": _FIXED,
    "thm3": _FIXED,
    "thm5": GeneratorConfig(n_vars=3, n_rows=2, min_eq_rows=1, max_intervals=5),
    "thm7-sub-fbar": GeneratorConfig(n_vars=2, n_rows=3, relations=("le", "ge"), free_fraction=1, max_intervals=5),
    "thm8": _FIXED,
    "thm9": _FIXED,
    "subset-remark": GeneratorConfig(n_vars=2, n_rows=2, min_eq_rows=1, max_intervals=4),
    "formula-oracle": GeneratorConfig(n_vars=2, n_rows=2, max_intervals=5, fixed_matrix=True),
}

DEFAULT_TRIALS = {"thm1": 1000, "thm2": 200, "thm3": 200, "thm5": 200, "thm7-sub-fbar": 200,
                  "thm8": 200, "thm9": 200, "subset-remark": 300, "formula-oracle": 100}


def _box_point(rng: random.Random, n: int, bound: int = 3, den: int = 4) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-bound * den, bound * den), den) for _ in range(n))


def sample_point(p: IlpProgram, rng: random.Random) -> tuple[Fraction, ...]:
    """Half the time a uniform box point, otherwise a perturbed vertex of the
    centre scenario (so that feasible and borderline points show up)."""
    if rng.random() < 0.5:
        return _box_point(rng, p.n)
    lp = center_scenario(p).to_point_lp()
    direction = [Fraction(rng.randint(-3, 3)) for _ in range(p.n)]
    out = solve(PointLp("min", direction, lp.A, lp.rels, lp.b, lp.signs))
    if not isinstance(out, Optimal):
        return _box_point(rng, p.n)
    shift = (0, 0, 0, Fraction(1, 4), Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 2))
    return tuple(v + rng.choice(shift) for v in out.primal)


def _suitable(theorem: str, p: IlpProgram) -> bool:
    if theorem in ("thm1", "thm2", "thm5", "thm8"):
        return any(r.rel == "eq" for r in p.rows)
    if theorem in ("thm3", "thm9"):
        return "free" in p.signs
    if theorem == "thm7-sub-fbar":
        return classify(p).kind == "TypeII"
    return True


def _counterexample(theorem: str, oracle: str, p: IlpProgram, x, detail: str, cap: int) -> dict:
    return {
        "theorem": theorem,
        "oracle": oracle,
        "cap": cap,
        "program": program_to_json(p),
        "point": None if x is None else [format_rational(v) for v in x],
        "detail": detail,
    }


def replay(cx: dict) -> Optional[str]:
    """Re-run a serialized counterexample; returns the failure text again if
    it still fails, else ``None``."""
    p = program_from_json(cx["program"])
    x = None if cx.get("point") is None else tuple(Fraction(v) for v in cx["point"])
    return CHECKS[cx["theorem"]](p, x, cx.get("oracle", "enumerate"), cx.get("cap", DEFAULT_CAP))


def verify_theorem(theorem: str, cfg: GeneratorConfig | None = None, trials: int | None = None,
                   seed: int = 0, oracle: str = "enumerate", cap: int = DEFAULT_CAP,
                   max_regenerations: int | None = None) -> TheoremReport:
    """Run ``trials`` random instances of one property check.

    Instances the check cannot decide (enumeration cap exceeded, undecided
    strong feasibility for the formula oracle, wrong program form) are
    replaced by fresh draws and counted in ``regenerated``.
    """
    if theorem not in CHECKS:
        raise ValueError(f"unknown theorem id {theorem!r}; choose from {', '.join(THEOREMS)}")
    if oracle not in ORACLES:
        raise ValueError(f"unknown oracle {oracle!r}")
    cfg = cfg or DEFAULT_CONFIGS[theorem]
    trials = DEFAULT_TRIALS[theorem] if trials is None else trials
    limit = 20 * trials + 100 if max_regenerations is None else max_regenerations
    check = CHECKS[theorem]
    rng = random.Random(seed)
    report = TheoremReport(theorem, trials, seed=seed, oracle=oracle, config=cfg.to_json())
    start = time.perf_counter()
    done = 0
    while done < trials:
        p = generate(cfg.with_seed(rng.getrandbits(32)))
        x = sample_point(p, rng) if theorem == "thm1" else None
        try:
            if not _suitable(theorem, p):
                raise Regenerate("program form does not fit the property")
            detail = check(p, x, oracle, cap)
        except (EnumerationCapExceeded, Regenerate):
            report.regenerated += 1
            if report.regenerated > limit:
                raise RuntimeError(f"{theorem}: more than {limit} instances regenerated")
            continue
        if detail is not None:
            report.failures.append(_counterexample(theorem, oracle, p, x, detail, cap))
        done += 1
    report.elapsed = time.perf_counter() - start
    return report


__all__ = [
    "CHECKS", "DEFAULT_CONFIGS", "DEFAULT_TRIALS", "ORACLES", "THEOREMS", "TheoremReport",
    "replay", "sample_point", "verify_theorem",
]
