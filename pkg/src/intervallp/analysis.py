"""Feasibility, optimality and optimal value range of interval programs.

Two independent routes compute the optimal value range:

``enumerate``
    Solve every endpoint scenario and take min/max of the optimal values
    (infeasible counts as ``+inf``, unbounded as ``-inf`` in min form).

``formula``
    Orthant decomposition of the closed forms
    ``f_lo = inf { c_c x - c_d |x| : x weakly feasible }`` and
    ``f_hi = sup { b_c y + b_d |y| : y weakly feasible for the dual }``,
    the latter only once strong feasibility has been established.

Maximization programs are flipped to min form first and the range is
negated and swapped back.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .intervals import (
    DEFAULT_CAP,
    EnumerationCapExceeded,
    ExtRational,
    Interval,
    endpoint_scenarios,
    interval_dot_range,
    to_rational,
)
from .lp import Infeasible, LpOutcome, Optimal, PointLp, outcome_value, solve
from .model import Coef, IlpProgram, Row, Scenario, Var, endpoint_program_scenarios, scenario
from .transforms import TransformRecord, _Fresh, flip_objective, substitute_nonneg

ZERO = Fraction(0)


class RangeDiscrepancy(AssertionError):
    """The formula and the endpoint enumeration disagree."""


class FormulaPreconditionError(ValueError):
    """The worst-case formula needs strong feasibility, which is undecided."""


def _point(x, n: int) -> tuple[Fraction, ...]:
    x = tuple(to_rational(v) for v in x)
    if len(x) != n:
        raise ValueError(f"point has {len(x)} entries, program has {n} variables")
    return x


def _min_form(p: IlpProgram) -> IlpProgram:
    return flip_objective(p)[0] if p.sense == "max" else p


def _signs_ok(p: IlpProgram, x) -> bool:
    return all(v.sign == "free" or xj >= 0 for v, xj in zip(p.vars, x))


# -- weak feasibility ------------------------------------------------------------

def is_weakly_feasible(p: IlpProgram, x: Sequence) -> bool:
    """True iff ``x`` satisfies the constraints of at least one scenario."""
    x = _point(x, p.n)
    if not _signs_ok(p, x):
        return False
    for row in p.rows:
        rng = interval_dot_range([c.iv for c in row.coeffs], x)
        if row.rel == "eq" and not rng.intersects(row.rhs.iv):
            return False
        if row.rel == "le" and rng.lo > row.rhs.iv.hi:
            return False
    return True


def oettli_prager_feasible(p: IlpProgram, x: Sequence) -> bool:
    """Weak feasibility through ``|A_c x - b_c| <= A_d |x| + b_d`` (equations)
    and ``A_c x - A_d |x| <= b_hi`` (inequalities), evaluated literally."""
    x = _point(x, p.n)
    if not _signs_ok(p, x):
        return False
    absx = [abs(v) for v in x]
    for row in p.rows:
        ac = sum((c.iv.center * v for c, v in zip(row.coeffs, x)), ZERO)
        ad = sum((c.iv.radius * v for c, v in zip(row.coeffs, absx)), ZERO)
        b = row.rhs.iv
        if row.rel == "eq" and abs(ac - b.center) > ad + b.radius:
            return False
        if row.rel == "le" and ac - ad > b.hi:
            return False
    return True


def _orthant_constraints(p: IlpProgram, s: Sequence[int]):
    """Linear description of the weakly feasible set inside orthant ``s``.

    In a fixed orthant ``|x| = D_s x``, so each row splits into at most two
    linear inequalities.
    """
    A, rels, b = [], [], []
    for row in p.rows:
        lower = [c.iv.center - sj * c.iv.radius for c, sj in zip(row.coeffs, s)]
        A.append(lower)
        rels.append("le")
        b.append(row.rhs.iv.hi)
        if row.rel == "eq":
            A.append([c.iv.center + sj * c.iv.radius for c, sj in zip(row.coeffs, s)])
            rels.append("ge")
            b.append(row.rhs.iv.lo)
    for j, sj in enumerate(s):
        if p.vars[j].sign == "free":
            unit = [ZERO] * p.n
            unit[j] = Fraction(1)
            A.append(unit)
            rels.append("ge" if sj > 0 else "le")
            b.append(ZERO)
    return A, rels, b


def _orthants(p: IlpProgram):
    choices = [(1, -1) if v.sign == "free" else (1,) for v in p.vars]
    return itertools.product(*choices)


def weak_witness(p: IlpProgram, x: Sequence) -> Optional[Scenario]:
    """A scenario whose constraints hold at ``x`` and whose objective is the
    cheapest one at ``x``; ``None`` if ``x`` is not weakly feasible."""
    x = _point(x, p.n)
    if not is_weakly_feasible(p, x):
        return None
    values = {}
    for c, xj in zip(p.objective, x):
        values[c.id] = c.iv.lo if xj >= 0 else c.iv.hi
    for row in p.rows:
        lo_pick = [c.iv.lo if xj >= 0 else c.iv.hi for c, xj in zip(row.coeffs, x)]
        hi_pick = [c.iv.hi if xj >= 0 else c.iv.lo for c, xj in zip(row.coeffs, x)]
        lo_val = sum((a * v for a, v in zip(lo_pick, x)), ZERO)
        hi_val = sum((a * v for a, v in zip(hi_pick, x)), ZERO)
        if row.rel == "le":
            pick, bval = lo_pick, row.rhs.iv.hi
        else:
            target = max(lo_val, row.rhs.iv.lo)
            lam = ZERO if hi_val == lo_val else (target - lo_val) / (hi_val - lo_val)
            pick = [lo + lam * (hi - lo) for lo, hi in zip(lo_pick, hi_pick)]
            bval = target
        for c, v in zip(row.coeffs, pick):
            values[c.id] = v
        values[row.rhs.id] = bval
    return scenario(p, values)


# -- optimality ----------------------------------------------------------------------

@dataclass(frozen=True)
class OptimalityCertificate:
    scenario: Scenario
    dual: tuple[Fraction, ...]
    tight_rows: tuple[int, ...]


def is_weakly_optimal_fixed(p: IlpProgram, x: Sequence) -> tuple[bool, Optional[OptimalityCertificate]]:
    """Decide exactly whether ``x`` is optimal for some scenario of a program
    whose constraint matrix is crisp.

    The right-hand side is fixed rowwise (tight wherever the interval allows
    it) and the objective and dual vector are then found by one feasibility
    LP.
    """
    if not p.fixed_matrix:
        raise ValueError("is_weakly_optimal_fixed needs a crisp constraint matrix")
    x = _point(x, p.n)
    if not is_weakly_feasible(p, x):
        return False, None
    q = _min_form(p)
    A = [[c.iv.lo for c in row.coeffs] for row in q.rows]
    ax = [sum((a * v for a, v in zip(r, x)), ZERO) for r in A]
    m, n = q.m, q.n
    tight, bvals = [], []
    for i, row in enumerate(q.rows):
        if row.rel == "eq" or ax[i] >= row.rhs.iv.lo:
            tight.append(i)
            bvals.append(ax[i])
        else:
            bvals.append(row.rhs.iv.hi)

    # variables: c_1..c_n, y_1..y_m (all free)
    rows, rels, rhs = [], [], []

    def add(coeffs, rel, value):
        rows.append(coeffs)
        rels.append(rel)
        rhs.append(value)

    for j, c in enumerate(q.objective):
        e = [ZERO] * (n + m)
        e[j] = Fraction(1)
        add(e, "ge", c.iv.lo)
        add(list(e), "le", c.iv.hi)
    for i, row in enumerate(q.rows):
        if row.rel == "eq":
            continue
        e = [ZERO] * (n + m)
        e[n + i] = Fraction(1)
        add(e, "le" if i in tight else "eq", ZERO)
    for j, v in enumerate(q.vars):
        col = [ZERO] * (n + m)
        col[j] = Fraction(-1)
        for i in range(m):
            col[n + i] = A[i][j]
        rel = "eq" if v.sign == "free" or x[j] > 0 else "le"
        add(col, rel, ZERO)
    feas = PointLp("min", [ZERO] * (n + m), rows, rels, rhs, ("free",) * (n + m))
    out = solve(feas)
    if not isinstance(out, Optimal):
        return False, None
    cvals = out.primal[:n]
    y = out.primal[n:]
    sign = 1 if p.sense == "min" else -1
    values = {c.id: sign * cv for c, cv in zip(p.objective, cvals)}
    for row, bv in zip(p.rows, bvals):
        values[row.rhs.id] = bv
    sc = scenario(p, values)
    lp = sc.to_point_lp()
    check = solve(lp)
    if not (isinstance(check, Optimal) and check.value == lp.objective(x)):
        raise AssertionError("optimality certificate failed its scenario re-solve")
    return True, OptimalityCertificate(sc, tuple(sign * v for v in y), tuple(tight))


@dataclass(frozen=True)
class SearchResult:
    scenario: Optional[Scenario]
    examined: int

    @property
    def found(self) -> bool:
        return self.scenario is not None


def weak_optimality_search(p: IlpProgram, x: Sequence, budget: int = DEFAULT_CAP) -> SearchResult:
    """Look for an endpoint scenario in which ``x`` is optimal.

    A hit is always verified by an exact solve; running out of scenarios
    or budget only means "unknown".
    """
    x = _point(x, p.n)
    examined = 0
    coefs = p.coefficients()
    ids = [c.id for c in coefs]
    combos = itertools.product(*(c.iv.endpoints() for c in coefs))
    for combo in itertools.islice(combos, budget):
        examined += 1
        sc = Scenario(p, tuple(zip(ids, combo)))
        lp = sc.to_point_lp()
        if not lp.is_feasible(x):
            continue
        out = solve(lp)
        if isinstance(out, Optimal) and out.value == lp.objective(x):
            return SearchResult(sc, examined)
    return SearchResult(None, examined)


# -- duality -----------------------------------------------------------------------------

def dualize(p: IlpProgram) -> IlpProgram:
    """The family of duals: each interval coefficient is carried exactly once.

    Column ``j`` becomes a dual row whose right-hand side is the objective
    coefficient ``c_j``; the right-hand sides become the dual objective.
    Dual variables are free and their sign restrictions appear as explicit
    crisp rows, so ``dualize`` of the ``example1`` fixture is ``example2`` after
    a flip.
    """
    fresh = _Fresh(c.id for c in p.coefficients())
    is_min = p.sense == "min"
    zero, one = Interval.point(0), Interval.point(1)
    rows, negated = [], []
    for j, v in enumerate(p.vars):
        coeffs = [row.coeffs[j] for row in p.rows]
        rhs = p.objective[j]
        if v.sign == "free":
            rows.append(Row(tuple(coeffs), "eq", rhs))
        elif is_min:
            rows.append(Row(tuple(coeffs), "le", rhs))
        else:
            rows.append(Row(tuple(Coef(c.id, -c.iv) for c in coeffs), "le", Coef(rhs.id, -rhs.iv)))
            negated.append(len(rows) - 1)
    for i, row in enumerate(p.rows):
        if row.rel == "eq":
            continue
        k = len(rows)
        unit = tuple(
            Coef(fresh(f"d{k + 1}_{r + 1}"), (one if is_min else -one) if r == i else zero)
            for r in range(p.m)
        )
        rows.append(Row(unit, "le", Coef(fresh(f"d{k + 1}"), zero)))
        if not is_min:
            negated.append(k)
    return IlpProgram(
        sense="max" if is_min else "min",
        objective=tuple(row.rhs for row in p.rows),
        rows=tuple(rows),
        vars=tuple(Var(f"y{i + 1}", "free") for i in range(p.m)),
        name=f"dual of {p.name}" if p.name else "",
        negated_rows=tuple(negated),
    )


# -- strong feasibility --------------------------------------------------------------------

@dataclass(frozen=True)
class StrongFeasibility:
    verdict: str  # "yes" | "no" | "undecided"
    witness: Optional[Scenario] = None
    method: str = ""


def _constraints_scenario(p: IlpProgram, rhs: dict[str, Fraction], matrix: dict[str, Fraction] | None = None) -> Scenario:
    values = {c.id: c.iv.lo for c in p.objective}
    for row in p.rows:
        for c in row.coeffs:
            values[c.id] = (matrix or {}).get(c.id, c.iv.lo)
        values[row.rhs.id] = rhs.get(row.rhs.id, row.rhs.iv.lo)
    return scenario(p, values)


def _feasible(sc: Scenario) -> bool:
    return not isinstance(solve(sc.to_point_lp()), Infeasible)


def strong_feasibility(p: IlpProgram, cap: int = DEFAULT_CAP) -> StrongFeasibility:
    """Is every scenario feasible?

    Decided exactly for a crisp matrix (convexity of the attainable
    right-hand sides, monotonicity in the inequality rows) and for
    inequality-only systems with the upper matrix against the lower
    right-hand side. Otherwise an endpoint scan may still find an
    infeasible scenario; failing that the answer is undecided.
    """
    if p.fixed_matrix:
        eq_rhs = [r.rhs for r in p.rows if r.rel == "eq"]
        try:
            combos = endpoint_scenarios([c.iv for c in eq_rhs], cap)
        except EnumerationCapExceeded:
            return StrongFeasibility("undecided", method="fixed-matrix cap")
        for combo in combos:
            rhs = {c.id: v for c, v in zip(eq_rhs, combo)}
            sc = _constraints_scenario(p, rhs)
            if not _feasible(sc):
                return StrongFeasibility("no", sc, "fixed-matrix")
        return StrongFeasibility("yes", method="fixed-matrix")

    if all(r.rel == "le" for r in p.rows):
        return _strong_feasibility_le(p)

    if strong_solution(p) is not None:
        return StrongFeasibility("yes", method="strong solution")

    try:
        for sc in endpoint_program_scenarios(_objective_free(p), cap):
            if not _feasible(sc):
                return StrongFeasibility("no", scenario(p, sc.as_dict()), "endpoint scan")
    except EnumerationCapExceeded:
        pass
    return StrongFeasibility("undecided", method="endpoint scan")


def _strong_feasibility_le(p: IlpProgram) -> StrongFeasibility:
    """Inequality systems: split free variables, then the single scenario with
    the upper matrix and the lower right-hand side decides everything.

    When that scenario is infeasible its Farkas vector ``u`` has
    ``u^T A_lo_j <= 0 <= u^T A_hi_j`` on free columns, so interpolating each
    such column to ``u^T A_j = 0`` yields an infeasible scenario of ``p``.
    """
    q, _ = substitute_nonneg(p)
    matrix = {c.id: c.iv.hi for r in q.rows for c in r.coeffs}
    out = solve(_constraints_scenario(q, {}, matrix).to_point_lp())
    if not isinstance(out, Infeasible):
        return StrongFeasibility("yes", method="upper-matrix")
    u = [-v for v in out.farkas]
    values = {}
    for j, var in enumerate(p.vars):
        col = [row.coeffs[j] for row in p.rows]
        if var.sign == "nonneg":
            pick = [c.iv.hi for c in col]
        else:
            lo = sum((ui * c.iv.lo for ui, c in zip(u, col)), ZERO)
            hi = sum((ui * c.iv.hi for ui, c in zip(u, col)), ZERO)
            lam = ZERO if hi == lo else -lo / (hi - lo)
            pick = [c.iv.lo + lam * (c.iv.hi - c.iv.lo) for c in col]
        values.update({c.id: v for c, v in zip(col, pick)})
    sc = _constraints_scenario(p, {}, values)
    if _feasible(sc):
        raise AssertionError("interpolated Farkas witness is feasible")
    return StrongFeasibility("no", sc, "upper-matrix")


def strong_solution(p: IlpProgram) -> Optional[tuple[Fraction, ...]]:
    """A point feasible in every scenario, if one exists.

    Equations admit one only with a crisp right-hand side that ``a x`` hits
    for every ``a``; inequalities need the largest ``a x`` below the
    smallest right-hand side. One LP per orthant of the free variables.
    """
    if any(r.rel == "eq" and not r.rhs.iv.is_degenerate for r in p.rows):
        return None
    for s in _orthants(p):
        A, rels, b = [], [], []
        for row in p.rows:
            upper = [c.iv.center + sj * c.iv.radius for c, sj in zip(row.coeffs, s)]
            A.append(upper)
            rels.append("le")
            b.append(row.rhs.iv.lo)
            if row.rel == "eq":
                A.append([c.iv.center - sj * c.iv.radius for c, sj in zip(row.coeffs, s)])
                rels.append("ge")
                b.append(row.rhs.iv.lo)
        for j, sj in enumerate(s):
            if p.vars[j].sign == "free":
                unit = [ZERO] * p.n
                unit[j] = Fraction(1)
                A.append(unit)
                rels.append("ge" if sj > 0 else "le")
                b.append(ZERO)
        out = solve(PointLp("min", [ZERO] * p.n, A, rels, b, p.signs))
        if isinstance(out, Optimal):
            return out.primal
    return None


def _objective_free(p: IlpProgram) -> IlpProgram:
    # the objective does not affect feasibility; pin it to skip 2^k repeats
    return p.replace(objective=tuple(Coef(c.id, Interval.point(c.iv.lo)) for c in p.objective))


# -- optimal value range -------------------------------------------------------------------

@dataclass(frozen=True)
class ValueRange:
    f_lower: ExtRational
    f_upper: ExtRational
    witness_lower: Optional[Scenario] = None
    witness_upper: Optional[Scenario] = None
    outcome_lower: Optional[LpOutcome] = field(default=None, compare=False)
    outcome_upper: Optional[LpOutcome] = field(default=None, compare=False)
    method: str = ""
    # optimizer certified by the formula route, in the program's variables
    optimizer_lower: Optional[tuple] = field(default=None, compare=False)

    @property
    def bounds(self) -> tuple[ExtRational, ExtRational]:
        return self.f_lower, self.f_upper


def _enumerate_min(p: IlpProgram, cap: int) -> ValueRange:
    lo = hi = None
    for sc in endpoint_program_scenarios(p, cap):
        out = solve(sc.to_point_lp())
        v = outcome_value(out, "min")
        if lo is None or v < lo[0]:
            lo = (v, sc, out)
        if hi is None or v > hi[0]:
            hi = (v, sc, out)
    return ValueRange(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2], "enumerate")


def _formula_lower_min(p: IlpProgram) -> tuple[ExtRational, Optional[tuple], Optional[LpOutcome]]:
    best: tuple = (math.inf, None, None)
    for s in _orthants(p):
        A, rels, b = _orthant_constraints(p, s)
        c = [co.iv.center - sj * co.iv.radius for co, sj in zip(p.objective, s)]
        out = solve(PointLp("min", c, A, rels, b, p.signs))
        v = outcome_value(out, "min")
        if v < best[0]:
            best = (v, out.primal if isinstance(out, Optimal) else None, out)
        if v == -math.inf:
            break
    return best


def lower_bound_formula(p: IlpProgram):
    """Best-case value of a min program by orthant decomposition.

    Returns ``(value, optimizer, witness scenario)``; the witness is re-solved
    and must attain the value. For ``-inf`` or ``+inf`` there is no optimizer.
    """
    f_lo, x_lo, _ = _formula_lower_min(p)
    w_lo = None
    if x_lo is not None:
        w_lo = weak_witness(p, x_lo)
        check = solve(w_lo.to_point_lp())
        if outcome_value(check) != f_lo:
            raise RangeDiscrepancy(f"lower-bound witness attains {outcome_value(check)}, formula {f_lo}")
    return f_lo, x_lo, w_lo


def upper_bound_formula(p: IlpProgram, cap: int = DEFAULT_CAP):
    """Worst-case value of a min program through the dual weak feasible set.

    Returns ``(value, witness scenario)``. Without strong feasibility the
    value is ``+inf`` witnessed by an infeasible scenario; if strong
    feasibility cannot be decided :class:`FormulaPreconditionError` is raised.
    """
    sf = strong_feasibility(p, cap)
    if sf.verdict == "no":
        return math.inf, sf.witness
    if sf.verdict != "yes":
        raise FormulaPreconditionError("strong feasibility undecided; the worst-case formula needs it")
    dual_min = flip_objective(dualize(p))[0]
    g, y, _ = _formula_lower_min(dual_min)
    f_hi = -g
    w_hi = None
    if y is not None:
        w_hi = _upper_witness(p, dual_min, y)
        check = solve(w_hi.to_point_lp())
        if outcome_value(check) != f_hi:
            raise RangeDiscrepancy(f"upper-bound witness attains {outcome_value(check)}, formula {f_hi}")
    return f_hi, w_hi


def _formula_min(p: IlpProgram, cap: int) -> ValueRange:
    f_lo, x_lo, w_lo = lower_bound_formula(p)
    f_hi, w_hi = upper_bound_formula(p, cap)
    out_lo = solve(w_lo.to_point_lp()) if w_lo is not None else None
    out_hi = solve(w_hi.to_point_lp()) if w_hi is not None else None
    return ValueRange(f_lo, f_hi, w_lo, w_hi, out_lo, out_hi, "formula", optimizer_lower=x_lo)


def _upper_witness(p: IlpProgram, dual_min: IlpProgram, y) -> Scenario:
    """Primal scenario attaining the worst-case value found at dual point ``y``."""
    dsc = weak_witness(dual_min, y)
    values = dsc.as_dict()
    pv = {}
    for c in p.objective:
        pv[c.id] = values[c.id]
    for row in p.rows:
        for c in row.coeffs:
            pv[c.id] = values[c.id]
        # dual objective was flipped: stored -b
        pv[row.rhs.id] = -values[row.rhs.id]
    return scenario(p, pv)


def optimal_value_range(p: IlpProgram, method: str = "enumerate", cap: int = DEFAULT_CAP) -> ValueRange:
    """Best and worst optimal value over all scenarios of ``p``."""
    if method not in ("enumerate", "formula", "both"):
        raise ValueError(f"unknown method {method!r}")
    q = _min_form(p)
    if method == "enumerate":
        r = _enumerate_min(q, cap)
    elif method == "formula":
        r = _formula_min(q, cap)
    else:
        e = _enumerate_min(q, cap)
        f = _formula_min(q, cap)
        if (e.f_lower, e.f_upper) != (f.f_lower, f.f_upper):
            raise RangeDiscrepancy(
                f"enumeration gives [{e.f_lower}, {e.f_upper}], formula [{f.f_lower}, {f.f_upper}]"
            )
        r = ValueRange(e.f_lower, e.f_upper, e.witness_lower, e.witness_upper,
                       e.outcome_lower, e.outcome_upper, "both", f.optimizer_lower)
    if p.sense == "min":
        return r
    return ValueRange(-r.f_upper, -r.f_lower, _back(r.witness_upper, p), _back(r.witness_lower, p),
                      r.outcome_upper, r.outcome_lower, r.method)


def _back(sc: Optional[Scenario], p: IlpProgram) -> Optional[Scenario]:
    """Translate a min-form scenario back to the max program ``p``."""
    if sc is None:
        return None
    values = sc.as_dict()
    for c in p.objective:
        values[c.id] = -values[c.id]
    return scenario(p, values)


# -- finite optimal values under transformation -------------------------------------------

def finite_value_backmap(p_orig: IlpProgram, p_trans: IlpProgram, record: TransformRecord,
                         scen: Scenario, x: Sequence) -> Scenario:
    """A scenario of ``p_orig`` whose optimal value equals the finite optimal
    value ``x`` attains in scenario ``scen`` of ``p_trans``.

    Splitting: the equation gets right-hand side ``A x``. Substitution: the
    objective coefficient of a split column becomes ``A_j^T y`` for the dual
    certificate ``y`` of ``scen``.
    """
    if not p_orig.fixed_matrix:
        raise ValueError("finite_value_backmap needs a crisp constraint matrix")
    lp = scen.to_point_lp()
    x = _point(x, p_trans.n)
    out = solve(lp)
    if not isinstance(out, Optimal) or not lp.is_feasible(x) or lp.objective(x) != out.value:
        raise ValueError("x is not optimal with a finite value in the given scenario")
    tv = scen.as_dict()
    values: dict[str, Fraction] = {}
    for old, targets in record.id_map:
        new, s = targets[0]
        values[old] = s * tv[new]

    if record.kind == "split":
        xo = record.backward(x)
        for i in record.rows:
            row = p_orig.rows[i]
            values[row.rhs.id] = sum((c.iv.lo * v for c, v in zip(row.coeffs, xo)), ZERO)
    elif record.kind == "nonneg":
        y = out.dual
        for j in record.cols:
            values[p_orig.objective[j].id] = sum(
                (row.coeffs[j].iv.lo * yi for row, yi in zip(p_orig.rows, y)), ZERO)
    elif record.kind not in ("flip", "slack"):
        raise ValueError(f"unknown transformation {record.kind!r}")
    return scenario(p_orig, values)
