"""Exact two-phase simplex for point linear programs.

Every outcome carries a certificate that is re-checked in exact arithmetic
before :func:`solve` returns:

* ``Optimal``: a primal point and a dual vector with equal objective values
  and complementary slackness.
* ``Infeasible``: a Farkas vector.
* ``Unbounded``: a feasible point plus an improving ray.

Dual sign conventions (min form): a ``le`` row has ``y <= 0``, a ``ge`` row
``y >= 0``, an ``eq`` row a free ``y``; a non-negative column gives
``(A^T y)_j <= c_j`` and a free column ``(A^T y)_j = c_j``. For max form all
inequalities flip.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .intervals import to_rational

try:  # much faster exact rationals inside the pivoting loop
    from gmpy2 import mpq as _num
except ImportError:  # pragma: no cover
    _num = Fraction

_ZERO, _ONE = _num(0), _num(1)


def _frac(q) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(int(q.numerator), int(q.denominator))


RELATIONS = ("eq", "le", "ge")
SIGNS = ("free", "nonneg")

# Number of certificates verified per outcome kind, process-wide.
certificate_checks: Counter = Counter()


class CertificateError(AssertionError):
    """A solver outcome failed its exact certificate check."""


def _vec(values) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


@dataclass(frozen=True)
class PointLp:
    sense: str
    c: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    rels: tuple[str, ...]
    b: tuple[Fraction, ...]
    signs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", _vec(self.c))
        object.__setattr__(self, "A", tuple(_vec(row) for row in self.A))
        object.__setattr__(self, "b", _vec(self.b))
        object.__setattr__(self, "rels", tuple(self.rels))
        object.__setattr__(self, "signs", tuple(self.signs))
        n, m = len(self.c), len(self.A)
        if self.sense not in ("min", "max"):
            raise ValueError(f"unknown sense {self.sense!r}")
        if len(self.b) != m or len(self.rels) != m:
            raise ValueError("rows, relations and right-hand side differ in length")
        if len(self.signs) != n:
            raise ValueError("one sign restriction per variable required")
        if any(len(row) != n for row in self.A):
            raise ValueError("constraint row length differs from objective length")
        if any(r not in RELATIONS for r in self.rels):
            raise ValueError(f"relations must be in {RELATIONS}")
        if any(s not in SIGNS for s in self.signs):
            raise ValueError(f"signs must be in {SIGNS}")

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def m(self) -> int:
        return len(self.A)

    def row_value(self, i: int, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.A[i], x)), Fraction(0))

    def objective(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.c, x)), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n:
            return False
        if any(s == "nonneg" and v < 0 for s, v in zip(self.signs, x)):
            return False
        for i, rel in enumerate(self.rels):
            lhs = self.row_value(i, x)
            if rel == "eq" and lhs != self.b[i]:
                return False
            if rel == "le" and lhs > self.b[i]:
                return False
            if rel == "ge" and lhs < self.b[i]:
                return False
        return True


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    status: str = field(default="optimal", init=False)


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]
    status: str = field(default="infeasible", init=False)


@dataclass(frozen=True)
class Unbounded:
    point: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]
    status: str = field(default="unbounded", init=False)


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def _transpose_dot(lp: PointLp, y: Sequence[Fraction]) -> list[Fraction]:
    return [sum((lp.A[i][j] * y[i] for i in range(lp.m)), Fraction(0)) for j in range(lp.n)]


def _check(cond: bool, msg: str):
    if not cond:
        raise CertificateError(msg)


def verify_outcome(lp: PointLp, out: LpOutcome) -> None:
    """Raise :class:`CertificateError` unless ``out`` is certified for ``lp``."""
    flip = 1 if lp.sense == "min" else -1
    if isinstance(out, Optimal):
        x, y = out.primal, out.dual
        _check(len(x) == lp.n and len(y) == lp.m, "certificate dimensions")
        _check(lp.is_feasible(x), "primal point infeasible")
        for i, rel in enumerate(lp.rels):
            # flip * y has the min-form sign
            if rel == "le":
                _check(flip * y[i] <= 0, f"dual sign on row {i}")
            elif rel == "ge":
                _check(flip * y[i] >= 0, f"dual sign on row {i}")
            _check(y[i] * (lp.b[i] - lp.row_value(i, x)) == 0, f"row slackness {i}")
        aty = _transpose_dot(lp, y)
        for j, sign in enumerate(lp.signs):
            red = flip * (lp.c[j] - aty[j])
            if sign == "free":
                _check(red == 0, f"dual equality on column {j}")
            else:
                _check(red >= 0, f"dual feasibility on column {j}")
            _check(x[j] * red == 0, f"column slackness {j}")
        primal_val = lp.objective(x)
        dual_val = sum((bi * yi for bi, yi in zip(lp.b, y)), Fraction(0))
        _check(primal_val == out.value == dual_val, "strong duality")
    elif isinstance(out, Infeasible):
        y = out.farkas
        _check(len(y) == lp.m, "certificate dimensions")
        for i, rel in enumerate(lp.rels):
            if rel == "le":
                _check(y[i] <= 0, f"Farkas sign on row {i}")
            elif rel == "ge":
                _check(y[i] >= 0, f"Farkas sign on row {i}")
        aty = _transpose_dot(lp, y)
        for j, sign in enumerate(lp.signs):
            if sign == "free":
                _check(aty[j] == 0, f"Farkas column {j}")
            else:
                _check(aty[j] <= 0, f"Farkas column {j}")
        _check(sum((bi * yi for bi, yi in zip(lp.b, y)), Fraction(0)) > 0, "Farkas value")
    elif isinstance(out, Unbounded):
        x, d = out.point, out.ray
        _check(lp.is_feasible(x), "unbounded base point infeasible")
        _check(len(d) == lp.n, "ray dimension")
        for j, sign in enumerate(lp.signs):
            _check(sign == "free" or d[j] >= 0, f"ray sign on column {j}")
        for i, rel in enumerate(lp.rels):
            ad = lp.row_value(i, d)
            _check(
                (rel == "eq" and ad == 0) or (rel == "le" and ad <= 0) or (rel == "ge" and ad >= 0),
                f"ray leaves row {i}",
            )
        _check(flip * lp.objective(d) < 0, "ray does not improve the objective")
    else:
        raise TypeError(f"unknown outcome {out!r}")
    certificate_checks[out.status] += 1


class _Tableau:
    """Dense canonical tableau with an identity block of artificials.

    Cost rows are stored as reduced costs and pivot along with the
    constraint rows; the last entry of a cost row is minus its value.
    """

    def __init__(self, rows, rhs, n_struct: int, costs):
        m = len(rows)
        self.m = m
        self.n_struct = n_struct
        self.width = n_struct + m
        self.T = []
        for i, (row, bi) in enumerate(zip(rows, rhs)):
            art = [_ZERO] * m
            art[i] = _ONE
            self.T.append(list(row) + art + [bi])
        self.basis = [n_struct + i for i in range(m)]
        self.costs = []
        for cost in costs:
            red = list(cost) + [_ZERO]
            for i, bv in enumerate(self.basis):
                cb = cost[bv]
                if cb:
                    red = [a - cb * t for a, t in zip(red, self.T[i])]
            self.costs.append(red)

    def value(self, k: int):
        return -self.costs[k][-1]

    def multipliers(self, k: int, art_cost):
        # y_r = cost(artificial r) - reduced cost(artificial r)
        off = self.n_struct
        red = self.costs[k]
        return [art_cost - red[off + r] for r in range(self.m)]

    def pivot(self, r: int, col: int):
        prow = self.T[r]
        piv = prow[col]
        prow[:] = [v / piv for v in prow]
        for row in itertools.chain(self.T, self.costs):
            f = row[col]
            if f and row is not prow:
                row[:] = [a - f * b if b else a for a, b in zip(row, prow)]
        self.basis[r] = col

    def run(self, k: int, allowed: int):
        """Bland-rule simplex on cost row ``k`` over columns ``< allowed``.

        Returns ``None`` at optimality or the entering column of an
        unbounded direction.
        """
        red = self.costs[k]
        while True:
            col = next((j for j in range(allowed) if red[j] < 0), None)
            if col is None:
                return None
            best = None
            for i, row in enumerate(self.T):
                if row[col] > 0:
                    key = (row[-1] / row[col], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return col
            self.pivot(best[1], col)

    def solution(self):
        z = [_ZERO] * self.width
        for i, bv in enumerate(self.basis):
            z[bv] = self.T[i][-1]
        return z


def _solve_min(lp: PointLp, c: Sequence[Fraction]) -> LpOutcome:
    """Solve ``min c^T x`` over the constraints of ``lp``."""
    m, n = lp.m, lp.n
    # structural columns: variables (free ones split), then slack/surplus
    colmap: list[tuple[int, int]] = []  # (variable, +1/-1)
    for j, sign in enumerate(lp.signs):
        colmap.append((j, 1))
        if sign == "free":
            colmap.append((j, -1))
    n_var_cols = len(colmap)
    slack_rows = [i for i, rel in enumerate(lp.rels) if rel != "eq"]
    n_struct = n_var_cols + len(slack_rows)

    flips = [1 if lp.b[i] >= 0 else -1 for i in range(m)]
    rows, rhs = [], []
    for i in range(m):
        s = flips[i]
        row = [_num(s * sgn * lp.A[i][j]) for j, sgn in colmap]
        tail = [_ZERO] * len(slack_rows)
        if lp.rels[i] != "eq":
            tail[slack_rows.index(i)] = _num(s if lp.rels[i] == "le" else -s)
        rows.append(row + tail)
        rhs.append(_num(s * lp.b[i]))

    width = n_struct + m
    phase1 = [_ZERO] * n_struct + [_ONE] * m
    phase2 = [_ZERO] * width
    for k, (j, sgn) in enumerate(colmap):
        phase2[k] = _num(sgn * c[j])
    tab = _Tableau(rows, rhs, n_struct, [phase1, phase2])

    tab.run(0, width)
    if tab.value(0) > 0:
        mult = tab.multipliers(0, _ONE)
        return Infeasible(tuple(_frac(flips[i] * mult[i]) for i in range(m)))

    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if tab.basis[i] >= n_struct:
            col = next((j for j in range(n_struct) if tab.T[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)

    def to_x(z):
        x = [Fraction(0)] * n
        for k, (j, sgn) in enumerate(colmap):
            x[j] += sgn * _frac(z[k])
        return tuple(x)

    entering = tab.run(1, n_struct)
    z = tab.solution()
    if entering is not None:
        d = [_ZERO] * width
        d[entering] = _ONE
        for i, bv in enumerate(tab.basis):
            d[bv] = -tab.T[i][entering]
        return Unbounded(to_x(z), to_x(d))

    mult = tab.multipliers(1, _ZERO)
    x = to_x(z)
    y = tuple(_frac(flips[i] * mult[i]) for i in range(m))
    value = sum((a * v for a, v in zip(c, x)), Fraction(0))
    return Optimal(value, x, y)


def solve(lp: PointLp) -> LpOutcome:
    """Solve ``lp`` exactly; the returned certificate is already verified."""
    if lp.sense == "min":
        out = _solve_min(lp, lp.c)
    else:
        out = _solve_min(lp, [-v for v in lp.c])
        if isinstance(out, Optimal):
            out = Optimal(-out.value, out.primal, tuple(-v for v in out.dual))
    verify_outcome(lp, out)
    return out


def dual_of(lp: PointLp) -> PointLp:
    """Textbook dual with all dual variables free and sign rows made explicit.

    For ``min``: ``max b^T y`` s.t. ``(A^T y)_j <= c_j`` (or ``=`` for a free
    ``x_j``), then ``y_i <= 0`` for every ``le`` row and ``y_i >= 0`` for every
    ``ge`` row. ``max`` programs get the mirrored construction.
    """
    m, n = lp.m, lp.n
    col_rel = "le" if lp.sense == "min" else "ge"
    rows, rels, rhs = [], [], []
    for j in range(n):
        rows.append([lp.A[i][j] for i in range(m)])
        rels.append("eq" if lp.signs[j] == "free" else col_rel)
        rhs.append(lp.c[j])
    for i, rel in enumerate(lp.rels):
        if rel == "eq":
            continue
        unit = [Fraction(0)] * m
        unit[i] = Fraction(1)
        rows.append(unit)
        nonpos = (rel == "le") == (lp.sense == "min")
        rels.append("le" if nonpos else "ge")
        rhs.append(Fraction(0))
    return PointLp(
        sense="max" if lp.sense == "min" else "min",
        c=lp.b,
        A=rows,
        rels=rels,
        b=rhs,
        signs=("free",) * m,
    )


def outcome_value(out: LpOutcome, sense: str = "min"):
    """Optimal value with the usual extended conventions."""
    if isinstance(out, Optimal):
        return out.value
    if isinstance(out, Infeasible):
        return math.inf if sense == "min" else -math.inf
    return -math.inf if sense == "min" else math.inf
