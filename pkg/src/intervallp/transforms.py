"""The four classical LP transformations applied to interval programs.

Each transformation returns the new program and a :class:`TransformRecord`.
The record's ``id_map`` sends every source coefficient identifier to its
target identifier(s) together with the sign the value picks up, so a source
scenario can be lifted into the target family (equal copies for duplicated
coefficients). Splitting equations and substituting free variables produce
two fresh identifiers per source coefficient: this is where the coupling
between occurrences is lost.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .intervals import Interval, to_rational
from .model import Coef, IlpProgram, Row, Scenario, Var, scenario

KINDS = ("flip", "slack", "split", "nonneg")


@dataclass(frozen=True)
class TransformRecord:
    kind: str
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    # source id -> ((target id, sign), ...)
    id_map: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]
    # per target variable: ("var", source index, sign) or ("slack", source row, 0)
    var_map: tuple[tuple[str, int, int], ...]
    # per target row: source row index
    row_map: tuple[int, ...]
    new_ids: tuple[str, ...] = ()
    n_source: int = 0
    # kind == "slack": per slacked row, its coefficient ids and rhs id
    slack_rows: tuple = ()
    slack_rhs: tuple = ()

    @property
    def mapping(self) -> dict[str, tuple[tuple[str, int], ...]]:
        return dict(self.id_map)

    def duplicated(self) -> list[str]:
        return [old for old, new in self.id_map if len(new) > 1]

    def forward(self, x: Sequence, source_scenario: Scenario | Mapping | None = None) -> tuple[Fraction, ...]:
        """Map a source point into the target variable space.

        Slack values depend on the scenario, which must then be given.
        """
        x = [to_rational(v) for v in x]
        if len(x) != self.n_source:
            raise ValueError(f"expected {self.n_source} values, got {len(x)}")
        values = None
        if source_scenario is not None:
            values = (source_scenario.as_dict() if isinstance(source_scenario, Scenario)
                      else {k: to_rational(v) for k, v in source_scenario.items()})
        split = {j for tag, j, s in self.var_map if tag == "var" and s < 0}
        out = []
        for tag, j, s in self.var_map:
            if tag == "slack":
                if values is None:
                    raise ValueError("slack values need a scenario")
                out.append(values[self._rhs_ids[j]] - sum(
                    (values[cid] * v for cid, v in zip(self._row_ids[j], x)), Fraction(0)))
            elif j in split:
                out.append(max(Fraction(0), x[j]) if s > 0 else -min(Fraction(0), x[j]))
            else:
                out.append(x[j])
        return tuple(out)

    def backward(self, z: Sequence) -> tuple[Fraction, ...]:
        z = [to_rational(v) for v in z]
        if len(z) != len(self.var_map):
            raise ValueError(f"expected {len(self.var_map)} values, got {len(z)}")
        x = [Fraction(0)] * self.n_source
        for (tag, j, s), v in zip(self.var_map, z):
            if tag == "var":
                x[j] += s * v
        return tuple(x)

    def lift_values(self, source_values: Mapping[str, Fraction]) -> dict[str, Fraction]:
        """Target coefficient values reproducing a source scenario."""
        out = {}
        for old, targets in self.id_map:
            for new, s in targets:
                out[new] = s * source_values[old]
        return out

    def lift(self, source: Scenario, target: IlpProgram) -> Scenario:
        return scenario(target, self.lift_values(source.as_dict()))

    @property
    def _row_ids(self) -> dict[int, tuple[str, ...]]:
        return {i: ids for i, ids in self.slack_rows}

    @property
    def _rhs_ids(self) -> dict[int, str]:
        return {i: rid for i, rid in self.slack_rhs}

    def to_json(self) -> dict:
        doc = {
            "kind": self.kind,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "id_map": {old: [[new, s] for new, s in targets] for old, targets in self.id_map},
            "var_map": [list(v) for v in self.var_map],
            "row_map": list(self.row_map),
            "new_ids": list(self.new_ids),
            "n_source": self.n_source,
        }
        if self.slack_rows:
            doc["slack_rows"] = [[i, list(ids)] for i, ids in self.slack_rows]
            doc["slack_rhs"] = [[i, rid] for i, rid in self.slack_rhs]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "TransformRecord":
        if doc.get("kind") not in KINDS:
            raise ValueError(f"unknown transformation kind {doc.get('kind')!r}")
        return cls(
            kind=doc["kind"],
            rows=tuple(doc["rows"]),
            cols=tuple(doc["cols"]),
            id_map=tuple((old, tuple((new, int(s)) for new, s in targets))
                         for old, targets in doc["id_map"].items()),
            var_map=tuple((tag, int(j), int(s)) for tag, j, s in doc["var_map"]),
            row_map=tuple(doc["row_map"]),
            new_ids=tuple(doc.get("new_ids", ())),
            n_source=int(doc["n_source"]),
            slack_rows=tuple((int(i), tuple(ids)) for i, ids in doc.get("slack_rows", ())),
            slack_rhs=tuple((int(i), rid) for i, rid in doc.get("slack_rhs", ())),
        )


class _Fresh:
    """Mint identifiers not yet used by a program."""

    def __init__(self, used: Iterable[str]):
        self.used = set(used)

    def __call__(self, base: str) -> str:
        cand, k = base, 1
        while cand in self.used:
            k += 1
            cand = f"{base}~{k}"
        self.used.add(cand)
        return cand


def _identity_map(p: IlpProgram, negate_objective: bool = False):
    entries = []
    for c in p.objective:
        entries.append((c.id, ((c.id, -1 if negate_objective else 1),)))
    for row in p.rows:
        for c in list(row.coeffs) + [row.rhs]:
            entries.append((c.id, ((c.id, 1),)))
    return entries


def _identity_vars(p: IlpProgram):
    return tuple(("var", j, 1) for j in range(p.n))


def flip_objective(p: IlpProgram) -> tuple[IlpProgram, TransformRecord]:
    """``max c^T x`` becomes ``min (-c)^T x`` and vice versa; nothing is duplicated."""
    rec = TransformRecord(
        kind="flip", rows=(), cols=tuple(range(p.n)),
        id_map=tuple(_identity_map(p, negate_objective=True)),
        var_map=_identity_vars(p), row_map=tuple(range(p.m)), n_source=p.n,
    )
    q = p.replace(
        sense="min" if p.sense == "max" else "max",
        objective=tuple(Coef(c.id, -c.iv) for c in p.objective),
        provenance=p.provenance + (rec,),
    )
    return q, rec


def add_slack(p: IlpProgram) -> tuple[IlpProgram, TransformRecord]:
    """Turn every ``le`` row into an equation with its own slack ``>= 0``."""
    le_rows = [i for i, r in enumerate(p.rows) if r.rel == "le"]
    fresh = _Fresh(c.id for c in p.coefficients())
    new_ids: list[str] = []
    if not le_rows:
        rec = TransformRecord(
            kind="slack", rows=(), cols=(), id_map=tuple(_identity_map(p)),
            var_map=_identity_vars(p), row_map=tuple(range(p.m)), n_source=p.n,
        )
        return p, rec

    def mint(base):
        k = fresh(base)
        new_ids.append(k)
        return k

    zero, one = Interval.point(0), Interval.point(1)
    objective = list(p.objective) + [Coef(mint(f"c_s{i + 1}"), zero) for i in le_rows]
    rows = []
    for r, row in enumerate(p.rows):
        extra = [Coef(mint(f"a{r + 1}_s{i + 1}"), one if i == r else zero) for i in le_rows]
        rows.append(Row(tuple(row.coeffs) + tuple(extra), "eq", row.rhs))
    names = {v.name for v in p.vars}
    slack_vars = []
    for i in le_rows:
        name, k = f"s{i + 1}", 1
        while name in names:
            k += 1
            name = f"s{i + 1}_{k}"
        names.add(name)
        slack_vars.append(Var(name, "nonneg"))
    rec = TransformRecord(
        kind="slack", rows=tuple(le_rows), cols=(),
        id_map=tuple(_identity_map(p)),
        var_map=_identity_vars(p) + tuple(("slack", i, 0) for i in le_rows),
        row_map=tuple(range(p.m)), new_ids=tuple(new_ids), n_source=p.n,
        slack_rows=tuple((i, tuple(c.id for c in p.rows[i].coeffs)) for i in le_rows),
        slack_rhs=tuple((i, p.rows[i].rhs.id) for i in le_rows),
    )
    q = p.replace(
        objective=tuple(objective), rows=tuple(rows), vars=p.vars + tuple(slack_vars),
        provenance=p.provenance + (rec,),
    )
    return q, rec


def split_equations(p: IlpProgram, rows: Iterable[int] | None = None) -> tuple[IlpProgram, TransformRecord]:
    """Replace each selected equation ``a x = b`` by ``a1 x <= b1`` and
    ``-a2 x <= -b2`` with independent copies of every coefficient."""
    eq_rows = [i for i, r in enumerate(p.rows) if r.rel == "eq"]
    selected = eq_rows if rows is None else sorted(set(rows))
    for i in selected:
        if i not in eq_rows:
            raise ValueError(f"row {i} is not an equation")
    fresh = _Fresh(c.id for c in p.coefficients())
    id_map = [(c.id, ((c.id, 1),)) for c in p.objective]
    new_rows, row_map, new_ids, negated = [], [], [], []
    for i, row in enumerate(p.rows):
        coefs = list(row.coeffs) + [row.rhs]
        if i not in selected:
            new_rows.append(row)
            row_map.append(i)
            id_map.extend((c.id, ((c.id, 1),)) for c in coefs)
            if i in p.negated_rows:
                negated.append(len(new_rows) - 1)
            continue
        first, second = [], []
        for c in coefs:
            k1, k2 = fresh(f"{c.id}.1"), fresh(f"{c.id}.2")
            new_ids.extend((k1, k2))
            first.append(Coef(k1, c.iv))
            second.append(Coef(k2, -c.iv))
            id_map.append((c.id, ((k1, 1), (k2, -1))))
        new_rows.append(Row(tuple(first[:-1]), "le", first[-1]))
        new_rows.append(Row(tuple(second[:-1]), "le", second[-1]))
        row_map.extend((i, i))
        # the second copy reads "a x >= b": negated at construction
        negated.append(len(new_rows) - 1)
    rec = TransformRecord(
        kind="split", rows=tuple(selected), cols=(), id_map=tuple(id_map),
        var_map=_identity_vars(p), row_map=tuple(row_map), new_ids=tuple(new_ids),
        n_source=p.n,
    )
    q = p.replace(rows=tuple(new_rows), provenance=p.provenance + (rec,),
                  negated_rows=tuple(negated))
    return q, rec


def substitute_nonneg(p: IlpProgram, vars: Iterable[int] | None = None) -> tuple[IlpProgram, TransformRecord]:
    """Write each selected free variable as ``x+ - x-`` with both parts ``>= 0``.

    Every coefficient in the column, objective included, becomes two
    independent coefficients; the ``x-`` copy is negated.
    """
    free = [j for j, v in enumerate(p.vars) if v.sign == "free"]
    selected = free if vars is None else sorted(set(vars))
    for j in selected:
        if not 0 <= j < p.n:
            raise IndexError(f"no variable {j}")
        if p.vars[j].sign != "free":
            raise ValueError(f"variable {p.vars[j].name!r} is not free")
    fresh = _Fresh(c.id for c in p.coefficients())
    id_map: dict[str, tuple] = {}
    new_ids: list[str] = []

    def column(coefs: Sequence[Coef]) -> list[Coef]:
        out = []
        for j, c in enumerate(coefs):
            if j not in selected:
                id_map[c.id] = ((c.id, 1),)
                out.append(c)
                continue
            kp, km = fresh(f"{c.id}+"), fresh(f"{c.id}-")
            new_ids.extend((kp, km))
            id_map[c.id] = ((kp, 1), (km, -1))
            out.extend((Coef(kp, c.iv), Coef(km, -c.iv)))
        return out

    objective = column(p.objective)
    rows = []
    for row in p.rows:
        cs = column(row.coeffs)
        id_map[row.rhs.id] = ((row.rhs.id, 1),)
        rows.append(Row(tuple(cs), row.rel, row.rhs))
    vars_, var_map = [], []
    for j, v in enumerate(p.vars):
        if j in selected:
            vars_.extend((Var(f"{v.name}+", "nonneg"), Var(f"{v.name}-", "nonneg")))
            var_map.extend((("var", j, 1), ("var", j, -1)))
        else:
            vars_.append(v)
            var_map.append(("var", j, 1))
    order = [c.id for c in p.coefficients()]
    rec = TransformRecord(
        kind="nonneg", rows=(), cols=tuple(selected),
        id_map=tuple((k, id_map[k]) for k in order),
        var_map=tuple(var_map), row_map=tuple(range(p.m)), new_ids=tuple(new_ids),
        n_source=p.n,
    )
    q = p.replace(objective=tuple(objective), rows=tuple(rows), vars=tuple(vars_),
                  provenance=p.provenance + (rec,))
    return q, rec


TRANSFORMS = {
    "flip": flip_objective,
    "slack": add_slack,
    "split": split_equations,
    "nonneg": substitute_nonneg,
}
