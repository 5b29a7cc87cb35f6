"""Interval linear programs as scenario families.

A program stores every interval coefficient as a :class:`Coef` carrying a
stable identifier. Transformations that duplicate a coefficient mint new
identifiers, which is what makes lost coupling between copies visible.

``ge`` rows are negated into ``le`` rows when a program is built; the
indices of negated rows are kept in ``negated_rows``.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .intervals import (
    DEFAULT_CAP,
    Interval,
    endpoint_count,
    endpoint_scenarios,
    format_rational,
    to_rational,
)
from .lp import PointLp


class ProgramFormatError(ValueError):
    """Malformed program document; ``where`` locates the problem."""

    def __init__(self, msg: str, where: str | None = None, line: int | None = None,
                 column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}, column {column})"
        elif where:
            loc = f" (at {where})"
        super().__init__(msg + loc)
        self.where = where
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Coef:
    id: str
    iv: Interval

    @classmethod
    def of(cls, id: str, value) -> "Coef":
        iv = value if isinstance(value, Interval) else Interval.from_json(value)
        return cls(id, iv)


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Coef, ...]
    rel: str
    rhs: Coef


@dataclass(frozen=True)
class Var:
    name: str
    sign: str = "nonneg"


def objective_id(j: int) -> str:
    return f"c{j + 1}"


def matrix_id(i: int, j: int) -> str:
    return f"a{i + 1}_{j + 1}"


def rhs_id(i: int) -> str:
    return f"b{i + 1}"


@dataclass(frozen=True)
class FormClass:
    kind: str  # "TypeI" | "TypeII" | "TypeIII" | "General"
    fixed_matrix: bool


@dataclass(frozen=True)
class IlpProgram:
    sense: str
    objective: tuple[Coef, ...]
    rows: tuple[Row, ...]
    vars: tuple[Var, ...]
    name: str = ""
    provenance: tuple = ()
    negated_rows: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(self.objective))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        object.__setattr__(self, "negated_rows", tuple(self.negated_rows))
        if self.sense not in ("min", "max"):
            raise ValueError(f"unknown sense {self.sense!r}")
        n = len(self.vars)
        if len(self.objective) != n:
            raise ValueError(f"objective has {len(self.objective)} entries for {n} variables")
        for i, row in enumerate(self.rows):
            if len(row.coeffs) != n:
                raise ValueError(f"row {i} has {len(row.coeffs)} coefficients for {n} variables")
            if row.rel not in ("eq", "le"):
                raise ValueError(f"row {i}: relation {row.rel!r} must be normalized to eq/le")
        for v in self.vars:
            if v.sign not in ("free", "nonneg"):
                raise ValueError(f"variable {v.name!r}: unknown sign {v.sign!r}")
        ids = [c.id for c in self.coefficients()]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"coefficient identifiers are not unique: {dup}")

    @classmethod
    def build(cls, sense: str, objective: Sequence, rows: Sequence, vars: Sequence,
              name: str = "") -> "IlpProgram":
        """Build from raw data with positional identifiers.

        ``rows`` holds ``(coeffs, rel, rhs)`` triples with ``rel`` in
        ``eq``/``le``/``ge``; ``vars`` holds :class:`Var`, sign strings or
        ``(name, sign)`` pairs.
        """
        variables = []
        for j, v in enumerate(vars):
            if isinstance(v, Var):
                variables.append(v)
            elif isinstance(v, str):
                variables.append(Var(f"x{j + 1}", v))
            else:
                variables.append(Var(*v))
        obj = tuple(Coef.of(objective_id(j), v) for j, v in enumerate(objective))
        built, negated = [], []
        for i, (coeffs, rel, rhs) in enumerate(rows):
            cs = [Coef.of(matrix_id(i, j), v) for j, v in enumerate(coeffs)]
            b = Coef.of(rhs_id(i), rhs)
            if rel == "ge":
                cs = [Coef(c.id, -c.iv) for c in cs]
                b = Coef(b.id, -b.iv)
                rel = "le"
                negated.append(i)
            elif rel not in ("eq", "le"):
                raise ValueError(f"row {i}: unknown relation {rel!r}")
            built.append(Row(tuple(cs), rel, b))
        return cls(sense, obj, tuple(built), tuple(variables), name=name,
                   negated_rows=tuple(negated))

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def m(self) -> int:
        return len(self.rows)

    def coefficients(self) -> list[Coef]:
        """All coefficients in canonical order: objective, then each row's
        coefficients followed by its right-hand side."""
        out = list(self.objective)
        for row in self.rows:
            out.extend(row.coeffs)
            out.append(row.rhs)
        return out

    def coefficient(self, id: str) -> Coef:
        for c in self.coefficients():
            if c.id == id:
                return c
        raise KeyError(id)

    @property
    def fixed_matrix(self) -> bool:
        return all(c.iv.is_degenerate for row in self.rows for c in row.coeffs)

    @property
    def signs(self) -> tuple[str, ...]:
        return tuple(v.sign for v in self.vars)

    @property
    def is_crisp(self) -> bool:
        return all(c.iv.is_degenerate for c in self.coefficients())

    def endpoint_count(self) -> int:
        return endpoint_count(c.iv for c in self.coefficients())

    def replace(self, **changes) -> "IlpProgram":
        return dataclasses.replace(self, **changes)

    def to_json(self) -> dict:
        return program_to_json(self)

    def dumps(self) -> str:
        return serialize(self)


def classify(p: IlpProgram) -> FormClass:
    rels = {r.rel for r in p.rows}
    signs = set(p.signs)
    if rels <= {"eq"} and signs <= {"nonneg"}:
        kind = "TypeI"
    elif rels <= {"le"} and signs <= {"free"}:
        kind = "TypeII"
    elif rels <= {"le"} and signs <= {"nonneg"}:
        kind = "TypeIII"
    else:
        kind = "General"
    return FormClass(kind, p.fixed_matrix)


@dataclass(frozen=True)
class Scenario:
    """One point program from the family, keyed by coefficient identifier."""

    program: IlpProgram = field(repr=False, compare=False)
    values: tuple[tuple[str, Fraction], ...]

    def __getitem__(self, id: str) -> Fraction:
        return dict(self.values)[id]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.values)

    def to_point_lp(self) -> PointLp:
        p, v = self.program, dict(self.values)
        return PointLp(
            sense=p.sense,
            c=[v[c.id] for c in p.objective],
            A=[[v[c.id] for c in row.coeffs] for row in p.rows],
            rels=[row.rel for row in p.rows],
            b=[v[row.rhs.id] for row in p.rows],
            signs=p.signs,
        )

    def to_json(self) -> dict:
        return {k: format_rational(q) for k, q in self.values}


def scenario(p: IlpProgram, assignment: Mapping[str, object] | Sequence | None = None) -> Scenario:
    """Fix every interval coefficient of ``p``.

    ``assignment`` maps identifiers to values, or lists values in canonical
    coefficient order. Degenerate coefficients may be omitted.
    """
    coefs = p.coefficients()
    if assignment is None:
        assignment = {}
    if not isinstance(assignment, Mapping):
        if len(assignment) != len(coefs):
            raise ValueError(f"expected {len(coefs)} values, got {len(assignment)}")
        assignment = {c.id: v for c, v in zip(coefs, assignment)}
    known = {c.id for c in coefs}
    extra = set(assignment) - known
    if extra:
        raise KeyError(f"unknown coefficient identifiers: {sorted(extra)}")
    values = []
    for c in coefs:
        if c.id in assignment:
            q = to_rational(assignment[c.id])
            if not c.iv.contains(q):
                raise ValueError(f"value {q} for {c.id} lies outside {c.iv}")
        elif c.iv.is_degenerate:
            q = c.iv.lo
        else:
            raise ValueError(f"no value assigned to interval coefficient {c.id}")
        values.append((c.id, q))
    return Scenario(p, tuple(values))


def endpoint_program_scenarios(p: IlpProgram, cap: int | None = DEFAULT_CAP) -> Iterator[Scenario]:
    coefs = p.coefficients()
    ids = [c.id for c in coefs]
    for combo in endpoint_scenarios([c.iv for c in coefs], cap):
        yield Scenario(p, tuple(zip(ids, combo)))


def center_scenario(p: IlpProgram) -> Scenario:
    return Scenario(p, tuple((c.id, c.iv.center) for c in p.coefficients()))


# -- JSON format --------------------------------------------------------------

def _default_ids(p: IlpProgram) -> bool:
    if [c.id for c in p.objective] != [objective_id(j) for j in range(p.n)]:
        return False
    for i, row in enumerate(p.rows):
        if [c.id for c in row.coeffs] != [matrix_id(i, j) for j in range(p.n)]:
            return False
        if row.rhs.id != rhs_id(i):
            return False
    return True


def program_to_json(p: IlpProgram) -> dict:
    doc: dict = {}
    if p.name:
        doc["name"] = p.name
    doc["sense"] = p.sense
    doc["objective"] = [c.iv.to_json() for c in p.objective]
    doc["rows"] = [
        {"coeffs": [c.iv.to_json() for c in row.coeffs], "rel": row.rel, "rhs": row.rhs.iv.to_json()}
        for row in p.rows
    ]
    doc["vars"] = [{"name": v.name, "sign": v.sign} for v in p.vars]
    if not _default_ids(p):
        doc["ids"] = {
            "objective": [c.id for c in p.objective],
            "rows": [{"coeffs": [c.id for c in r.coeffs], "rhs": r.rhs.id} for r in p.rows],
        }
    if p.negated_rows:
        doc["negated_rows"] = list(p.negated_rows)
    if p.provenance:
        doc["provenance"] = [rec.to_json() for rec in p.provenance]
    return doc


def serialize(p: IlpProgram) -> str:
    return json.dumps(program_to_json(p), indent=2, ensure_ascii=False) + "\n"


def _interval(data, where: str) -> Interval:
    try:
        return Interval.from_json(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ProgramFormatError(str(exc), where) from exc


def program_from_json(doc) -> IlpProgram:
    if not isinstance(doc, dict):
        raise ProgramFormatError("program document must be a JSON object")
    for key in ("sense", "objective", "rows", "vars"):
        if key not in doc:
            raise ProgramFormatError(f"missing key {key!r}")
    sense = doc["sense"]
    if sense not in ("min", "max"):
        raise ProgramFormatError(f"sense must be 'min' or 'max', got {sense!r}", "sense")
    objective = [_interval(v, f"objective[{j}]") for j, v in enumerate(doc["objective"])]
    n = len(objective)
    vars_ = []
    for j, v in enumerate(doc["vars"]):
        if not isinstance(v, dict) or v.get("sign") not in ("free", "nonneg"):
            raise ProgramFormatError("variable needs a name and sign free|nonneg", f"vars[{j}]")
        vars_.append(Var(str(v.get("name", f"x{j + 1}")), v["sign"]))
    if len(vars_) != n:
        raise ProgramFormatError(f"{len(vars_)} variables but {n} objective entries", "vars")
    raw_rows = []
    for i, r in enumerate(doc["rows"]):
        if not isinstance(r, dict) or not {"coeffs", "rel", "rhs"} <= set(r):
            raise ProgramFormatError("row needs coeffs, rel and rhs", f"rows[{i}]")
        coeffs = [_interval(v, f"rows[{i}].coeffs[{j}]") for j, v in enumerate(r["coeffs"])]
        if len(coeffs) != n:
            raise ProgramFormatError(f"row has {len(coeffs)} coefficients, expected {n}", f"rows[{i}]")
        if r["rel"] not in ("eq", "le", "ge"):
            raise ProgramFormatError(f"unknown relation {r['rel']!r}", f"rows[{i}].rel")
        raw_rows.append((coeffs, r["rel"], _interval(r["rhs"], f"rows[{i}].rhs")))

    p = IlpProgram.build(sense, objective, raw_rows, vars_, name=doc.get("name", ""))
    if "ids" in doc:
        ids = doc["ids"]
        try:
            obj = tuple(Coef(k, c.iv) for k, c in zip(ids["objective"], p.objective, strict=True))
            rows = tuple(
                Row(tuple(Coef(k, c.iv) for k, c in zip(ri["coeffs"], row.coeffs, strict=True)),
                    row.rel, Coef(ri["rhs"], row.rhs.iv))
                for ri, row in zip(ids["rows"], p.rows, strict=True)
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProgramFormatError(f"malformed ids block: {exc}", "ids") from exc
        try:
            p = p.replace(objective=obj, rows=rows)
        except ValueError as exc:
            raise ProgramFormatError(str(exc), "ids") from exc
    extra = {}
    if "negated_rows" in doc:
        extra["negated_rows"] = tuple(int(i) for i in doc["negated_rows"]) + p.negated_rows
    if "provenance" in doc:
        from .transforms import TransformRecord

        extra["provenance"] = tuple(TransformRecord.from_json(r) for r in doc["provenance"])
    return p.replace(**extra) if extra else p


def parse(text: str) -> IlpProgram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProgramFormatError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return program_from_json(doc)


def load(path) -> IlpProgram:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(p: IlpProgram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(p))
