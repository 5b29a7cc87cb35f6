"""Seeded random interval programs within desk-scale caps."""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from .intervals import Interval
from .model import IlpProgram, Var


@dataclass(frozen=True)
class GeneratorConfig:
    n_vars: int = 2
    n_rows: int = 2
    relations: tuple[str, ...] = ("eq", "le", "ge")
    min_eq_rows: int = 0
    free_fraction: float = 0.5
    min_width: Fraction = Fraction(0)
    max_width: Fraction = Fraction(2)
    max_denominator: int = 4
    coef_range: int = 3
    zero_prob: float = 0.2
    interval_prob: float = 0.5
    max_intervals: int = 6
    fixed_matrix: bool = False
    sense: str = "min"
    seed: int = 0

    def __post_init__(self):
        if self.n_vars < 0 or self.n_rows < 0:
            raise ValueError("dimensions must be non-negative")
        if self.min_eq_rows > self.n_rows:
            raise ValueError("min_eq_rows exceeds n_rows")
        if self.min_eq_rows and "eq" not in self.relations:
            raise ValueError("equation rows requested but 'eq' not among relations")
        if not self.relations or any(r not in ("eq", "le", "ge") for r in self.relations):
            raise ValueError(f"bad relation mix {self.relations!r}")
        if not 0 <= self.free_fraction <= 1:
            raise ValueError("free_fraction must lie in [0, 1]")
        if Fraction(self.min_width) < 0 or Fraction(self.min_width) > Fraction(self.max_width):
            raise ValueError("need 0 <= min_width <= max_width")
        if self.max_denominator < 1 or self.max_intervals < 0:
            raise ValueError("bad denominator or interval cap")
        if self.sense not in ("min", "max"):
            raise ValueError(f"unknown sense {self.sense!r}")

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return GeneratorConfig(**{**asdict(self), "seed": seed})

    def to_json(self) -> dict:
        d = asdict(self)
        d["min_width"] = str(self.min_width)
        d["max_width"] = str(self.max_width)
        d["relations"] = list(self.relations)
        return d


def _rational(rng: random.Random, cfg: GeneratorConfig, bound) -> Fraction:
    d = rng.randint(1, cfg.max_denominator)
    limit = int(Fraction(bound) * d)
    return Fraction(rng.randint(-limit, limit), d)


def _interval_around(rng: random.Random, cfg: GeneratorConfig, mid: Fraction) -> Interval:
    """An interval containing ``mid`` whose endpoints share a grid ``1/d`` with
    ``d <= max_denominator``; degenerate if no grid fits the width bounds."""
    lo_w, hi_w = Fraction(cfg.min_width), Fraction(cfg.max_width)
    grids = []
    for d in range(mid.denominator, cfg.max_denominator + 1, mid.denominator):
        k_lo, k_hi = max(math.ceil(lo_w * d), 1), math.floor(hi_w * d)
        if k_lo <= k_hi:
            grids.append((d, k_lo, k_hi))
    if not grids:
        return Interval.point(mid)
    d, k_lo, k_hi = rng.choice(grids)
    k = rng.randint(k_lo, k_hi)
    # place the point somewhere inside, not always at the centre
    lo = mid - Fraction(rng.randint(0, k), d)
    return Interval(lo, lo + Fraction(k, d))


def generate(cfg: GeneratorConfig) -> IlpProgram:
    """Deterministic program for ``cfg``; equal configs give equal programs."""
    rng = random.Random(cfg.seed)
    n, m = cfg.n_vars, cfg.n_rows

    def center():
        return Fraction(0) if rng.random() < cfg.zero_prob else _rational(rng, cfg, cfg.coef_range)

    c = [center() for _ in range(n)]
    A = [[center() for _ in range(n)] for _ in range(m)]
    b = [_rational(rng, cfg, cfg.coef_range) for _ in range(m)]
    rels = ["eq"] * cfg.min_eq_rows + [rng.choice(cfg.relations) for _ in range(m - cfg.min_eq_rows)]
    rng.shuffle(rels)
    n_free = round(cfg.free_fraction * n)
    free = set(rng.sample(range(n), n_free))
    signs = ["free" if j in free else "nonneg" for j in range(n)]

    # slots that may become intervals: objective, rhs, and matrix unless fixed
    slots = [("c", j) for j in range(n)] + [("b", i) for i in range(m)]
    if not cfg.fixed_matrix:
        slots += [("A", i, j) for i in range(m) for j in range(n)]
    rng.shuffle(slots)
    chosen = [s for s in slots if rng.random() < cfg.interval_prob][: cfg.max_intervals]
    chosen = set(chosen)

    def iv(slot, mid: Fraction) -> Interval:
        if slot not in chosen:
            return Interval.point(mid)
        return _interval_around(rng, cfg, mid)

    objective = [iv(("c", j), c[j]) for j in range(n)]
    rows = [([iv(("A", i, j), A[i][j]) for j in range(n)], rels[i], iv(("b", i), b[i])) for i in range(m)]
    return IlpProgram.build(cfg.sense, objective, rows, [Var(f"x{j + 1}", s) for j, s in enumerate(signs)],
                            name=f"gen-{cfg.seed}")
