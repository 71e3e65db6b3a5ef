"""Stable populations: intrinsic growth, age-sex composition, child-woman ratio."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ages import ADULT_START_INDEX, AGE_WIDTH, CHILD_INDICES, AgeGrid
from .errors import DomainError, NoRootError
from .fertility import FertilitySchedule
from .lifetable import FEMALE, MALE, LifeTable, require_same_grid

GROWTH_BRACKET = (-0.15, 0.15)
_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SexRatioAtBirth:
    """Male births per 100 female births."""

    males_per_100_females: float = 105.0

    def __post_init__(self):
        if not (self.males_per_100_females > 0.0):
            raise DomainError("sex ratio at birth must be strictly positive")

    @property
    def female_fraction(self) -> float:
        return 100.0 / (100.0 + self.males_per_100_females)

    @property
    def male_fraction(self) -> float:
        return self.males_per_100_females / (100.0 + self.males_per_100_females)


def characteristic_sum(
    r: float,
    schedule: FertilitySchedule,
    female_table: LifeTable,
    srb: SexRatioAtBirth,
) -> float:
    """Discounted female-birth reproduction at growth rate r.

    Equals 1 exactly at the intrinsic growth rate; strictly decreasing in r.
    """
    grid = female_table.grid
    rates = schedule.rates_on_grid(grid)
    mids = np.asarray(grid.midpoints())
    terms = np.exp(-r * mids) * female_table.nLx * rates * srb.female_fraction
    return float(terms.sum())


def net_reproduction_rate(
    schedule: FertilitySchedule, female_table: LifeTable, srb: SexRatioAtBirth
) -> float:
    """Daughters per woman surviving the schedule (the r = 0 sum)."""
    return characteristic_sum(0.0, schedule, female_table, srb)


def lotka_residual(
    r: float,
    schedule: FertilitySchedule,
    female_table: LifeTable,
    srb: SexRatioAtBirth,
) -> float:
    return characteristic_sum(r, schedule, female_table, srb) - 1.0


def solve_lotka(
    schedule: FertilitySchedule,
    female_table: LifeTable,
    srb: SexRatioAtBirth,
) -> float:
    """Bisect the characteristic equation for the intrinsic growth rate."""
    if not np.any(schedule.rates > 0.0):
        raise NoRootError("fertility schedule is all zero; no growth rate exists")
    lo, hi = GROWTH_BRACKET
    f_lo = lotka_residual(lo, schedule, female_table, srb)
    f_hi = lotka_residual(hi, schedule, female_table, srb)
    if f_lo < 0.0 or f_hi > 0.0:
        raise NoRootError(
            f"intrinsic growth rate outside the bracket [{lo}, {hi}] per year"
        )
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if lotka_residual(mid, schedule, female_table, srb) > 0.0:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    residual = lotka_residual(r, schedule, female_table, srb)
    if abs(residual) > _RESIDUAL_TOL:
        raise NoRootError(f"bisection left residual {residual:.3e} above tolerance")
    return r


@dataclass(frozen=True)
class StableSolution:
    """Intrinsic growth rate plus the stable age-sex composition."""

    growth_rate: float
    grid: AgeGrid
    female_shares: np.ndarray
    male_shares: np.ndarray
    child_woman_ratio: float
    nrr: float

    def __post_init__(self):
        for attr in ("female_shares", "male_shares"):
            arr = np.asarray(getattr(self, attr), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, attr, arr)
        total = float(self.female_shares.sum() + self.male_shares.sum())
        if abs(total - 1.0) > 1e-9:
            raise DomainError("stable shares must sum to 1")
        if np.any(self.female_shares < 0.0) or np.any(self.male_shares < 0.0):
            raise DomainError("stable shares must be non-negative")

    def shares(self, sex: str) -> np.ndarray:
        return self.female_shares if sex == FEMALE else self.male_shares


def _stable_weights(table: LifeTable, r: float, birth_weight: float) -> np.ndarray:
    """Unnormalized stable person-years by age for one sex.

    Closed groups carry birth_weight * exp(-r*(x+2.5)) * nLx.  The open
    terminal group uses the fixed point of the pooled survivorship step so
    that a constant-rates projection reproduces these weights exactly.
    """
    mids = np.asarray(table.grid.midpoints())
    w = birth_weight * np.exp(-r * mids) * table.nLx
    growth_factor = np.exp(r * AGE_WIDTH)
    pooled = table.nLx[-1] / (table.nLx[-2] + table.nLx[-1])
    if growth_factor - pooled <= 1e-9:
        raise DomainError(
            "growth rate too negative for the open terminal group to reach a stable share"
        )
    w[-1] = w[-2] * pooled / (growth_factor - pooled)
    return w


def stable_structure(
    schedule: FertilitySchedule,
    female_table: LifeTable,
    male_table: LifeTable,
    srb: SexRatioAtBirth,
    r: float,
) -> StableSolution:
    """Normalized stable composition and child-woman ratio at growth rate r."""
    require_same_grid(female_table, male_table)
    w_f = _stable_weights(female_table, r, 100.0)
    w_m = _stable_weights(male_table, r, srb.males_per_100_females)
    total = w_f.sum() + w_m.sum()
    c_f = w_f / total
    c_m = w_m / total
    children = float(sum(c_f[i] + c_m[i] for i in CHILD_INDICES))
    women = float(c_f[ADULT_START_INDEX:].sum())
    if women <= 0.0:
        raise DomainError("stable composition has no women aged 15+")
    return StableSolution(
        growth_rate=r,
        grid=female_table.grid,
        female_shares=c_f,
        male_shares=c_m,
        child_woman_ratio=children / women,
        nrr=net_reproduction_rate(schedule, female_table, srb),
    )


def solve_stable(
    schedule: FertilitySchedule,
    female_table: LifeTable,
    male_table: LifeTable,
    srb: SexRatioAtBirth,
) -> StableSolution:
    """Convenience wrapper: solve for r, then build the composition."""
    r = solve_lotka(schedule, female_table, srb)
    return stable_structure(schedule, female_table, male_table, srb, r)
