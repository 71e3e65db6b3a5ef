"""Two-sex cohort-component projection with scheduled rate changes."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ages import ADULT_START_INDEX, AGE_WIDTH, CHILD_INDICES, AgeGrid
from .errors import DomainError
from .fertility import FertilityPattern, scale_to_tfr
from .lifetable import LifeTable, MortalityFamily, paired_tables, require_same_grid
from .stable import SexRatioAtBirth, solve_stable

log = logging.getLogger(__name__)

STEP = AGE_WIDTH  # the projection step equals the age-group width


@dataclass(frozen=True)
class PopulationVector:
    """Person counts by sex and age group."""

    grid: AgeGrid
    female: np.ndarray
    male: np.ndarray

    def __post_init__(self):
        for attr in ("female", "male"):
            arr = np.asarray(getattr(self, attr), dtype=float).copy()
            if arr.shape != (len(self.grid),):
                raise DomainError(f"{attr} counts must have one value per age group")
            if np.any(arr < 0.0):
                raise DomainError("person counts must be non-negative")
            arr.flags.writeable = False
            object.__setattr__(self, attr, arr)
        if self.total() <= 0.0:
            raise DomainError("total population must be positive")

    def total(self) -> float:
        return float(self.female.sum() + self.male.sum())

    def child_woman_ratio(self) -> float:
        children = float(
            sum(self.female[i] + self.male[i] for i in CHILD_INDICES)
        )
        women = float(self.female[ADULT_START_INDEX:].sum())
        if women <= 0.0:
            raise DomainError("no women aged 15+ in the population")
        return children / women


@dataclass(frozen=True)
class RateChange:
    """New (TFR, e0) taking effect at a given time (years from start)."""

    time: float
    tfr: float
    e0: float


@dataclass(frozen=True)
class ScenarioSchedule:
    """Rate changes over a horizon, reported every few years."""

    changes: tuple[RateChange, ...]
    horizon: float
    reporting_interval: float = 5.0

    def __post_init__(self):
        changes = tuple(self.changes)
        object.__setattr__(self, "changes", changes)
        if not changes:
            raise DomainError("schedule needs at least one rate entry")
        if changes[0].time != 0.0:
            raise DomainError("the first rate entry must take effect at time 0")
        times = [c.time for c in changes]
        if any(b - a <= 0 for a, b in zip(times, times[1:])):
            raise DomainError("rate change times must be strictly increasing")
        if self.horizon <= 0.0 or self.horizon % STEP != 0.0:
            raise DomainError(f"horizon must be a positive multiple of {STEP}")
        if self.reporting_interval <= 0.0 or self.reporting_interval % STEP != 0.0:
            raise DomainError(f"reporting interval must be a positive multiple of {STEP}")

    def to_json_dict(self) -> dict:
        return {
            "changes": [
                {"time": c.time, "tfr": c.tfr, "e0": c.e0} for c in self.changes
            ],
            "horizon": self.horizon,
            "reporting_interval": self.reporting_interval,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScenarioSchedule":
        return cls(
            changes=tuple(
                RateChange(time=c["time"], tfr=c["tfr"], e0=c["e0"])
                for c in d["changes"]
            ),
            horizon=d["horizon"],
            reporting_interval=d.get("reporting_interval", 5.0),
        )

    @classmethod
    def read_json(cls, path: str | Path) -> "ScenarioSchedule":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class TrajectoryPoint:
    """State of the projection at a reporting time.

    growth is the annualized log growth over the preceding 5-year step;
    NaN at time 0, where there is no preceding step.
    """

    time: float
    cwr: float
    growth: float
    total_population: float


def stable_seed(
    tfr: float,
    e0: float,
    family: MortalityFamily,
    pattern: FertilityPattern,
    srb: SexRatioAtBirth,
    total: float,
) -> PopulationVector:
    """Population proportional to the stable composition, scaled to a total."""
    if total <= 0.0:
        raise DomainError("total must be positive")
    female, male = paired_tables(family, e0)
    solution = solve_stable(scale_to_tfr(pattern, tfr), female, male, srb)
    return PopulationVector(
        grid=female.grid,
        female=solution.female_shares * total,
        male=solution.male_shares * total,
    )


def _survive(counts: np.ndarray, nLx: np.ndarray) -> np.ndarray:
    """Age the population one step via person-years ratios, pooling 85+."""
    new = np.zeros_like(counts)
    new[1:-1] = counts[:-2] * (nLx[1:-1] / nLx[:-2])
    pooled = nLx[-1] / (nLx[-2] + nLx[-1])
    new[-1] = (counts[-2] + counts[-1]) * pooled
    return new


def project_step(
    pop: PopulationVector,
    female_table: LifeTable,
    male_table: LifeTable,
    rates_on_grid: np.ndarray,
    srb: SexRatioAtBirth,
) -> PopulationVector:
    """One 5-year step: survivorship, then births split by sex.

    Mid-period woman-years use exponential (geometric-mean) interpolation
    between the start-of-step and survived end-of-step counts, which keeps
    the step growth of a stable population exactly on the characteristic
    equation's root.
    """
    require_same_grid(female_table, male_table)
    if pop.grid != female_table.grid:
        raise DomainError("population vector and life tables use different grids")
    new_f = _survive(pop.female, female_table.nLx)
    new_m = _survive(pop.male, male_table.nLx)
    woman_years = STEP * np.sqrt(pop.female * new_f)
    births = float((rates_on_grid * woman_years).sum())
    new_f[0] = births * srb.female_fraction * female_table.nLx[0] / (STEP * female_table.lx[0])
    new_m[0] = births * srb.male_fraction * male_table.nLx[0] / (STEP * male_table.lx[0])
    return PopulationVector(grid=pop.grid, female=new_f, male=new_m)


def _snap_changes(changes: tuple[RateChange, ...]) -> list[RateChange]:
    snapped = []
    for change in changes:
        time = change.time
        if time % STEP != 0.0:
            new_time = math.ceil(time / STEP) * STEP
            log.info(
                "rate change at t=%g snapped to the next step boundary t=%g",
                time,
                new_time,
            )
            time = new_time
        snapped.append(RateChange(time=time, tfr=change.tfr, e0=change.e0))
    deduped: dict[float, RateChange] = {}
    for change in snapped:
        deduped[change.time] = change  # later entries win a collision
    return sorted(deduped.values(), key=lambda c: c.time)


def project(
    initial: PopulationVector,
    schedule: ScenarioSchedule,
    family: MortalityFamily,
    pattern: FertilityPattern,
    srb: SexRatioAtBirth,
) -> list[TrajectoryPoint]:
    """Run the projection, recording CWR and step growth at reporting times."""
    changes = _snap_changes(schedule.changes)
    # Resolve every requested mortality level before stepping, so an
    # unreachable e0 fails fast.
    tables = {c.e0: paired_tables(family, c.e0) for c in changes}
    rates = {c.tfr: scale_to_tfr(pattern, c.tfr).rates_on_grid(initial.grid) for c in changes}
    points = [
        TrajectoryPoint(
            time=0.0,
            cwr=initial.child_woman_ratio(),
            growth=float("nan"),
            total_population=initial.total(),
        )
    ]
    pop = initial
    active = changes[0]
    change_index = 0
    t = 0.0
    while t < schedule.horizon:
        while (
            change_index + 1 < len(changes)
            and changes[change_index + 1].time <= t
        ):
            change_index += 1
        active = changes[change_index]
        female_table, male_table = tables[active.e0]
        prev_total = pop.total()
        pop = project_step(pop, female_table, male_table, rates[active.tfr], srb)
        t += STEP
        if t % schedule.reporting_interval == 0.0:
            points.append(
                TrajectoryPoint(
                    time=t,
                    cwr=pop.child_woman_ratio(),
                    growth=math.log(pop.total() / prev_total) / STEP,
                    total_population=pop.total(),
                )
            )
    return points


def write_trajectory_csv(points: list[TrajectoryPoint], path: str | Path) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time", "cwr", "growth_per_year", "total_population"])
        for p in points:
            growth = "" if math.isnan(p.growth) else f"{p.growth:.6g}"
            writer.writerow(
                [f"{p.time:g}", f"{p.cwr:.6g}", growth, f"{p.total_population:.6g}"]
            )
