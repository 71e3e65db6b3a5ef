"""Census count series: child-woman ratios, mid-point alignment, inference."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DataFormatError, DomainError, OrderingError
from .grids import FeasibleSet, GridSpec, invert, sweep_cached

DEFAULT_CWR_HALFWIDTH = 0.05
DEFAULT_GROWTH_HALFWIDTH = 0.001


@dataclass(frozen=True)
class CensusSnapshot:
    """One census: children 0-14 (both sexes), women 15+, total count."""

    year: float
    children_0_14: float
    women_15_plus: float
    total_population: float

    def __post_init__(self):
        for attr in ("children_0_14", "women_15_plus", "total_population"):
            if getattr(self, attr) <= 0.0:
                raise DomainError(f"{attr} must be positive")
        if self.children_0_14 + self.women_15_plus > self.total_population:
            raise DomainError("children plus women exceed the total population")


def cwr(snapshot: CensusSnapshot) -> float:
    """Children aged 0-14 per woman aged 15+."""
    if snapshot.women_15_plus <= 0.0:
        raise DomainError("child-woman ratio undefined with no women 15+")
    return snapshot.children_0_14 / snapshot.women_15_plus


@dataclass(frozen=True)
class AlignedObservation:
    """Period-midpoint (CWR, growth) derived from two adjacent censuses."""

    midpoint: float
    cwr: float
    growth: float
    source_years: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.source_years
        if not (lo < self.midpoint < hi):
            raise DomainError("midpoint must lie strictly between the source years")


def align(series: Sequence[CensusSnapshot]) -> list[AlignedObservation]:
    """Average endpoint CWRs and annualize log growth for each adjacent pair."""
    if len(series) < 2:
        raise DomainError("need at least two censuses to align")
    years = [s.year for s in series]
    if any(b - a <= 0 for a, b in zip(years, years[1:])):
        raise OrderingError("census years must be strictly increasing")
    observations = []
    for a, b in zip(series, series[1:]):
        span = b.year - a.year
        observations.append(
            AlignedObservation(
                midpoint=(a.year + b.year) / 2.0,
                cwr=(cwr(a) + cwr(b)) / 2.0,
                growth=math.log(b.total_population / a.total_population) / span,
                source_years=(a.year, b.year),
            )
        )
    return observations


def infer(
    observation: AlignedObservation,
    cwr_halfwidth: float = DEFAULT_CWR_HALFWIDTH,
    growth_halfwidth: float = DEFAULT_GROWTH_HALFWIDTH,
    spec: GridSpec = GridSpec(),
) -> FeasibleSet:
    """Feasible (TFR, e0) cells for an observation, within +/- halfwidths."""
    if cwr_halfwidth <= 0.0 or growth_halfwidth <= 0.0:
        raise DomainError("halfwidths must be positive")
    surface = sweep_cached(spec)
    return invert(
        surface,
        cwr_range=(observation.cwr - cwr_halfwidth, observation.cwr + cwr_halfwidth),
        growth_range=(
            observation.growth - growth_halfwidth,
            observation.growth + growth_halfwidth,
        ),
    )


def read_census_csv(path: str | Path) -> list[CensusSnapshot]:
    """Read `year, children_0_14, women_15_plus, total_population` rows.

    Blank lines and lines starting with '#' are ignored; a header row is
    required.
    """
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"census file not found: {path}")
    header_seen = False
    snapshots = []
    with open(path, newline="", encoding="utf-8") as fh:
        for record in csv.reader(fh):
            if not record or not any(field.strip() for field in record):
                continue
            if record[0].lstrip().startswith("#"):
                continue
            if not header_seen:
                expected = ["year", "children_0_14", "women_15_plus", "total_population"]
                if [f.strip() for f in record] != expected:
                    raise DataFormatError(f"{path}: expected header {expected}")
                header_seen = True
                continue
            year, children, women, total = (float(v) for v in record)
            snapshots.append(
                CensusSnapshot(
                    year=year,
                    children_0_14=children,
                    women_15_plus=women,
                    total_population=total,
                )
            )
    if not header_seen:
        raise DataFormatError(f"{path}: missing header row")
    return snapshots


def write_aligned_csv(observations: Sequence[AlignedObservation], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["midpoint", "cwr", "growth_per_year", "year_from", "year_to"])
        for obs in observations:
            writer.writerow(
                [
                    f"{obs.midpoint:g}",
                    f"{obs.cwr:.6g}",
                    f"{obs.growth:.6g}",
                    f"{obs.source_years[0]:g}",
                    f"{obs.source_years[1]:g}",
                ]
            )
