"""Age patterns of fertility and their scaling to a total fertility rate."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ages import AGE_WIDTH, AgeGrid
from .errors import DomainError

log = logging.getLogger(__name__)

REPRODUCTIVE_AGES = (15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0)


@dataclass(frozen=True)
class FertilityPattern:
    """Proportions of total fertility by 5-year group over ages 15-49."""

    name: str
    proportions: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.proportions, dtype=float).copy()
        if p.shape != (len(REPRODUCTIVE_AGES),):
            raise DomainError(
                f"pattern needs {len(REPRODUCTIVE_AGES)} proportions (ages 15-19 .. 45-49)"
            )
        if np.any(p < 0.0):
            raise DomainError("pattern proportions must be non-negative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise DomainError("pattern proportions must sum to 1")
        p.flags.writeable = False
        object.__setattr__(self, "proportions", p)

    @classmethod
    def from_values(cls, name: str, values: Sequence[float]) -> "FertilityPattern":
        """Build a pattern, renormalizing (with a warning) sloppy inputs."""
        v = np.asarray(values, dtype=float)
        if np.any(v < 0.0):
            raise DomainError("pattern values must be non-negative")
        total = v.sum()
        if total <= 0.0:
            raise DomainError("pattern values must have a positive sum")
        if abs(total - 1.0) > 1e-6:
            log.warning(
                "pattern %r proportions sum to %.8f; renormalizing", name, total
            )
        return cls(name=name, proportions=v / total)

    def mean_age(self) -> float:
        mids = np.array(REPRODUCTIVE_AGES) + AGE_WIDTH / 2
        return float((self.proportions * mids).sum())


@dataclass(frozen=True)
class FertilitySchedule:
    """Age-specific fertility rates implied by a pattern and a TFR."""

    pattern: FertilityPattern
    tfr: float
    rates: np.ndarray  # births per woman-year, ages 15-19 .. 45-49

    def __post_init__(self):
        r = np.asarray(self.rates, dtype=float).copy()
        if r.shape != (len(REPRODUCTIVE_AGES),):
            raise DomainError("schedule needs one rate per reproductive group")
        if abs(AGE_WIDTH * r.sum() - self.tfr) > 1e-9:
            raise DomainError("5 * sum(rates) must equal the TFR")
        r.flags.writeable = False
        object.__setattr__(self, "rates", r)

    def rates_on_grid(self, grid: AgeGrid) -> np.ndarray:
        """Rates aligned to a full age grid, zero outside ages 15-49."""
        out = np.zeros(len(grid))
        for age, rate in zip(REPRODUCTIVE_AGES, self.rates):
            out[grid.index_of(age)] = rate
        return out


def scale_to_tfr(pattern: FertilityPattern, tfr: float) -> FertilitySchedule:
    """f(x) = tfr * proportion(x) / 5 for each reproductive group."""
    if tfr < 0.0:
        raise DomainError("TFR must be non-negative")
    rates = tfr * pattern.proportions / AGE_WIDTH
    return FertilitySchedule(pattern=pattern, tfr=float(tfr), rates=rates)
