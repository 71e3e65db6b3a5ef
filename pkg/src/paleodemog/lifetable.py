"""Abridged life tables, model families, and the Brass logit transform.

Survivorship columns live on a 5-year :class:`~paleodemog.ages.AgeGrid`.
Families of tables (``west``- and ``south``-pattern) are tabulated at a
ladder of life expectancies; anything in between is reached by
interpolating survivorship logits, and anything below the lowest tabulated
level by a Brass logit extension of that lowest table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ages import AGE_WIDTH, AgeGrid
from .errors import DomainError, GridMismatchError, InvalidStandardError, OutOfRangeError

FEMALE = "female"
MALE = "male"
SEXES = (FEMALE, MALE)

# Infant/child split used when rebuilding person-years for ages 0-4 from a
# bare survivorship column.  q(0) is carved out of q(0-4) with a share that
# shrinks as child mortality falls; the separation factors are the standard
# abridged-table values for high-mortality populations.
_INFANT_SHARE = {FEMALE: (0.57, 0.12), MALE: (0.59, 0.12)}
_A0_CAP = {FEMALE: 0.35, MALE: 0.33}
_A0_SLOPE = {FEMALE: (0.05, 3.0), MALE: (0.0425, 2.875)}
_A1_4 = {FEMALE: 1.361, MALE: 1.352}


def logit(l: float | np.ndarray) -> float | np.ndarray:
    """Survivorship logit, 0.5*ln((1-l)/l); decreasing in l."""
    return 0.5 * np.log((1.0 - l) / l)


def inverse_logit(y: float | np.ndarray) -> float | np.ndarray:
    return 1.0 / (1.0 + np.exp(2.0 * y))


def split_child_mortality(q_0_4: float, sex: str) -> tuple[float, float]:
    """Split 5q0 into (1q0, survivorship l(1)) using the fixed infant share."""
    c1, c2 = _INFANT_SHARE[sex]
    q0 = q_0_4 * (c1 + c2 * q_0_4)
    return q0, 1.0 - q0


def child_person_years(l5: float, sex: str) -> float:
    """Person-years lived in the 0-4 group per birth, from l(5) alone.

    Deaths under 5 concentrate near birth, so a plain trapezoid badly
    overstates person-years at high mortality; this applies the infant
    split plus standard separation factors instead.
    """
    q_0_4 = 1.0 - l5
    q0, l1 = split_child_mortality(q_0_4, sex)
    intercept, slope = _A0_SLOPE[sex]
    a0 = min(_A0_CAP[sex], intercept + slope * q0)
    a1 = _A1_4[sex]
    years_0_1 = 1.0 - (1.0 - a0) * q0
    years_1_5 = a1 * l1 + (4.0 - a1) * l5
    return years_0_1 + years_1_5


def person_years_from_survivorship(
    sex: str, lx: np.ndarray, terminal_life_expectancy: float
) -> np.ndarray:
    """Rebuild the nLx column from survivorship at group lower bounds.

    Ages 0-4 use the infant split, interior groups the trapezoid rule, and
    the open terminal group l(terminal) * e(terminal).
    """
    nLx = np.empty_like(lx)
    nLx[0] = child_person_years(float(lx[1]), sex)
    nLx[1:-1] = (AGE_WIDTH / 2) * (lx[1:-1] + lx[2:])
    nLx[-1] = lx[-1] * terminal_life_expectancy
    return nLx


@dataclass(frozen=True)
class LifeTable:
    """Per-sex survivorship and person-years columns on a 5-year grid."""

    sex: str
    grid: AgeGrid
    lx: np.ndarray
    nLx: np.ndarray
    e0: float

    def __post_init__(self):
        if self.sex not in SEXES:
            raise DomainError(f"sex must be one of {SEXES}, got {self.sex!r}")
        lx = np.asarray(self.lx, dtype=float).copy()
        nLx = np.asarray(self.nLx, dtype=float).copy()
        if lx.shape != (len(self.grid),) or nLx.shape != (len(self.grid),):
            raise DomainError("lx and nLx must have one value per age group")
        if lx[0] != 1.0:
            raise DomainError("l(0) must be exactly 1")
        if np.any(lx <= 0.0):
            raise DomainError("l(x) must be strictly positive")
        if np.any(np.diff(lx) >= 0.0):
            raise DomainError("l(x) must be strictly decreasing")
        if np.any(nLx <= 0.0):
            raise DomainError("nLx must be positive")
        recomputed = float(nLx.sum())
        if abs(recomputed - self.e0) > 1e-9:
            raise DomainError(
                f"stored e0 {self.e0} disagrees with person-years total {recomputed}"
            )
        lx.flags.writeable = False
        nLx.flags.writeable = False
        object.__setattr__(self, "lx", lx)
        object.__setattr__(self, "nLx", nLx)
        object.__setattr__(self, "e0", float(self.e0))

    @classmethod
    def from_columns(cls, sex: str, grid: AgeGrid, lx, nLx) -> "LifeTable":
        nLx = np.asarray(nLx, dtype=float)
        return cls(sex=sex, grid=grid, lx=np.asarray(lx, dtype=float), nLx=nLx, e0=float(nLx.sum()))

    @property
    def nqx(self) -> np.ndarray:
        """Death probabilities per group; 1 in the open terminal group."""
        q = 1.0 - self.lx[1:] / self.lx[:-1]
        return np.append(q, 1.0)

    @property
    def terminal_life_expectancy(self) -> float:
        return float(self.nLx[-1] / self.lx[-1])

    def within_group_survival(self, index: int) -> float:
        """l(upper)/l(lower) for a closed group."""
        if index < 0 or index >= len(self.grid) - 1:
            raise DomainError("within-group survival needs a closed (non-terminal) group")
        return float(self.lx[index + 1] / self.lx[index])


@dataclass(frozen=True)
class BrassParams:
    """Level (alpha) and slope (beta) of the logit relational model."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not (self.beta > 0.0):
            raise DomainError("beta must be positive")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")


def logit_transform(standard: LifeTable, params: BrassParams) -> LifeTable:
    """Map a standard table through logit(l') = alpha + beta*logit(l).

    l(0) stays 1; person-years and e0 are rebuilt from the new column, with
    the terminal-group life expectancy scaled by the survivorship ratio at
    the terminal age.
    """
    interior = standard.lx[1:]
    if np.any(interior >= 1.0) or np.any(interior <= 0.0):
        raise InvalidStandardError(
            "standard has l(x) of 0 or 1 at an interior age; logit undefined"
        )
    new_interior = inverse_logit(params.alpha + params.beta * logit(interior))
    lx = np.concatenate(([1.0], new_interior))
    terminal_e = standard.terminal_life_expectancy * (lx[-1] / standard.lx[-1])
    nLx = person_years_from_survivorship(standard.sex, lx, terminal_e)
    return LifeTable.from_columns(standard.sex, standard.grid, lx, nLx)


@dataclass(frozen=True)
class MortalityFamily:
    """A named family of life tables at increasing life expectancies.

    The lowest-e0 table of each sex doubles as the Brass standard for
    extensions below the tabulated range.  Levels of the two sexes are
    paired row-by-row, which is how :func:`paired_tables` matches a male
    table to a female life expectancy.
    """

    name: str
    tables: Mapping[str, tuple[LifeTable, ...]]

    def __post_init__(self):
        for sex, seq in self.tables.items():
            if sex not in SEXES:
                raise DomainError(f"unknown sex {sex!r} in family {self.name!r}")
            if not seq:
                raise DomainError(f"family {self.name!r} has no tables for {sex}")
            e0s = [t.e0 for t in seq]
            if any(b - a <= 0 for a, b in zip(e0s, e0s[1:])):
                raise DomainError(
                    f"family {self.name!r}/{sex}: tables must be ordered by increasing e0"
                )
        if len(self.tables) == 2:
            nf = len(self.tables[FEMALE])
            nm = len(self.tables[MALE])
            if nf != nm:
                raise DomainError(
                    f"family {self.name!r}: female and male level counts differ ({nf} vs {nm})"
                )

    def levels(self, sex: str) -> tuple[LifeTable, ...]:
        try:
            return tuple(self.tables[sex])
        except KeyError:
            raise DomainError(f"family {self.name!r} has no {sex} tables") from None

    def standard(self, sex: str) -> LifeTable:
        return self.levels(sex)[0]

    def e0_bounds(self, sex: str) -> tuple[float, float]:
        levels = self.levels(sex)
        return levels[0].e0, levels[-1].e0


def _interpolated_table(
    lo: LifeTable, hi: LifeTable, weight: float
) -> LifeTable:
    y = (1.0 - weight) * logit(lo.lx[1:]) + weight * logit(hi.lx[1:])
    lx = np.concatenate(([1.0], inverse_logit(y)))
    terminal_e = (1.0 - weight) * lo.terminal_life_expectancy + weight * hi.terminal_life_expectancy
    nLx = person_years_from_survivorship(lo.sex, lx, terminal_e)
    return LifeTable.from_columns(lo.sex, lo.grid, lx, nLx)


def _solve_interpolation(lo: LifeTable, hi: LifeTable, target_e0: float) -> LifeTable:
    # e0 is strictly increasing in the interpolation weight, so bisect the
    # weight until the rebuilt table lands on the target.
    a, b = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (a + b)
        table = _interpolated_table(lo, hi, mid)
        if abs(table.e0 - target_e0) <= 1e-9:
            return table
        if table.e0 < target_e0:
            a = mid
        else:
            b = mid
    return _interpolated_table(lo, hi, 0.5 * (a + b))


ALPHA_BRACKET = (-2.0, 2.0)


def solve_alpha_for_e0(
    standard: LifeTable, target_e0: float, beta: float = 1.0, tol: float = 1e-9
) -> float:
    """Bisect alpha so the transformed table's e0 hits the target.

    e0 is strictly decreasing in alpha, and the bracket [-2, 2] covers
    every level this toolkit tabulates or extends to.
    """
    lo_a, hi_a = ALPHA_BRACKET
    e0_hi = logit_transform(standard, BrassParams(lo_a, beta)).e0
    e0_lo = logit_transform(standard, BrassParams(hi_a, beta)).e0
    if not (e0_lo - 1e-12 <= target_e0 <= e0_hi + 1e-12):
        raise OutOfRangeError(
            f"target e0 {target_e0} outside the reachable range "
            f"[{e0_lo:.3f}, {e0_hi:.3f}] of this standard"
        )
    a, b = lo_a, hi_a
    for _ in range(200):
        mid = 0.5 * (a + b)
        e0_mid = logit_transform(standard, BrassParams(mid, beta)).e0
        if abs(e0_mid - target_e0) <= tol:
            return mid
        if e0_mid > target_e0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def table_for_e0(family: MortalityFamily, sex: str, target_e0: float) -> LifeTable:
    """Return the family's table at an arbitrary life expectancy.

    Within the tabulated range this interpolates survivorship logits
    between the bracketing levels; below it, a Brass extension of the
    lowest table; above it is an error.
    """
    if not (target_e0 > 0.0):
        raise DomainError("target e0 must be positive")
    levels = family.levels(sex)
    e0s = [t.e0 for t in levels]
    if target_e0 > e0s[-1] + 1e-9:
        raise OutOfRangeError(
            f"target e0 {target_e0} above the highest tabulated level ({e0s[-1]:.3f}) "
            f"of family {family.name!r}/{sex}"
        )
    for table in levels:
        if abs(table.e0 - target_e0) <= 1e-9:
            return table
    if target_e0 >= e0s[0]:
        idx = int(np.searchsorted(e0s, target_e0)) - 1
        return _solve_interpolation(levels[idx], levels[idx + 1], target_e0)
    standard = levels[0]
    alpha = solve_alpha_for_e0(standard, target_e0)
    return logit_transform(standard, BrassParams(alpha))


def male_e0_for_female(family: MortalityFamily, female_e0: float) -> float:
    """Map a female life expectancy to the male one at the same level.

    Piecewise-linear in the tabulated level ladders; extrapolated below
    the lowest level with the first segment's slope.
    """
    f_ladder = np.array([t.e0 for t in family.levels(FEMALE)])
    m_ladder = np.array([t.e0 for t in family.levels(MALE)])
    if len(f_ladder) < 2:
        return float(m_ladder[0] - (f_ladder[0] - female_e0))
    if female_e0 < f_ladder[0]:
        slope = (m_ladder[1] - m_ladder[0]) / (f_ladder[1] - f_ladder[0])
        return float(m_ladder[0] - (f_ladder[0] - female_e0) * slope)
    return float(np.interp(female_e0, f_ladder, m_ladder))


def paired_tables(family: MortalityFamily, female_e0: float) -> tuple[LifeTable, LifeTable]:
    """Female table at the given e0 plus the male table at the same level."""
    female = table_for_e0(family, FEMALE, female_e0)
    male = table_for_e0(family, MALE, male_e0_for_female(family, female_e0))
    return female, male


@dataclass(frozen=True)
class SurvivalIncrements:
    """Within-group survival probabilities l(upper)/l(lower) by (e0, group)."""

    sex: str
    e0_values: tuple[float, ...]
    group_lower: tuple[float, ...]
    probabilities: np.ndarray  # shape (len(e0_values), len(group_lower))

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).copy()
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)


def survival_increments(
    family: MortalityFamily,
    sex: str,
    e0_list: Sequence[float],
    groups: Iterable[float],
) -> SurvivalIncrements:
    """Tabulate l(upper)/l(lower) for the given groups across e0 levels."""
    group_lower = tuple(float(g) for g in groups)
    grid = family.standard(sex).grid
    indices = [grid.index_of(g) for g in group_lower]
    if len(grid) - 1 in indices:
        raise DomainError("the open terminal group has no within-group survival")
    probs = np.empty((len(e0_list), len(group_lower)))
    for i, e0 in enumerate(e0_list):
        table = table_for_e0(family, sex, float(e0))
        for j, idx in enumerate(indices):
            probs[i, j] = table.within_group_survival(idx)
    return SurvivalIncrements(
        sex=sex,
        e0_values=tuple(float(e) for e in e0_list),
        group_lower=group_lower,
        probabilities=probs,
    )


def require_same_grid(a: LifeTable, b: LifeTable) -> None:
    if a.grid != b.grid:
        raise GridMismatchError("life tables are on different age grids")
