"""Five-year age grids with an open-ended terminal group."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError

AGE_WIDTH = 5.0
DEFAULT_TERMINAL_AGE = 85.0


def _default_bounds() -> tuple[float, ...]:
    return tuple(float(a) for a in range(0, int(DEFAULT_TERMINAL_AGE) + 1, int(AGE_WIDTH)))


@dataclass(frozen=True)
class AgeGrid:
    """Lower bounds of 5-year age groups; the last group is open-ended.

    The grid must start at 0 and advance in uniform 5-year steps, so the
    child ages (0-14) and the adult split at 15 are always representable.
    """

    lower_bounds: tuple[float, ...] = field(default_factory=_default_bounds)

    def __post_init__(self):
        bounds = tuple(float(b) for b in self.lower_bounds)
        object.__setattr__(self, "lower_bounds", bounds)
        if len(bounds) < 4:
            raise DomainError("age grid needs at least the 0-14 groups plus a terminal group")
        if bounds[0] != 0.0:
            raise DomainError("age grid must start at age 0")
        for lo, hi in zip(bounds, bounds[1:]):
            if hi - lo != AGE_WIDTH:
                raise DomainError("age groups below the terminal group must be 5 years wide")

    def __len__(self) -> int:
        return len(self.lower_bounds)

    @property
    def terminal_age(self) -> float:
        return self.lower_bounds[-1]

    def index_of(self, age_lower: float) -> int:
        try:
            return self.lower_bounds.index(float(age_lower))
        except ValueError:
            raise DomainError(f"age group starting at {age_lower} not on grid") from None

    def midpoints(self) -> tuple[float, ...]:
        """Group midpoints; the terminal group uses its lower bound + 2.5 too."""
        return tuple(b + AGE_WIDTH / 2 for b in self.lower_bounds)

    def labels(self) -> tuple[str, ...]:
        parts = [f"{int(lo)}-{int(lo + AGE_WIDTH - 1)}" for lo in self.lower_bounds[:-1]]
        parts.append(f"{int(self.terminal_age)}+")
        return tuple(parts)


DEFAULT_GRID = AgeGrid()

# Indices used by the child-woman ratio: children are 0-4, 5-9, 10-14.
CHILD_INDICES = (0, 1, 2)
ADULT_START_INDEX = 3  # age 15
