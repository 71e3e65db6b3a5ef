"""Infer fertility and mortality levels from child-woman ratios and growth.

The toolkit links total fertility and life expectancy to the child-woman
ratio and intrinsic growth rate of the implied stable population, sweeps
(TFR, e0) grids, inverts observed ranges back to feasible combinations,
and stress-tests the stability assumption with cohort-component
projections.
"""

__version__ = "0.1.0"

from .ages import AgeGrid, DEFAULT_GRID
from .census import AlignedObservation, CensusSnapshot, align, cwr, infer
from .errors import PaleodemogError
from .fertility import FertilityPattern, FertilitySchedule, scale_to_tfr
from .grids import FeasibleSet, GridSpec, GridSurface, contour_export, invert, sweep
from .lifetable import (
    BrassParams,
    LifeTable,
    MortalityFamily,
    logit_transform,
    paired_tables,
    survival_increments,
    table_for_e0,
)
from .projection import (
    PopulationVector,
    RateChange,
    ScenarioSchedule,
    TrajectoryPoint,
    project,
    stable_seed,
)
from .stable import (
    SexRatioAtBirth,
    StableSolution,
    net_reproduction_rate,
    solve_lotka,
    solve_stable,
    stable_structure,
)

__all__ = [
    "AgeGrid",
    "DEFAULT_GRID",
    "AlignedObservation",
    "CensusSnapshot",
    "align",
    "cwr",
    "infer",
    "PaleodemogError",
    "FertilityPattern",
    "FertilitySchedule",
    "scale_to_tfr",
    "FeasibleSet",
    "GridSpec",
    "GridSurface",
    "contour_export",
    "invert",
    "sweep",
    "BrassParams",
    "LifeTable",
    "MortalityFamily",
    "logit_transform",
    "paired_tables",
    "survival_increments",
    "table_for_e0",
    "PopulationVector",
    "RateChange",
    "ScenarioSchedule",
    "TrajectoryPoint",
    "project",
    "stable_seed",
    "SexRatioAtBirth",
    "StableSolution",
    "net_reproduction_rate",
    "solve_lotka",
    "solve_stable",
    "stable_structure",
    "__version__",
]
