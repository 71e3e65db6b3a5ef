"""Figure jobs: map artifact files to rendered images.

Each job knows which artifact files its figure consumes; rendering reads
those files only.  If the core toolkit's outputs are missing the job
fails fast with a FileNotFoundError before any drawing happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib.pyplot as plt

from . import artifacts, panels

FIGURE_IDS = (
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "figA1", "figB2", "figC1",
)

# Artifact filenames each figure expects inside the artifacts directory.
FIGURE_INPUTS: dict[str, tuple[str, ...]] = {
    "fig2": ("surface_west_booth.csv",),
    "fig3": ("surface_west_booth.csv",),
    "fig4": (
        "contours_cwr_west_booth.json",
        "contours_cwr_south_booth.json",
        "contours_cwr_west_maori1962.json",
        "contours_cwr_south_maori1962.json",
    ),
    "fig5": ("trajectory_fert_single.csv", "trajectory_fert_staircase.csv"),
    "fig6": ("aligned_observations.csv",),
    "fig7": ("surface_west_booth.csv", "feasible_case_study.json"),
    "figA1": ("survival_increments.csv",),
    "figB2": (
        "contours_growth_west_booth.json",
        "contours_growth_south_booth.json",
        "contours_growth_west_maori1962.json",
        "contours_growth_south_maori1962.json",
    ),
    "figC1": ("trajectory_mort_single.csv", "trajectory_mort_staircase.csv"),
}

PANEL_TITLES = {
    "fig4": (
        "reference pattern / west", "reference pattern / south",
        "1962 pattern / west", "1962 pattern / south",
    ),
}


@dataclass(frozen=True)
class FigureJob:
    """One figure to render from pre-generated artifacts."""

    figure_id: str
    inputs: tuple[Path, ...]
    output: Path
    cwr_range: tuple[float, float] | None = None
    growth_range: tuple[float, float] | None = None
    bold_cell: tuple[float, float] | None = None

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; expected one of {FIGURE_IDS}"
            )
        missing = [str(p) for p in self.inputs if not Path(p).exists()]
        if missing:
            raise FileNotFoundError(
                f"{self.figure_id}: missing input artifact(s): {', '.join(missing)}"
            )

    @classmethod
    def for_figure(
        cls,
        figure_id: str,
        artifacts_dir: str | Path,
        out_dir: str | Path,
        **kwargs,
    ) -> "FigureJob":
        artifacts_dir = Path(artifacts_dir)
        inputs = tuple(artifacts_dir / name for name in FIGURE_INPUTS.get(figure_id, ()))
        return cls(
            figure_id=figure_id,
            inputs=inputs,
            output=Path(out_dir) / f"{figure_id}.svg",
            **kwargs,
        )


def _render_fig2(job: FigureJob) -> None:
    surface = artifacts.read_surface_csv(job.inputs[0])
    fig, ax = plt.subplots(figsize=(13, 6.5))
    panels.number_grid(ax, surface, bold_cell=job.bold_cell or (5.0, 27.5))
    ax.set_title("child-woman ratios in stable populations", fontsize=10)
    panels.save_deterministic(fig, job.output)


def _render_fig3(job: FigureJob) -> None:
    surface = artifacts.read_surface_csv(job.inputs[0])
    cwr_range = job.cwr_range or (0.95, 1.05)
    growth_range = job.growth_range or (-0.004, -0.002)
    fig, (ax_all, ax_subset) = plt.subplots(2, 1, figsize=(13, 13))
    panels.number_grid(ax_all, surface, show_growth=True)
    ax_all.set_title("child-woman ratios and growth rates (italics, % per year)",
                     fontsize=10)
    panels.number_grid(
        ax_subset, surface, show_growth=True,
        cwr_range=cwr_range, growth_range=growth_range,
    )
    ax_subset.set_title(
        f"cells with cwr in [{cwr_range[0]:g}, {cwr_range[1]:g}] (blue) and growth "
        f"in [{growth_range[0]:g}, {growth_range[1]:g}] per year (red; both purple)",
        fontsize=10,
    )
    panels.save_deterministic(fig, job.output)


def _render_contour_grid(job: FigureJob) -> None:
    baseline = artifacts.read_contours_json(job.inputs[0])
    titles = PANEL_TITLES["fig4"]
    fig, axes = plt.subplots(2, 2, figsize=(11, 9), sharex=True, sharey=True)
    for ax, path, title in zip(axes.ravel(), job.inputs, titles):
        lines = artifacts.read_contours_json(path)
        overlay = None if path == job.inputs[0] else baseline
        panels.contour_panel(ax, lines, overlay)
        ax.set_title(title, fontsize=9)
    panels.save_deterministic(fig, job.output)


def _render_trajectories(job: FigureJob, titles: tuple[str, str]) -> None:
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
    for col, (path, title) in enumerate(zip(job.inputs, titles)):
        points = artifacts.read_trajectory_csv(path)
        panels.trajectory_panels((axes[0, col], axes[1, col]), points, title)
    panels.save_deterministic(fig, job.output)


def _render_fig6(job: FigureJob) -> None:
    observations = artifacts.read_aligned_csv(job.inputs[0])
    fig, axes = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    panels.case_study_panels((axes[0], axes[1]), observations)
    axes[0].set_title("aligned census estimates", fontsize=10)
    panels.save_deterministic(fig, job.output)


def _render_fig7(job: FigureJob) -> None:
    surface = artifacts.read_surface_csv(job.inputs[0])
    entries = artifacts.read_feasible_json(job.inputs[1])
    shown = [entries[0], entries[-1]] if len(entries) > 1 else entries
    fig, axes = plt.subplots(len(shown), 1, figsize=(13, 6.5 * len(shown)))
    if len(shown) == 1:
        axes = [axes]
    for ax, entry in zip(axes, shown):
        query = entry["query"]
        cwr_range = tuple(query["cwr_range"])
        growth_range = tuple(query["growth_range"]) if query.get("growth_range") else None
        panels.number_grid(
            ax, surface, show_growth=True,
            cwr_range=cwr_range, growth_range=growth_range,
        )
        years = entry.get("source_years")
        label = (
            f"censuses {int(years[0])}-{int(years[1])}" if years else "observed ranges"
        )
        ax.set_title(
            f"{label}: cwr in [{cwr_range[0]:.3f}, {cwr_range[1]:.3f}] (blue), "
            f"growth in [{growth_range[0]:.4f}, {growth_range[1]:.4f}] (red; both purple)",
            fontsize=10,
        )
    panels.save_deterministic(fig, job.output)


def _render_figA1(job: FigureJob) -> None:
    by_group = artifacts.read_survival_csv(job.inputs[0])
    fig, ax = plt.subplots(figsize=(7, 5))
    panels.survival_panel(ax, by_group)
    ax.set_title("within-group survival by mortality level", fontsize=10)
    panels.save_deterministic(fig, job.output)


def render(job: FigureJob) -> Path:
    """Render one figure job; returns the written image path."""
    if job.figure_id == "fig2":
        _render_fig2(job)
    elif job.figure_id == "fig3":
        _render_fig3(job)
    elif job.figure_id in ("fig4", "figB2"):
        _render_contour_grid(job)
    elif job.figure_id == "fig5":
        _render_trajectories(
            job, ("single fertility increase", "staircase fertility increases")
        )
    elif job.figure_id == "figC1":
        _render_trajectories(
            job, ("single mortality improvement", "staircase mortality improvements")
        )
    elif job.figure_id == "fig6":
        _render_fig6(job)
    elif job.figure_id == "fig7":
        _render_fig7(job)
    elif job.figure_id == "figA1":
        _render_figA1(job)
    return job.output
