"""Drawing primitives shared by the figure jobs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "paleodemog-figures"

import matplotlib.pyplot as plt

from .artifacts import Surface

BLUE = "#9ecae9"
RED = "#f4a6a3"
PURPLE = "#c6b3e0"


def save_deterministic(fig, path) -> None:
    """Write an SVG whose bytes depend only on the drawn content."""
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def in_range(value: float, rng: tuple[float, float] | None) -> bool:
    return rng is not None and rng[0] <= value <= rng[1]


def feasible_masks(
    surface: Surface,
    cwr_range: tuple[float, float] | None,
    growth_range: tuple[float, float] | None,
):
    """Cells satisfying the CWR range, the growth range, and both.

    The 'both' set is exactly what a feasible-set artifact lists for the
    same surface and query.
    """
    cwr_cells = set()
    growth_cells = set()
    for key, cwr in surface.cwr.items():
        if in_range(cwr, cwr_range):
            cwr_cells.add(key)
        if in_range(surface.growth[key], growth_range):
            growth_cells.add(key)
    return cwr_cells, growth_cells, cwr_cells & growth_cells


def _cell_extent(values: tuple[float, ...], v: float) -> tuple[float, float]:
    idx = values.index(v)
    left = (values[idx - 1] + v) / 2 if idx > 0 else v - (values[idx + 1] - v) / 2
    right = (v + values[idx + 1]) / 2 if idx < len(values) - 1 else v + (v - values[idx - 1]) / 2
    return left, right


def number_grid(
    ax,
    surface: Surface,
    show_growth: bool = False,
    cwr_range: tuple[float, float] | None = None,
    growth_range: tuple[float, float] | None = None,
    bold_cell: tuple[float, float] | None = None,
    fontsize: float = 5.0,
) -> None:
    """The paper-style panel: one number (or two) per (TFR, e0) cell.

    Cells inside the CWR range get a blue background, cells inside the
    growth range red, cells inside both purple.
    """
    cwr_cells, growth_cells, both = feasible_masks(surface, cwr_range, growth_range)
    for (tfr, e0), cwr in surface.cwr.items():
        color = None
        if (tfr, e0) in both:
            color = PURPLE
        elif (tfr, e0) in cwr_cells:
            color = BLUE
        elif (tfr, e0) in growth_cells:
            color = RED
        if color is not None:
            x0, x1 = _cell_extent(surface.tfr_values, tfr)
            y0, y1 = _cell_extent(surface.e0_values, e0)
            ax.fill_between([x0, x1], y0, y1, color=color, linewidth=0)
        weight = "bold" if bold_cell == (tfr, e0) else "normal"
        if show_growth:
            ax.text(tfr, e0 + 0.45, f"{cwr:.2f}", ha="center", va="bottom",
                    fontsize=fontsize, weight=weight)
            ax.text(tfr, e0 - 0.45, f"{100 * surface.growth[(tfr, e0)]:.2f}",
                    ha="center", va="top", fontsize=fontsize * 0.9,
                    style="italic", weight=weight)
        else:
            ax.text(tfr, e0, f"{cwr:.2f}", ha="center", va="center",
                    fontsize=fontsize, weight=weight)
    pad_t = (surface.tfr_values[1] - surface.tfr_values[0]) if len(surface.tfr_values) > 1 else 0.5
    pad_e = (surface.e0_values[1] - surface.e0_values[0]) if len(surface.e0_values) > 1 else 2.5
    ax.set_xlim(surface.tfr_values[0] - pad_t, surface.tfr_values[-1] + pad_t)
    ax.set_ylim(surface.e0_values[0] - pad_e, surface.e0_values[-1] + pad_e)
    ax.set_xlabel("total fertility rate")
    ax.set_ylabel("life expectancy at birth (years)")


def contour_panel(ax, polylines: list[dict], baseline: list[dict] | None,
                  label_levels: bool = True) -> None:
    """Solid contour polylines plus an optional dashed baseline overlay."""
    for entry in polylines:
        pts = entry["points"]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.plot(xs, ys, color="black", linewidth=1.0)
        if label_levels and pts:
            mid = len(pts) // 2
            ax.annotate(f"{entry['level']:g}", (xs[mid], ys[mid]),
                        fontsize=6, color="black",
                        xytext=(2, 2), textcoords="offset points")
    if baseline is not None:
        for entry in baseline:
            xs = [p[0] for p in entry["points"]]
            ys = [p[1] for p in entry["points"]]
            ax.plot(xs, ys, color="gray", linewidth=0.9, linestyle="--")
    ax.set_xlabel("total fertility rate")
    ax.set_ylabel("life expectancy at birth (years)")


def trajectory_panels(axes_pair, points: list[dict], title: str) -> None:
    """cwr (top) and annualized growth (bottom) against time."""
    ax_cwr, ax_growth = axes_pair
    times = [p["time"] for p in points]
    ax_cwr.plot(times, [p["cwr"] for p in points], color="black", linewidth=1.2)
    ax_cwr.set_title(title, fontsize=9)
    ax_cwr.set_ylabel("child-woman ratio")
    growth_pts = [(p["time"], p["growth_per_year"]) for p in points
                  if p["growth_per_year"] is not None]
    ax_growth.plot([t for t, _ in growth_pts],
                   [100 * g for _, g in growth_pts],
                   color="black", linewidth=1.2)
    ax_growth.set_xlabel("years since the rate change")
    ax_growth.set_ylabel("growth (% per year)")


def case_study_panels(axes_pair, observations: list[dict]) -> None:
    ax_cwr, ax_growth = axes_pair
    mids = [o["midpoint"] for o in observations]
    ax_cwr.plot(mids, [o["cwr"] for o in observations], marker="o",
                color="black", linewidth=1.0)
    ax_cwr.set_ylabel("child-woman ratio")
    ax_growth.plot(mids, [100 * o["growth_per_year"] for o in observations],
                   marker="o", color="black", linewidth=1.0)
    ax_growth.axhline(0.0, color="gray", linewidth=0.7, linestyle=":")
    ax_growth.set_ylabel("growth (% per year)")
    ax_growth.set_xlabel("period midpoint (year)")


def survival_panel(ax, by_group: dict[float, list[tuple[float, float]]]) -> None:
    for group in sorted(by_group):
        series = by_group[group]
        label = f"{int(group)}-{int(group) + 4}"
        ax.plot([e0 for e0, _ in series], [p for _, p in series],
                marker="o", markersize=2.5, linewidth=1.1, label=label)
    ax.set_xlabel("life expectancy at birth (years)")
    ax.set_ylabel("probability of surviving the age group")
    ax.legend(title="age group", fontsize=7, title_fontsize=7)
