"""(TFR, e0) grid sweeps, range inversion, and contour extraction."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import data
from .errors import DomainError, PaleodemogError
from .fertility import scale_to_tfr
from .lifetable import paired_tables
from .stable import SexRatioAtBirth, lotka_residual, solve_lotka, stable_structure

log = logging.getLogger(__name__)

DEFAULT_CELL_CAP = 50_000


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 9)


@dataclass(frozen=True)
class GridSpec:
    """A rectangular (TFR, e0) grid plus the assumptions used on it."""

    tfr_min: float = 2.0
    tfr_max: float = 9.0
    tfr_step: float = 0.2
    e0_min: float = 10.0
    e0_max: float = 50.0
    e0_step: float = 2.5
    family: str = "west"
    pattern: str = "booth"
    srb: float = 105.0
    cell_cap: int = DEFAULT_CELL_CAP

    def __post_init__(self):
        if self.tfr_step <= 0.0 or self.e0_step <= 0.0:
            raise DomainError("grid steps must be positive")
        if not (self.tfr_min < self.tfr_max or self.tfr_min == self.tfr_max):
            raise DomainError("tfr_min must not exceed tfr_max")
        if not (self.e0_min < self.e0_max or self.e0_min == self.e0_max):
            raise DomainError("e0_min must not exceed e0_max")
        n_cells = len(self.tfr_values()) * len(self.e0_values())
        if n_cells > self.cell_cap:
            raise DomainError(
                f"grid has {n_cells} cells, above the cap of {self.cell_cap}"
            )

    def tfr_values(self) -> np.ndarray:
        return _axis(self.tfr_min, self.tfr_max, self.tfr_step)

    def e0_values(self) -> np.ndarray:
        return _axis(self.e0_min, self.e0_max, self.e0_step)

    def to_dict(self) -> dict:
        return {
            "tfr_min": self.tfr_min,
            "tfr_max": self.tfr_max,
            "tfr_step": self.tfr_step,
            "e0_min": self.e0_min,
            "e0_max": self.e0_max,
            "e0_step": self.e0_step,
            "family": self.family,
            "pattern": self.pattern,
            "srb": self.srb,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(**d)


@dataclass(frozen=True)
class GridCell:
    tfr: float
    e0: float
    cwr: float
    growth: float
    residual: float


@dataclass(frozen=True)
class GridSurface:
    """Child-woman ratio and growth evaluated over a GridSpec."""

    spec: GridSpec
    tfr_values: np.ndarray
    e0_values: np.ndarray
    cwr: np.ndarray       # shape (n_tfr, n_e0)
    growth: np.ndarray
    residual: np.ndarray

    def __post_init__(self):
        for attr in ("tfr_values", "e0_values", "cwr", "growth", "residual"):
            arr = np.asarray(getattr(self, attr), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, attr, arr)

    def cells(self) -> Iterator[GridCell]:
        """Cells in fixed index order: TFR outer, e0 inner."""
        for i, tfr in enumerate(self.tfr_values):
            for j, e0 in enumerate(self.e0_values):
                yield GridCell(
                    tfr=float(tfr),
                    e0=float(e0),
                    cwr=float(self.cwr[i, j]),
                    growth=float(self.growth[i, j]),
                    residual=float(self.residual[i, j]),
                )

    def value_range(self, field_name: str) -> tuple[float, float]:
        values = getattr(self, field_name)
        return float(values.min()), float(values.max())

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["tfr", "e0", "cwr", "growth_per_year", "residual"])
            for cell in self.cells():
                writer.writerow(
                    [
                        f"{cell.tfr:g}",
                        f"{cell.e0:g}",
                        f"{cell.cwr:.6g}",
                        f"{cell.growth:.6g}",
                        f"{cell.residual:.6g}",
                    ]
                )

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "tfr_values": self.tfr_values.tolist(),
            "e0_values": self.e0_values.tolist(),
            "cwr": self.cwr.tolist(),
            "growth_per_year": self.growth.tolist(),
            "residual": self.residual.tolist(),
        }

    def write_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def from_json_dict(cls, d: dict) -> "GridSurface":
        return cls(
            spec=GridSpec.from_dict(d["spec"]),
            tfr_values=np.array(d["tfr_values"]),
            e0_values=np.array(d["e0_values"]),
            cwr=np.array(d["cwr"]),
            growth=np.array(d["growth_per_year"]),
            residual=np.array(d["residual"]),
        )

    @classmethod
    def read_json(cls, path: str | Path) -> "GridSurface":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def sweep(spec: GridSpec) -> GridSurface:
    """Evaluate the stable population at every grid cell, in index order."""
    family = data.load_family(spec.family)
    pattern = data.load_pattern(spec.pattern)
    srb = SexRatioAtBirth(spec.srb)
    tfr_values = spec.tfr_values()
    e0_values = spec.e0_values()
    shape = (len(tfr_values), len(e0_values))
    cwr = np.empty(shape)
    growth = np.empty(shape)
    residual = np.empty(shape)
    tables = {}
    for j, e0 in enumerate(e0_values):
        try:
            tables[j] = paired_tables(family, float(e0))
        except PaleodemogError as exc:
            raise type(exc)(f"cell column e0={e0:g}: {exc}") from exc
    for i, tfr in enumerate(tfr_values):
        for j, e0 in enumerate(e0_values):
            female, male = tables[j]
            try:
                schedule = scale_to_tfr(pattern, float(tfr))
                r = solve_lotka(schedule, female, srb)
                solution = stable_structure(schedule, female, male, srb, r)
            except PaleodemogError as exc:
                raise type(exc)(f"cell (tfr={tfr:g}, e0={e0:g}): {exc}") from exc
            cwr[i, j] = solution.child_woman_ratio
            growth[i, j] = r
            residual[i, j] = lotka_residual(r, schedule, female, srb)
    return GridSurface(
        spec=spec,
        tfr_values=tfr_values,
        e0_values=e0_values,
        cwr=cwr,
        growth=growth,
        residual=residual,
    )


@lru_cache(maxsize=32)
def sweep_cached(spec: GridSpec) -> GridSurface:
    """Memoized sweep; safe because specs and surfaces are immutable."""
    return sweep(spec)


@dataclass(frozen=True)
class FeasibleSet:
    """Exactly the grid cells whose (cwr, growth) fall inside the query ranges."""

    cells: tuple[GridCell, ...]
    cwr_range: tuple[float, float]
    growth_range: tuple[float, float] | None = None

    def tfr_span(self) -> tuple[float, float] | None:
        if not self.cells:
            return None
        values = [c.tfr for c in self.cells]
        return min(values), max(values)

    def e0_span(self) -> tuple[float, float] | None:
        if not self.cells:
            return None
        values = [c.e0 for c in self.cells]
        return min(values), max(values)

    def to_json_dict(self) -> dict:
        return {
            "query": {
                "cwr_range": list(self.cwr_range),
                "growth_range": list(self.growth_range) if self.growth_range else None,
            },
            "cells": [
                {
                    "tfr": c.tfr,
                    "e0": c.e0,
                    "cwr": c.cwr,
                    "growth_per_year": c.growth,
                }
                for c in self.cells
            ],
        }

    def write_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")


def _check_range(name: str, rng: tuple[float, float]) -> tuple[float, float]:
    lo, hi = float(rng[0]), float(rng[1])
    if lo > hi:
        raise DomainError(f"{name} range has lo > hi: [{lo}, {hi}]")
    return lo, hi


def invert(
    surface: GridSurface,
    cwr_range: tuple[float, float],
    growth_range: tuple[float, float] | None = None,
) -> FeasibleSet:
    """Select the cells inside the closed query intervals; empty is fine."""
    cwr_lo, cwr_hi = _check_range("cwr", cwr_range)
    g_range = _check_range("growth", growth_range) if growth_range is not None else None
    selected = []
    for cell in surface.cells():
        if not (cwr_lo <= cell.cwr <= cwr_hi):
            continue
        if g_range is not None and not (g_range[0] <= cell.growth <= g_range[1]):
            continue
        selected.append(cell)
    return FeasibleSet(
        cells=tuple(selected),
        cwr_range=(cwr_lo, cwr_hi),
        growth_range=g_range,
    )


@dataclass(frozen=True)
class ContourLine:
    level: float
    points: tuple[tuple[float, float], ...]  # (tfr, e0) vertices


def _edge_point(xa, ya, va, xb, yb, vb, level):
    t = (level - va) / (vb - va)
    return (xa + t * (xb - xa), ya + t * (yb - ya))


def _cell_segments(x0, x1, y0, y1, v00, v10, v11, v01, level):
    """Marching-squares segments for one grid cell.

    Corners: v00=(x0,y0), v10=(x1,y0), v11=(x1,y1), v01=(x0,y1).
    A constant cell equal to the level yields no segments (documented
    degenerate case: contouring a flat surface returns nothing).
    """
    above = (
        (v00 >= level),
        (v10 >= level),
        (v11 >= level),
        (v01 >= level),
    )
    case = above[0] + 2 * above[1] + 4 * above[2] + 8 * above[3]
    if case in (0, 15):
        return []
    bottom = _edge_point(x0, y0, v00, x1, y0, v10, level) if above[0] != above[1] else None
    right = _edge_point(x1, y0, v10, x1, y1, v11, level) if above[1] != above[2] else None
    top = _edge_point(x1, y1, v11, x0, y1, v01, level) if above[2] != above[3] else None
    left = _edge_point(x0, y1, v01, x0, y0, v00, level) if above[3] != above[0] else None
    pairs = {
        1: [(left, bottom)],
        2: [(bottom, right)],
        3: [(left, right)],
        4: [(right, top)],
        6: [(bottom, top)],
        7: [(left, top)],
        8: [(top, left)],
        9: [(top, bottom)],
        11: [(top, right)],
        12: [(right, left)],
        13: [(right, bottom)],
        14: [(bottom, left)],
    }
    if case in (5, 10):
        center_above = (v00 + v10 + v11 + v01) / 4.0 >= level
        if case == 5:
            segs = [(left, top), (bottom, right)] if center_above else [(left, bottom), (right, top)]
        else:
            segs = [(bottom, left), (right, top)] if not center_above else [(bottom, right), (top, left)]
        return segs
    return pairs[case]


def _chain_segments(segments):
    """Stitch segments that share endpoints into polylines."""

    def key(p):
        return (round(p[0], 9), round(p[1], 9))

    adjacency: dict = {}
    seg_used = [False] * len(segments)
    for idx, (a, b) in enumerate(segments):
        adjacency.setdefault(key(a), []).append((idx, a, b))
        adjacency.setdefault(key(b), []).append((idx, b, a))
    polylines = []
    for idx in range(len(segments)):
        if seg_used[idx]:
            continue
        a, b = segments[idx]
        seg_used[idx] = True
        line = [a, b]
        for endpoint, extend in ((b, "tail"), (a, "head")):
            current = endpoint
            while True:
                options = [
                    (i, far)
                    for (i, near, far) in adjacency.get(key(current), [])
                    if not seg_used[i]
                ]
                if not options:
                    break
                i, far = options[0]
                seg_used[i] = True
                if extend == "tail":
                    line.append(far)
                else:
                    line.insert(0, far)
                current = far
        polylines.append(tuple(line))
    return polylines


def contour_export(
    surface: GridSurface, levels: Sequence[float], field_name: str = "cwr"
) -> tuple[ContourLine, ...]:
    """Marching-squares polylines in (TFR, e0) coordinates, one set per level.

    Levels outside the surface's value range are skipped with a warning.
    """
    if field_name not in ("cwr", "growth"):
        raise DomainError("contour field must be 'cwr' or 'growth'")
    values = getattr(surface, field_name)
    xs = surface.tfr_values
    ys = surface.e0_values
    vmin, vmax = surface.value_range(field_name)
    lines: list[ContourLine] = []
    for level in levels:
        level = float(level)
        if level < vmin or level > vmax:
            log.warning(
                "contour level %g outside surface range [%g, %g]; skipped",
                level,
                vmin,
                vmax,
            )
            continue
        segments = []
        for i in range(len(xs) - 1):
            for j in range(len(ys) - 1):
                segs = _cell_segments(
                    xs[i],
                    xs[i + 1],
                    ys[j],
                    ys[j + 1],
                    values[i, j],
                    values[i + 1, j],
                    values[i + 1, j + 1],
                    values[i, j + 1],
                    level,
                )
                for a, b in segs:
                    if a is not None and b is not None and a != b:
                        segments.append((a, b))
        for line in _chain_segments(segments):
            lines.append(ContourLine(level=level, points=tuple(line)))
    return tuple(lines)


def write_contours_json(lines: Sequence[ContourLine], path: str | Path) -> None:
    payload = [
        {"level": line.level, "points": [[p[0], p[1]] for p in line.points]}
        for line in lines
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def contour_e0_at_tfr(lines: Sequence[ContourLine], tfr: float) -> list[float]:
    """e0 values where contour polylines cross a vertical TFR line.

    Crossings landing exactly on a shared vertex are reported once.
    """
    crossings: list[float] = []
    for line in lines:
        pts = line.points
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if (x0 - tfr) * (x1 - tfr) <= 0.0 and x0 != x1:
                t = (tfr - x0) / (x1 - x0)
                if 0.0 <= t <= 1.0:
                    crossings.append(y0 + t * (y1 - y0))
    crossings.sort()
    deduped: list[float] = []
    for value in crossings:
        if not deduped or abs(value - deduped[-1]) > 1e-7:
            deduped.append(value)
    return deduped
