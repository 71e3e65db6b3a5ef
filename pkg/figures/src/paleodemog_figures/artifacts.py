"""Readers for the artifact files the figure jobs consume.

Every reader validates the artifact's schema up front and names the
expected columns in its error, so a job pointed at the wrong file fails
with a useful diagnostic instead of a plotting exception.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path


class SchemaError(ValueError):
    """An artifact file does not match the schema its figure expects."""


def _read_csv(path: Path, expected_header: list[str]) -> list[dict[str, str]]:
    if not path.exists():
        raise FileNotFoundError(f"artifact not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [r for r in reader if r and not r[0].lstrip().startswith("#")]
    if not rows or [c.strip() for c in rows[0]] != expected_header:
        raise SchemaError(
            f"{path}: expected columns {expected_header}, "
            f"got {rows[0] if rows else 'an empty file'}"
        )
    return [dict(zip(expected_header, row)) for row in rows[1:]]


@dataclass(frozen=True)
class Surface:
    """A (tfr, e0) grid with cwr and growth values, from a sweep CSV."""

    tfr_values: tuple[float, ...]
    e0_values: tuple[float, ...]
    cwr: dict[tuple[float, float], float]
    growth: dict[tuple[float, float], float]


def read_surface_csv(path: str | Path) -> Surface:
    rows = _read_csv(Path(path), ["tfr", "e0", "cwr", "growth_per_year", "residual"])
    cwr = {}
    growth = {}
    for row in rows:
        key = (float(row["tfr"]), float(row["e0"]))
        cwr[key] = float(row["cwr"])
        growth[key] = float(row["growth_per_year"])
    tfr_values = tuple(sorted({k[0] for k in cwr}))
    e0_values = tuple(sorted({k[1] for k in cwr}))
    return Surface(tfr_values=tfr_values, e0_values=e0_values, cwr=cwr, growth=growth)


def read_trajectory_csv(path: str | Path) -> list[dict[str, float | None]]:
    rows = _read_csv(Path(path), ["time", "cwr", "growth_per_year", "total_population"])
    out = []
    for row in rows:
        out.append(
            {
                "time": float(row["time"]),
                "cwr": float(row["cwr"]),
                "growth_per_year": float(row["growth_per_year"]) if row["growth_per_year"] else None,
                "total_population": float(row["total_population"]),
            }
        )
    return out


def read_aligned_csv(path: str | Path) -> list[dict[str, float]]:
    rows = _read_csv(Path(path), ["midpoint", "cwr", "growth_per_year", "year_from", "year_to"])
    return [{k: float(v) for k, v in row.items()} for row in rows]


def read_survival_csv(path: str | Path) -> dict[float, list[tuple[float, float]]]:
    """Group lower bound -> [(e0, probability), ...] sorted by e0."""
    rows = _read_csv(Path(path), ["e0", "age_lower", "survival_probability"])
    by_group: dict[float, list[tuple[float, float]]] = {}
    for row in rows:
        by_group.setdefault(float(row["age_lower"]), []).append(
            (float(row["e0"]), float(row["survival_probability"]))
        )
    for series in by_group.values():
        series.sort()
    return by_group


def _load_json(path: Path):
    if not path.exists():
        raise FileNotFoundError(f"artifact not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_contours_json(path: str | Path) -> list[dict]:
    payload = _load_json(Path(path))
    if not isinstance(payload, list) or any(
        set(entry) != {"level", "points"} for entry in payload
    ):
        raise SchemaError(
            f"{path}: expected a JSON list of {{level, points}} polylines"
        )
    return payload


def read_feasible_json(path: str | Path) -> list[dict]:
    """Feasible-set entries; both the bare and the per-period list forms."""
    payload = _load_json(Path(path))
    entries = payload if isinstance(payload, list) else [payload]
    for entry in entries:
        if "query" not in entry or "cells" not in entry:
            raise SchemaError(
                f"{path}: expected feasible-set objects with 'query' and 'cells'"
            )
    return entries
