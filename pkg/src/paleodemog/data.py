"""Loaders for the bundled data files (model life tables, fertility patterns).

The data directory can be overridden with the ``PALEODEMOG_DATA``
environment variable; files keep the same names and schemas either way.
"""

from __future__ import annotations

import csv
import hashlib
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .ages import AgeGrid
from .errors import DataFormatError, DomainError
from .fertility import REPRODUCTIVE_AGES, FertilityPattern
from .lifetable import SEXES, LifeTable, MortalityFamily

FAMILY_NAMES = ("west", "south")
PATTERN_FILES = {"booth": "booth_standard.csv", "maori1962": "maori_1962.csv"}
CENSUS_SAMPLE_FILE = "nz_maori_censuses.csv"


def data_dir() -> Path:
    override = os.environ.get("PALEODEMOG_DATA")
    if override:
        return Path(override)
    return Path(str(resources.files("paleodemog").joinpath("data")))


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.exists():
        raise DataFormatError(f"data file not found: {path}")
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for record in csv.reader(fh):
            if not record or not any(field.strip() for field in record):
                continue
            if record[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [field.strip() for field in record]
            else:
                rows.append([field.strip() for field in record])
    if header is None:
        raise DataFormatError(f"{path}: no header row")
    return header, rows


def load_life_table_levels(path: Path, sex: str) -> tuple[LifeTable, ...]:
    """Read one family+sex CSV (columns level_e0, age_lower, lx, nLx)."""
    header, rows = _read_rows(path)
    expected = ["level_e0", "age_lower", "lx", "nLx"]
    if header != expected:
        raise DataFormatError(f"{path}: expected header {expected}, got {header}")
    by_level: dict[float, list[tuple[float, float, float]]] = {}
    order: list[float] = []
    for row in rows:
        level, age, lx, nLx = (float(v) for v in row)
        if level not in by_level:
            by_level[level] = []
            order.append(level)
        by_level[level].append((age, lx, nLx))
    tables = []
    for level in order:
        cells = by_level[level]
        ages = tuple(age for age, _, _ in cells)
        grid = AgeGrid(lower_bounds=ages)
        lx = np.array([l for _, l, _ in cells])
        nLx = np.array([n for _, _, n in cells])
        table = LifeTable(sex=sex, grid=grid, lx=lx, nLx=nLx, e0=level)
        tables.append(table)
    return tuple(tables)


@lru_cache(maxsize=None)
def load_family(name_or_dir: str) -> MortalityFamily:
    """Load a mortality family by name ('west', 'south') or directory path.

    A directory must contain ``female.csv`` and ``male.csv`` in the family
    schema; its basename becomes the family name.
    """
    if name_or_dir in FAMILY_NAMES:
        base = data_dir()
        paths = {sex: base / f"{name_or_dir}_{sex}.csv" for sex in SEXES}
        name = name_or_dir
    else:
        directory = Path(name_or_dir)
        if not directory.is_dir():
            raise DomainError(
                f"unknown family {name_or_dir!r}: not one of {FAMILY_NAMES} "
                "and not a directory with female.csv/male.csv"
            )
        paths = {sex: directory / f"{sex}.csv" for sex in SEXES}
        name = directory.name
    tables = {sex: load_life_table_levels(path, sex) for sex, path in paths.items()}
    return MortalityFamily(name=name, tables=tables)


@lru_cache(maxsize=None)
def load_pattern(name_or_path: str) -> FertilityPattern:
    """Load a fertility pattern by name ('booth', 'maori1962') or CSV path."""
    if name_or_path in PATTERN_FILES:
        path = data_dir() / PATTERN_FILES[name_or_path]
        name = name_or_path
    else:
        path = Path(name_or_path)
        name = path.stem
    header, rows = _read_rows(path)
    if header != ["age_lower", "proportion"]:
        raise DataFormatError(f"{path}: expected header [age_lower, proportion]")
    ages = tuple(float(r[0]) for r in rows)
    if ages != REPRODUCTIVE_AGES:
        raise DataFormatError(
            f"{path}: pattern ages must be exactly {REPRODUCTIVE_AGES}, got {ages}"
        )
    values = [float(r[1]) for r in rows]
    return FertilityPattern.from_values(name, values)


def census_sample_path() -> Path:
    return data_dir() / CENSUS_SAMPLE_FILE


def data_provenance() -> dict[str, str]:
    """sha256 of every bundled data file, for --version output."""
    out = {}
    for path in sorted(data_dir().glob("*.csv")):
        out[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
    return out
