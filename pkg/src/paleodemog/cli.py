"""Command-line interface tying the pipeline together.

Subcommands: sweep, invert, contours, project, census, survival.  Range
flags use `min:max:step` for grids and `lo:hi` for inversion ranges.  All
outputs are deterministic; CSV numbers carry 6 significant digits, JSON
full precision.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import __version__, data
from .census import (
    DEFAULT_CWR_HALFWIDTH,
    DEFAULT_GROWTH_HALFWIDTH,
    align,
    infer,
    read_census_csv,
    write_aligned_csv,
)
from .errors import PaleodemogError
from .grids import (
    GridSpec,
    GridSurface,
    contour_export,
    invert,
    sweep,
    write_contours_json,
)
from .lifetable import FEMALE, survival_increments
from .projection import ScenarioSchedule, project, stable_seed, write_trajectory_csv
from .stable import SexRatioAtBirth


def _parse_triple(text: str, flag: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"{flag} expects min:max:step, got {text!r}")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{flag} has a non-numeric part in {text!r}")


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"{flag} expects lo:hi, got {text!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{flag} has a non-numeric part in {text!r}")


def _parse_floats(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--tfr", type=lambda t: _parse_triple(t, "--tfr"), default=None,
        help="TFR axis as min:max:step (default 2:9:0.2)",
    )
    parser.add_argument(
        "--e0", type=lambda t: _parse_triple(t, "--e0"), default=None,
        help="life expectancy axis as min:max:step (default 10:50:2.5)",
    )
    parser.add_argument("--family", default="west", help="mortality family: west, south, or a directory")
    parser.add_argument(
        "--fertility-pattern", default="booth", dest="pattern",
        help="fertility pattern: booth, maori1962, or a CSV path",
    )
    parser.add_argument("--srb", type=float, default=105.0, help="male births per 100 female births")


def _spec_from_args(args: argparse.Namespace) -> GridSpec:
    kwargs = {"family": args.family, "pattern": args.pattern, "srb": args.srb}
    if args.tfr is not None:
        kwargs.update(tfr_min=args.tfr[0], tfr_max=args.tfr[1], tfr_step=args.tfr[2])
    if args.e0 is not None:
        kwargs.update(e0_min=args.e0[0], e0_max=args.e0[1], e0_step=args.e0[2])
    return GridSpec(**kwargs)


def _write_surface(surface: GridSurface, out: Path, fmt: str) -> None:
    if fmt == "json":
        surface.write_json(out)
    else:
        surface.write_csv(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paleodemog",
        description="Child-woman ratios, stable population grids, and inversion",
    )
    parser.add_argument("--version", action="store_true", help="print version and data provenance")
    sub = parser.add_subparsers(dest="command")

    p_sweep = sub.add_parser("sweep", help="evaluate a (TFR, e0) grid surface")
    _add_grid_flags(p_sweep)
    p_sweep.add_argument("--out", required=True, help="output path")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    p_invert = sub.add_parser("invert", help="find grid cells inside observed ranges")
    _add_grid_flags(p_invert)
    p_invert.add_argument("--surface", help="surface JSON from a previous sweep")
    p_invert.add_argument(
        "--cwr", type=lambda t: _parse_pair(t, "--cwr"), required=True, help="CWR range lo:hi"
    )
    p_invert.add_argument(
        "--growth", type=lambda t: _parse_pair(t, "--growth"), default=None,
        help="growth range lo:hi (per year)",
    )
    p_invert.add_argument("--out", required=True)

    p_cont = sub.add_parser("contours", help="extract contour polylines from a surface")
    _add_grid_flags(p_cont)
    p_cont.add_argument("--surface", help="surface JSON from a previous sweep")
    p_cont.add_argument("--levels", type=_parse_floats, required=True, help="comma-separated levels")
    p_cont.add_argument("--field", choices=("cwr", "growth"), default="cwr")
    p_cont.add_argument("--out", required=True)

    p_proj = sub.add_parser("project", help="cohort-component projection of a scenario")
    p_proj.add_argument("--scenario", required=True, help="scenario schedule JSON")
    p_proj.add_argument("--family", default="west")
    p_proj.add_argument("--fertility-pattern", default="booth", dest="pattern")
    p_proj.add_argument("--srb", type=float, default=105.0)
    p_proj.add_argument("--initial-total", type=float, default=100_000.0)
    p_proj.add_argument("--out", required=True)

    p_census = sub.add_parser("census", help="align census counts; optionally infer rates")
    p_census.add_argument("--in", dest="infile", required=True, help="census counts CSV")
    p_census.add_argument("--out", required=True, help="aligned observations CSV")
    p_census.add_argument("--infer", action="store_true", help="also invert each observation")
    p_census.add_argument("--infer-out", help="feasible sets JSON (default: <out>.feasible.json)")
    p_census.add_argument("--halfwidth-cwr", type=float, default=DEFAULT_CWR_HALFWIDTH)
    p_census.add_argument("--halfwidth-growth", type=float, default=DEFAULT_GROWTH_HALFWIDTH)
    _add_grid_flags(p_census)

    p_surv = sub.add_parser("survival", help="within-group survival probabilities by e0")
    p_surv.add_argument("--family", default="west")
    p_surv.add_argument("--sex", choices=("female", "male"), default=FEMALE)
    p_surv.add_argument(
        "--e0-list", type=_parse_floats, default=None,
        help="comma-separated e0 values (default 20,22.5,...,50)",
    )
    p_surv.add_argument(
        "--groups", type=_parse_floats, default=[0.0, 5.0, 20.0, 60.0],
        help="comma-separated group lower bounds",
    )
    p_surv.add_argument("--out", required=True)

    return parser


def _cmd_sweep(args) -> int:
    surface = sweep(_spec_from_args(args))
    _write_surface(surface, Path(args.out), args.format)
    return 0


def _load_or_sweep_surface(args) -> GridSurface:
    if args.surface:
        return GridSurface.read_json(args.surface)
    return sweep(_spec_from_args(args))


def _cmd_invert(args) -> int:
    surface = _load_or_sweep_surface(args)
    feasible = invert(surface, cwr_range=args.cwr, growth_range=args.growth)
    feasible.write_json(args.out)
    return 0


def _cmd_contours(args) -> int:
    surface = _load_or_sweep_surface(args)
    lines = contour_export(surface, args.levels, field_name=args.field)
    write_contours_json(lines, args.out)
    return 0


def _cmd_project(args) -> int:
    schedule = ScenarioSchedule.read_json(args.scenario)
    family = data.load_family(args.family)
    pattern = data.load_pattern(args.pattern)
    srb = SexRatioAtBirth(args.srb)
    first = schedule.changes[0]
    initial = stable_seed(first.tfr, first.e0, family, pattern, srb, args.initial_total)
    points = project(initial, schedule, family, pattern, srb)
    write_trajectory_csv(points, args.out)
    return 0


def _cmd_census(args) -> int:
    series = read_census_csv(args.infile)
    observations = align(series)
    write_aligned_csv(observations, args.out)
    if args.infer:
        spec = _spec_from_args(args)
        payload = []
        for obs in observations:
            feasible = infer(
                obs,
                cwr_halfwidth=args.halfwidth_cwr,
                growth_halfwidth=args.halfwidth_growth,
                spec=spec,
            )
            entry = feasible.to_json_dict()
            entry["midpoint"] = obs.midpoint
            entry["observed"] = {"cwr": obs.cwr, "growth_per_year": obs.growth}
            entry["source_years"] = list(obs.source_years)
            payload.append(entry)
        import json

        infer_out = args.infer_out or f"{args.out}.feasible.json"
        with open(infer_out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_survival(args) -> int:
    family = data.load_family(args.family)
    e0_list = args.e0_list
    if e0_list is None:
        e0_list = [20.0 + 2.5 * k for k in range(13)]
    result = survival_increments(family, args.sex, e0_list, args.groups)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["e0", "age_lower", "survival_probability"])
        for i, e0 in enumerate(result.e0_values):
            for j, group in enumerate(result.group_lower):
                writer.writerow(
                    [f"{e0:g}", f"{group:g}", f"{result.probabilities[i, j]:.6g}"]
                )
    return 0


_HANDLERS = {
    "sweep": _cmd_sweep,
    "invert": _cmd_invert,
    "contours": _cmd_contours,
    "project": _cmd_project,
    "census": _cmd_census,
    "survival": _cmd_survival,
}


_RANGE_FLAGS = ("--growth", "--cwr", "--tfr", "--e0", "--e0-list", "--levels")


def _join_negative_ranges(argv: list[str]) -> list[str]:
    """Fold `--growth -0.004:-0.002` into `--growth=-0.004:-0.002`.

    argparse would otherwise read the leading minus as a new option.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _RANGE_FLAGS and i + 1 < len(argv):
            nxt = argv[i + 1]
            if len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{token}={nxt}")
                i += 2
                continue
        out.append(token)
        i += 1
    return out


def run(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(_join_negative_ranges(list(argv)))
    if args.version:
        print(f"paleodemog {__version__}")
        for name, digest in data.data_provenance().items():
            print(f"data {name} sha256={digest[:12]}")
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](args)
    except PaleodemogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
