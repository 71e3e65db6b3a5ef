"""Produce every machine-readable artifact the figure scripts consume.

Runs the CLI subcommands end to end and drops their outputs into an
artifacts directory (default ./artifacts).  The figure renderer in
figures/ reads these files only; it never recomputes demography.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from paleodemog import data
from paleodemog.cli import run

COMBOS = [
    ("west", "booth"),
    ("south", "booth"),
    ("west", "maori1962"),
    ("south", "maori1962"),
]
CWR_LEVELS = "0.6,0.8,1.0,1.2,1.4,1.6"
GROWTH_LEVELS = "-0.02,-0.01,0.0,0.01,0.02,0.03"

SCENARIOS = {
    "fert_single": {
        "initial": {"tfr": 5.0, "e0": 30.0},
        "changes": [{"time": 0.0, "tfr": 5.25, "e0": 30.0}],
    },
    "fert_staircase": {
        "initial": {"tfr": 5.0, "e0": 30.0},
        "changes": [
            {"time": 5.0 * k, "tfr": 5.0 + 0.25 * (k + 1), "e0": 30.0}
            for k in range(5)
        ],
    },
    "mort_single": {
        "initial": {"tfr": 5.0, "e0": 30.0},
        "changes": [{"time": 0.0, "tfr": 5.0, "e0": 32.5}],
    },
    "mort_staircase": {
        "initial": {"tfr": 5.0, "e0": 30.0},
        "changes": [
            {"time": 5.0 * k, "tfr": 5.0, "e0": 30.0 + 2.5 * (k + 1)}
            for k in range(5)
        ],
    },
}


def check(code: int, what: str) -> None:
    if code != 0:
        raise SystemExit(f"artifact step failed ({what}, exit {code})")


def project_scenario(name: str, spec: dict, out_dir: Path) -> None:
    """Project a step scenario seeded at its pre-change stable state."""
    from paleodemog.projection import (
        RateChange,
        ScenarioSchedule,
        project,
        stable_seed,
        write_trajectory_csv,
    )
    from paleodemog.stable import SexRatioAtBirth

    family = data.load_family("west")
    pattern = data.load_pattern("booth")
    srb = SexRatioAtBirth()
    initial = spec["initial"]
    schedule = ScenarioSchedule(
        changes=tuple(
            RateChange(time=c["time"], tfr=c["tfr"], e0=c["e0"])
            for c in spec["changes"]
        ),
        horizon=150.0,
    )
    seed = stable_seed(initial["tfr"], initial["e0"], family, pattern, srb, 100_000.0)
    points = project(seed, schedule, family, pattern, srb)
    write_trajectory_csv(points, out_dir / f"trajectory_{name}.csv")
    (out_dir / f"scenario_{name}.json").write_text(
        json.dumps(schedule.to_json_dict(), indent=2) + "\n"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="artifacts", help="artifacts directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for family, pattern in COMBOS:
        tag = f"{family}_{pattern}"
        surface_json = out / f"surface_{tag}.json"
        check(
            run(["sweep", "--family", family, "--fertility-pattern", pattern,
                 "--format", "json", "--out", str(surface_json)]),
            f"sweep {tag}",
        )
        check(
            run(["sweep", "--family", family, "--fertility-pattern", pattern,
                 "--out", str(out / f"surface_{tag}.csv")]),
            f"sweep csv {tag}",
        )
        check(
            run(["contours", "--surface", str(surface_json), "--levels", CWR_LEVELS,
                 "--field", "cwr", "--out", str(out / f"contours_cwr_{tag}.json")]),
            f"contours cwr {tag}",
        )
        check(
            run(["contours", "--surface", str(surface_json), "--levels", GROWTH_LEVELS,
                 "--field", "growth", "--out", str(out / f"contours_growth_{tag}.json")]),
            f"contours growth {tag}",
        )

    check(
        run(["invert", "--surface", str(out / "surface_west_booth.json"),
             "--cwr", "0.95:1.05", "--growth", "-0.004:-0.002",
             "--out", str(out / "feasible_joint.json")]),
        "invert joint",
    )

    for name, spec in SCENARIOS.items():
        project_scenario(name, spec, out)

    check(
        run(["census", "--in", str(data.census_sample_path()),
             "--out", str(out / "aligned_observations.csv"), "--infer",
             "--infer-out", str(out / "feasible_case_study.json")]),
        "census",
    )

    check(
        run(["survival", "--e0-list", ",".join(str(20.0 + 2.5 * k) for k in range(13)),
             "--groups", "0,5,20,60", "--out", str(out / "survival_increments.csv")]),
        "survival",
    )

    print(f"artifacts written to {out}/")


if __name__ == "__main__":
    main()
