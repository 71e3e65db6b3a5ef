"""render_figures: draw the figures from pre-generated artifacts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .jobs import FIGURE_IDS, FigureJob, render


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"{flag} expects lo:hi, got {text!r}")
    return (float(parts[0]), float(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render figures from paleodemog artifacts (never recomputes)",
    )
    parser.add_argument("--artifacts", required=True, help="artifacts directory")
    parser.add_argument("--out", required=True, help="output directory for images")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--all", action="store_true", help="render every figure")
    group.add_argument("--figure", choices=FIGURE_IDS, help="render one figure")
    parser.add_argument(
        "--cwr", type=lambda t: _parse_pair(t, "--cwr"), default=None,
        help="highlight range for the CWR criterion (fig3)",
    )
    parser.add_argument(
        "--growth", type=lambda t: _parse_pair(t, "--growth"), default=None,
        help="highlight range for the growth criterion (fig3)",
    )
    parser.add_argument(
        "--bold", default=None,
        help="cell to print in bold as tfr:e0 (fig2)",
    )
    return parser


def run(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    for i, token in enumerate(argv):
        if token == "--growth" and i + 1 < len(argv) and argv[i + 1][:1] == "-":
            argv[i : i + 2] = [f"--growth={argv[i + 1]}"]
            break
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    bold = None
    if args.bold:
        parts = args.bold.split(":")
        bold = (float(parts[0]), float(parts[1]))
    figure_ids = FIGURE_IDS if args.all else (args.figure,)
    status = 0
    for figure_id in figure_ids:
        kwargs = {}
        if figure_id in ("fig3",):
            kwargs = {"cwr_range": args.cwr, "growth_range": args.growth}
        elif figure_id == "fig2":
            kwargs = {"bold_cell": bold}
        try:
            job = FigureJob.for_figure(figure_id, args.artifacts, out_dir, **kwargs)
            path = render(job)
            print(f"wrote {path}")
        except (FileNotFoundError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 1
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
