"""Print the anchor diagnostics used when calibrating the bundled data.

Run after scripts/build_model_tables.py to see where the key cells and
sensitivity checks land relative to their documented tolerance bands.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from paleodemog import data as pdata
from paleodemog.fertility import scale_to_tfr
from paleodemog.grids import GridSpec, contour_e0_at_tfr, contour_export, invert, sweep
from paleodemog.lifetable import paired_tables
from paleodemog.stable import SexRatioAtBirth, solve_stable

SRB = SexRatioAtBirth()


def cell(family, pattern, tfr, e0):
    f, m = paired_tables(family, e0)
    sol = solve_stable(scale_to_tfr(pattern, tfr), f, m, SRB)
    return sol.child_woman_ratio, sol.growth_rate


def main() -> None:
    pdata.load_family.cache_clear()
    pdata.load_pattern.cache_clear()
    west = pdata.load_family("west")
    south = pdata.load_family("south")
    booth = pdata.load_pattern("booth")
    maori = pdata.load_pattern("maori1962")

    c, r = cell(west, booth, 5.0, 27.5)
    print(f"anchor (5.0, 27.5):    cwr={c:.4f} [want 1.00 +-0.03]   r={r:+.5f} [want +0.0021 +-0.0010]")
    for tfr in (5.8, 6.0):
        c, r = cell(west, booth, tfr, 20.0)
        print(f"joint  ({tfr}, 20.0):    cwr={c:.4f} [want 0.95..1.05]   r={r:+.5f} [want -0.0040..-0.0020]")
    for tfr, e0 in (
        (5.6, 20.0), (6.2, 20.0), (5.8, 22.5), (6.0, 17.5), (5.6, 22.5),
        (6.2, 17.5), (5.4, 22.5), (5.2, 25.0), (6.4, 17.5), (6.6, 15.0),
    ):
        c, r = cell(west, booth, tfr, e0)
        ok = 0.95 <= c <= 1.05 and -0.004 <= r <= -0.002
        print(f"  excl ({tfr}, {e0}):  cwr={c:.4f}  r={r:+.5f}  joint-feasible={ok} [want False]")
    for tfr, e0 in ((7.0, 12.5), (7.5, 12.5), (8.0, 12.5), (7.5, 10.0), (7.0, 15.0), (7.5, 15.0), (6.5, 15.0)):
        c, r = cell(west, booth, tfr, e0)
        print(f"  low-e0 ({tfr}, {e0}):  cwr={c:.4f}  r={r:+.5f}  [1874-78 wants cwr~1.10, r~-0.010 around TFR 7-8, e0 10-15]")
    c, r = cell(west, booth, 6.2, 27.5)
    print(f"  case-late (6.2, 27.5): cwr={c:.4f} r={r:+.5f} [1896-1901 wants cwr~1.25, r~+0.010 at TFR 6-7, e0 25-29]")
    c, r = cell(west, booth, 9.0, 50.0)
    cm, rm = cell(west, maori, 9.0, 50.0)
    print(f"  corner (9, 50): booth cwr={c:.4f} r={r:+.5f}; maori d_cwr={cm - c:+.4f} d_r={rm - r:+.5f}")
    print(f"  pattern means: booth={booth.mean_age():.3f} maori={maori.mean_age():.3f}")

    # South offset: e0 giving CWR=1.00 at TFR 5 under each family.
    def e0_for_cwr_one(family):
        lo, hi = 15.0, 45.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            c, _ = cell(family, booth, 5.0, mid)
            if c < 1.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    west_e0 = e0_for_cwr_one(west)
    south_e0 = e0_for_cwr_one(south)
    print(f"south offset at TFR 5: west e0={west_e0:.2f}, south e0={south_e0:.2f}, "
          f"offset={south_e0 - west_e0:+.2f} [want +0.5..+3.0]")

    print("sweeping default west/booth grid...")
    surf_wb = sweep(GridSpec())
    print(f"  residual max = {np.abs(surf_wb.residual).max():.2e} [want < 1e-10]")
    print(f"  cwr increasing in tfr everywhere: {bool(np.all(np.diff(surf_wb.cwr, axis=0) > 0))}")
    print(f"  cwr non-decreasing in e0 everywhere: {bool(np.all(np.diff(surf_wb.cwr, axis=1) >= 0))}"
          f" (min step {np.diff(surf_wb.cwr, axis=1).min():+.5f})")
    print(f"  r increasing in tfr everywhere: {bool(np.all(np.diff(surf_wb.growth, axis=0) > 0))}")
    print(f"  r increasing in e0 everywhere: {bool(np.all(np.diff(surf_wb.growth, axis=1) > 0))}")
    band = invert(surf_wb, (0.95, 1.05))
    cells_35 = [c for c in band.cells if abs(c.e0 - 35.0) <= 2.5 and 4.0 <= c.tfr <= 5.0]
    cells_15 = [c for c in band.cells if abs(c.e0 - 15.0) <= 2.5 and 6.0 <= c.tfr <= 7.0]
    print(f"  cwr-band cells near (4-5, 35): {len(cells_35)}  near (6-7, 15): {len(cells_15)} [want >0, >0]")
    joint = invert(surf_wb, (0.95, 1.05), (-0.004, -0.002))
    print(f"  joint feasible set: {[(c.tfr, c.e0) for c in joint.cells]} [want (5.8,20) and (6.0,20) only-ish]")

    print("pattern insensitivity over default grid...")
    surf_wm = sweep(GridSpec(pattern="maori1962"))
    dcwr = np.abs(surf_wb.cwr - surf_wm.cwr).max()
    dg = np.abs(surf_wb.growth - surf_wm.growth).max()
    print(f"  max |d cwr| = {dcwr:.4f} [want < 0.03]   max |d growth| = {dg:.5f} [want < 0.001]")

    print("contour offset at TFR 5, level 1.00...")
    surf_sb = sweep(GridSpec(family="south"))
    lines_w = contour_export(surf_wb, [1.0])
    lines_s = contour_export(surf_sb, [1.0])
    cross_w = contour_e0_at_tfr(lines_w, 5.0)
    cross_s = contour_e0_at_tfr(lines_s, 5.0)
    print(f"  west crossings {cross_w}  south crossings {cross_s}")

    print("case study...")
    from paleodemog.census import align, infer, read_census_csv

    series = read_census_csv(pdata.census_sample_path())
    obs = align(series)
    for o in obs:
        print(f"  {o.source_years}: midpoint={o.midpoint:g} cwr={o.cwr:.4f} growth={o.growth:+.5f}")
    first, last = obs[0], obs[-1]
    fs1 = infer(first)
    fs2 = infer(last)
    print(f"  1874-78 feasible: {[(c.tfr, c.e0) for c in fs1.cells]}")
    print(f"    [want TFR span intersecting [7,8], e0 span intersecting [10,15]]")
    print(f"  1896-1901 feasible: {[(c.tfr, c.e0) for c in fs2.cells]}")
    print(f"    [want TFR span intersecting [6,7], e0 span intersecting [25,29]]")


if __name__ == "__main__":
    main()
