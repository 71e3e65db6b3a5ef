import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paleodemog.errors import DomainError
from paleodemog.fertility import scale_to_tfr
from paleodemog.grids import (
    GridSpec,
    GridSurface,
    contour_e0_at_tfr,
    contour_export,
    invert,
    sweep,
    write_contours_json,
)
from paleodemog.lifetable import paired_tables
from paleodemog.stable import SexRatioAtBirth, solve_stable


class TestGridSpec:
    def test_default_axes(self):
        spec = GridSpec()
        tfr = spec.tfr_values()
        e0 = spec.e0_values()
        assert tfr[0] == 2.0 and tfr[-1] == 9.0 and len(tfr) == 36
        assert e0[0] == 10.0 and e0[-1] == 50.0 and len(e0) == 17

    def test_cell_cap_enforced(self):
        with pytest.raises(DomainError):
            GridSpec(tfr_step=0.001, e0_step=0.01)

    def test_nonpositive_step_rejected(self):
        with pytest.raises(DomainError):
            GridSpec(tfr_step=0.0)

    def test_degenerate_single_cell(self):
        spec = GridSpec(tfr_min=5.0, tfr_max=5.0, e0_min=27.5, e0_max=27.5)
        assert len(spec.tfr_values()) == 1
        assert len(spec.e0_values()) == 1


class TestSweep:
    def test_single_cell_matches_direct_call(self, west, booth):
        spec = GridSpec(tfr_min=5.0, tfr_max=5.0, e0_min=27.5, e0_max=27.5)
        surface = sweep(spec)
        female, male = paired_tables(west, 27.5)
        sol = solve_stable(scale_to_tfr(booth, 5.0), female, male, SexRatioAtBirth())
        assert surface.cwr[0, 0] == pytest.approx(sol.child_woman_ratio, rel=1e-12)
        assert surface.growth[0, 0] == pytest.approx(sol.growth_rate, abs=1e-12)

    def test_residuals_below_tolerance(self, default_surface):
        assert np.abs(default_surface.residual).max() < 1e-10

    def test_sweep_is_referentially_transparent(self):
        spec = GridSpec(tfr_min=4.0, tfr_max=5.0, e0_min=20.0, e0_max=25.0)
        a = sweep(spec)
        b = sweep(spec)
        assert np.array_equal(a.cwr, b.cwr)
        assert np.array_equal(a.growth, b.growth)
        assert np.array_equal(a.residual, b.residual)

    def test_surface_monotone_in_tfr(self, default_surface):
        assert np.all(np.diff(default_surface.cwr, axis=0) > 0.0)
        assert np.all(np.diff(default_surface.growth, axis=0) > 0.0)

    def test_surface_monotone_in_e0(self, default_surface):
        e0 = default_surface.e0_values
        in_range = e0 <= 45.0
        cwr = default_surface.cwr[:, in_range]
        assert np.all(np.diff(cwr, axis=1) >= 0.0)
        assert np.all(np.diff(default_surface.growth, axis=1) > 0.0)

    def test_unreachable_cell_names_itself(self, tmp_path):
        spec = GridSpec(e0_min=70.0, e0_max=70.0)
        with pytest.raises(Exception) as exc_info:
            sweep(spec)
        assert "70" in str(exc_info.value)

    def test_json_round_trip(self, tmp_path):
        spec = GridSpec(tfr_min=4.0, tfr_max=4.4, e0_min=20.0, e0_max=22.5)
        surface = sweep(spec)
        path = tmp_path / "surface.json"
        surface.write_json(path)
        loaded = GridSurface.read_json(path)
        assert loaded.spec == spec
        assert np.array_equal(loaded.cwr, surface.cwr)
        assert np.array_equal(loaded.growth, surface.growth)

    def test_csv_export_schema(self, tmp_path, default_surface):
        path = tmp_path / "surface.csv"
        default_surface.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "tfr,e0,cwr,growth_per_year,residual"
        assert len(lines) == 1 + 36 * 17


class TestInvert:
    def test_paper_joint_inversion(self, default_surface):
        feasible = invert(default_surface, (0.95, 1.05), (-0.004, -0.002))
        cells = {(c.tfr, c.e0) for c in feasible.cells}
        assert (5.8, 20.0) in cells
        assert (6.0, 20.0) in cells
        for tfr, e0 in cells:
            assert abs(tfr - 5.9) <= 0.4
            assert abs(e0 - 20.0) <= 2.5

    def test_cwr_band_spans_paper_regions(self, default_surface):
        feasible = invert(default_surface, (0.95, 1.05))
        cells = {(c.tfr, c.e0) for c in feasible.cells}
        assert any(4.0 <= t <= 5.0 and abs(e - 35.0) <= 2.5 for t, e in cells)
        assert any(6.0 <= t <= 7.0 and abs(e - 15.0) <= 2.5 for t, e in cells)

    def test_full_range_returns_all_cells(self, default_surface):
        lo = float(default_surface.cwr.min())
        hi = float(default_surface.cwr.max())
        feasible = invert(default_surface, (lo, hi))
        assert len(feasible.cells) == default_surface.cwr.size

    def test_empty_result_is_not_an_error(self, default_surface):
        feasible = invert(default_surface, (99.0, 100.0))
        assert feasible.cells == ()

    def test_bad_range_rejected(self, default_surface):
        with pytest.raises(DomainError):
            invert(default_surface, (1.0, 0.9))

    @given(
        lo=st.floats(0.3, 2.0),
        width=st.floats(0.0, 1.0),
        grow=st.floats(0.0, 0.5),
    )
    def test_enlarging_ranges_never_removes_cells(self, default_surface, lo, width, grow):
        small = invert(default_surface, (lo, lo + width))
        large = invert(default_surface, (lo - grow, lo + width + grow))
        small_cells = {(c.tfr, c.e0) for c in small.cells}
        large_cells = {(c.tfr, c.e0) for c in large.cells}
        assert small_cells <= large_cells

    def test_growth_range_filters(self, default_surface):
        both = invert(default_surface, (0.9, 1.1), (-0.002, 0.002))
        cwr_only = invert(default_surface, (0.9, 1.1))
        assert len(both.cells) < len(cwr_only.cells)
        for cell in both.cells:
            assert -0.002 <= cell.growth <= 0.002


def _vertex_on_level(surface, field_name, point, level, tol=1e-6):
    """Check a vertex by interpolating the surface field along its grid line.

    A vertex sits on a tfr grid column or an e0 grid row (or both, when a
    corner value equals the level); it must interpolate to the level along
    at least one of them.
    """
    values = getattr(surface, field_name)
    tfr, e0 = point
    errors = []
    i = int(np.argmin(np.abs(surface.tfr_values - tfr)))
    if abs(surface.tfr_values[i] - tfr) <= 1e-9:
        errors.append(abs(np.interp(e0, surface.e0_values, values[i, :]) - level))
    j = int(np.argmin(np.abs(surface.e0_values - e0)))
    if abs(surface.e0_values[j] - e0) <= 1e-9:
        errors.append(abs(np.interp(tfr, surface.tfr_values, values[:, j]) - level))
    assert errors, f"vertex {point} is not on any grid line"
    assert min(errors) <= tol


class TestContours:
    def test_vertices_interpolate_to_level(self, default_surface):
        lines = contour_export(default_surface, [0.8, 1.0, 1.2])
        assert lines
        for line in lines:
            for point in line.points:
                _vertex_on_level(default_surface, "cwr", point, line.level)

    @given(level=st.floats(0.45, 2.0))
    def test_random_levels_vertices_on_level(self, default_surface, level):
        for line in contour_export(default_surface, [level]):
            for point in line.points:
                _vertex_on_level(default_surface, "cwr", point, line.level)

    def test_level_one_passes_near_anchor(self, default_surface):
        lines = contour_export(default_surface, [1.0])
        crossings = contour_e0_at_tfr(lines, 5.0)
        assert crossings
        assert min(abs(c - 27.5) for c in crossings) <= 2.5

    def test_south_contour_offset(self, default_surface, south_surface):
        west_lines = contour_export(default_surface, [1.0])
        south_lines = contour_export(south_surface, [1.0])
        west_cross = contour_e0_at_tfr(west_lines, 5.0)
        south_cross = contour_e0_at_tfr(south_lines, 5.0)
        offset = south_cross[0] - west_cross[0]
        assert 0.5 <= offset <= 3.0

    def test_out_of_range_level_skipped_with_warning(self, default_surface, caplog):
        import logging

        with caplog.at_level(logging.WARNING):
            lines = contour_export(default_surface, [99.0])
        assert lines == ()
        assert any("skipped" in r.message for r in caplog.records)

    def test_constant_surface_degenerate_no_crash(self):
        spec = GridSpec(tfr_min=3.0, tfr_max=3.4, e0_min=20.0, e0_max=25.0)
        base = sweep(spec)
        flat = GridSurface(
            spec=spec,
            tfr_values=base.tfr_values,
            e0_values=base.e0_values,
            cwr=np.ones_like(base.cwr),
            growth=base.growth,
            residual=base.residual,
        )
        lines = contour_export(flat, [1.0])
        assert lines == ()

    def test_growth_field_contours(self, default_surface):
        lines = contour_export(default_surface, [0.0], field_name="growth")
        assert lines
        for line in lines:
            for point in line.points:
                _vertex_on_level(default_surface, "growth", point, 0.0)

    def test_json_export_schema(self, tmp_path, default_surface):
        lines = contour_export(default_surface, [1.0])
        path = tmp_path / "contours.json"
        write_contours_json(lines, path)
        payload = json.loads(path.read_text())
        assert isinstance(payload, list)
        for entry in payload:
            assert set(entry) == {"level", "points"}
            assert all(len(p) == 2 for p in entry["points"])


class TestPatternInsensitivity:
    def test_cwr_and_growth_differences_small(self, default_surface, maori_surface):
        dcwr = np.abs(default_surface.cwr - maori_surface.cwr).max()
        dgrowth = np.abs(default_surface.growth - maori_surface.growth).max()
        assert dcwr < 0.03
        assert dgrowth < 0.001
