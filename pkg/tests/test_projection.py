import logging
import math

import numpy as np
import pytest

from paleodemog.ages import AgeGrid
from paleodemog.errors import DomainError
from paleodemog.fertility import scale_to_tfr
from paleodemog.lifetable import (
    FEMALE,
    MALE,
    LifeTable,
    paired_tables,
)
from paleodemog.projection import (
    PopulationVector,
    RateChange,
    ScenarioSchedule,
    TrajectoryPoint,
    project,
    project_step,
    stable_seed,
    write_trajectory_csv,
)
from paleodemog.stable import SexRatioAtBirth, solve_stable

SRB = SexRatioAtBirth()


def constant_schedule(tfr, e0, horizon=100.0):
    return ScenarioSchedule(changes=(RateChange(0.0, tfr, e0),), horizon=horizon)


class TestScenarioSchedule:
    def test_first_change_must_start_at_zero(self):
        with pytest.raises(DomainError):
            ScenarioSchedule(changes=(RateChange(5.0, 5.0, 30.0),), horizon=50.0)

    def test_times_strictly_increasing(self):
        with pytest.raises(DomainError):
            ScenarioSchedule(
                changes=(RateChange(0.0, 5.0, 30.0), RateChange(0.0, 5.5, 30.0)),
                horizon=50.0,
            )

    def test_horizon_must_be_step_multiple(self):
        with pytest.raises(DomainError):
            constant_schedule(5.0, 30.0, horizon=52.0)

    def test_json_round_trip(self, tmp_path):
        schedule = ScenarioSchedule(
            changes=(RateChange(0.0, 5.0, 30.0), RateChange(10.0, 5.5, 32.5)),
            horizon=60.0,
            reporting_interval=10.0,
        )
        path = tmp_path / "scenario.json"
        with open(path, "w") as fh:
            import json

            json.dump(schedule.to_json_dict(), fh)
        assert ScenarioSchedule.read_json(path) == schedule

    def test_midstep_change_snapped_with_notice(self, west, booth, caplog):
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 1000.0)
        schedule = ScenarioSchedule(
            changes=(RateChange(0.0, 5.0, 30.0), RateChange(7.0, 5.5, 30.0)),
            horizon=20.0,
        )
        with caplog.at_level(logging.INFO):
            points = project(pop, schedule, west, booth, SRB)
        assert any("snapped" in r.message for r in caplog.records)
        # Rates switch at t=10, so the 5->10 step still runs the old rates.
        assert points[1].cwr == pytest.approx(points[0].cwr, abs=1e-9)
        assert points[2].cwr > points[1].cwr

    def test_unreachable_e0_fails_before_stepping(self, west, booth):
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 1000.0)
        schedule = ScenarioSchedule(
            changes=(RateChange(0.0, 5.0, 30.0), RateChange(50.0, 5.0, 90.0)),
            horizon=100.0,
        )
        with pytest.raises(Exception):
            project(pop, schedule, west, booth, SRB)


class TestStableSeed:
    def test_unit_total_equals_shares(self, west, booth):
        female, male = paired_tables(west, 30.0)
        sol = solve_stable(scale_to_tfr(booth, 5.0), female, male, SRB)
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 1.0)
        np.testing.assert_allclose(pop.female, sol.female_shares, atol=1e-15)
        np.testing.assert_allclose(pop.male, sol.male_shares, atol=1e-15)

    def test_total_scaling(self, west, booth):
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 123456.0)
        assert pop.total() == pytest.approx(123456.0, rel=1e-12)


class TestConstantRates:
    def test_stable_seed_is_fixed_point(self, west, booth):
        pop = stable_seed(5.0, 27.5, west, booth, SRB, 100000.0)
        points = project(pop, constant_schedule(5.0, 27.5), west, booth, SRB)
        cwrs = [p.cwr for p in points]
        for a, b in zip(cwrs, cwrs[1:]):
            assert abs(b - a) < 1e-6

    def test_growth_matches_lotka_rate(self, west, booth):
        female, male = paired_tables(west, 32.5)
        sol = solve_stable(scale_to_tfr(booth, 4.0), female, male, SRB)
        pop = stable_seed(4.0, 32.5, west, booth, SRB, 50000.0)
        points = project(pop, constant_schedule(4.0, 32.5), west, booth, SRB)
        for p in points[1:]:
            assert p.growth == pytest.approx(sol.growth_rate, abs=1e-4)

    @pytest.mark.parametrize(
        "tfr,e0",
        [(5.0, 27.5), (6.0, 20.0), (3.0, 40.0), (8.0, 12.5), (2.5, 45.0)],
    )
    def test_500_year_composition_matches_stable(self, west, booth, tfr, e0):
        female, male = paired_tables(west, e0)
        sol = solve_stable(scale_to_tfr(booth, tfr), female, male, SRB)
        pop = stable_seed(tfr, e0, west, booth, SRB, 1.0)
        rates = scale_to_tfr(booth, tfr).rates_on_grid(female.grid)
        for _ in range(100):
            pop = project_step(pop, female, male, rates, SRB)
        total = pop.total()
        assert np.abs(pop.female / total - sol.female_shares).max() < 1e-4
        assert np.abs(pop.male / total - sol.male_shares).max() < 1e-4


class TestTransients:
    def test_fertility_step_timing(self, west, booth):
        female, male = paired_tables(west, 30.0)
        target = solve_stable(scale_to_tfr(booth, 5.25), female, male, SRB).child_woman_ratio
        start = solve_stable(scale_to_tfr(booth, 5.0), female, male, SRB).child_woman_ratio
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 100000.0)
        points = project(pop, constant_schedule(5.25, 30.0, horizon=120.0), west, booth, SRB)
        by_time = {p.time: p for p in points}
        first_within = next(p.time for p in points if abs(p.cwr - target) <= 0.005)
        assert 30.0 < first_within <= 60.0
        covered_by_15 = (by_time[15.0].cwr - start) / (target - start)
        assert covered_by_15 >= 0.6
        assert abs(by_time[100.0].cwr - target) < 0.005

    def test_staircase_smoother_than_single_jump(self, west, booth):
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 100000.0)
        stair_changes = tuple(
            RateChange(5.0 * k, 5.0 + 0.25 * (k + 1), 30.0) for k in range(5)
        )
        stair = project(
            pop,
            ScenarioSchedule(changes=stair_changes, horizon=150.0),
            west,
            booth,
            SRB,
        )
        jump = project(
            pop, constant_schedule(6.25, 30.0, horizon=150.0), west, booth, SRB
        )

        def max_step(points):
            return max(abs(b.cwr - a.cwr) for a, b in zip(points, points[1:]))

        assert max_step(stair) < max_step(jump)

    def _time_to_90pct_growth(self, points, r_old, r_new):
        for p in points[1:]:
            if abs(p.growth - r_new) <= 0.1 * abs(r_new - r_old):
                return p.time
        return math.inf

    def test_mortality_adjusts_faster_than_fertility(self, west, booth):
        female, male = paired_tables(west, 30.0)
        r_old = solve_stable(scale_to_tfr(booth, 5.0), female, male, SRB).growth_rate
        f2, m2 = paired_tables(west, 32.5)
        r_mort = solve_stable(scale_to_tfr(booth, 5.0), f2, m2, SRB).growth_rate
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 100000.0)
        pts_mort = project(pop, constant_schedule(5.0, 32.5, horizon=150.0), west, booth, SRB)
        t_mort = self._time_to_90pct_growth(pts_mort, r_old, r_mort)

        # Fertility step with the same long-run growth impact.
        lo, hi = 5.0, 7.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            r_mid = solve_stable(scale_to_tfr(booth, mid), female, male, SRB).growth_rate
            if r_mid - r_old < r_mort - r_old:
                lo = mid
            else:
                hi = mid
        tfr_eq = 0.5 * (lo + hi)
        r_fert = solve_stable(scale_to_tfr(booth, tfr_eq), female, male, SRB).growth_rate
        pts_fert = project(pop, constant_schedule(tfr_eq, 30.0, horizon=150.0), west, booth, SRB)
        t_fert = self._time_to_90pct_growth(pts_fert, r_old, r_fert)
        assert t_mort < t_fert

    def test_mortality_growth_responds_within_first_step(self, west, booth):
        female, male = paired_tables(west, 30.0)
        r_old = solve_stable(scale_to_tfr(booth, 5.0), female, male, SRB).growth_rate
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 100000.0)
        pts = project(pop, constant_schedule(5.0, 32.5, horizon=20.0), west, booth, SRB)
        assert pts[1].growth > r_old + 0.001


class TestConservation:
    def test_zero_fertility_near_full_survival_conserves_total(self, booth):
        grid = AgeGrid()
        n = len(grid)
        # Near-full survival: tiny death probabilities, enormous open-group
        # life expectancy, so pooling loses almost nothing.
        lx = 1.0 - 1e-9 * np.arange(n)
        terminal_e = 1e6
        tables = {}
        for sex in (FEMALE, MALE):
            from paleodemog.lifetable import person_years_from_survivorship

            nLx = person_years_from_survivorship(sex, lx, terminal_e)
            tables[sex] = LifeTable.from_columns(sex, grid, lx, nLx)
        pop = PopulationVector(
            grid=grid,
            female=np.full(n, 100.0),
            male=np.full(n, 100.0),
        )
        rates = np.zeros(n)
        total0 = pop.total()
        for _ in range(10):
            pop = project_step(pop, tables[FEMALE], tables[MALE], rates, SRB)
        assert pop.total() == pytest.approx(total0, rel=1e-4)


class TestTrajectoryExport:
    def test_csv_schema_and_nan_growth(self, tmp_path, west, booth):
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 1000.0)
        points = project(pop, constant_schedule(5.0, 30.0, horizon=10.0), west, booth, SRB)
        path = tmp_path / "trajectory.csv"
        write_trajectory_csv(points, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "time,cwr,growth_per_year,total_population"
        first_row = lines[1].split(",")
        assert first_row[0] == "0"
        assert first_row[2] == ""  # no growth before the first step

    def test_cwr_positive_while_women_present(self, west, booth):
        pop = stable_seed(5.0, 30.0, west, booth, SRB, 1000.0)
        points = project(pop, constant_schedule(5.0, 30.0, horizon=50.0), west, booth, SRB)
        assert all(p.cwr > 0.0 for p in points)
        assert all(isinstance(p, TrajectoryPoint) for p in points)
