import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paleodemog import data
from paleodemog.census import (
    AlignedObservation,
    CensusSnapshot,
    align,
    cwr,
    infer,
    read_census_csv,
)
from paleodemog.errors import DataFormatError, DomainError, OrderingError
from paleodemog.grids import GridSpec


def snapshot(year, children, women, total):
    return CensusSnapshot(
        year=year,
        children_0_14=children,
        women_15_plus=women,
        total_population=total,
    )


class TestCwr:
    def test_arithmetic(self):
        assert cwr(snapshot(1874, 1100, 1000, 4000)) == pytest.approx(1.10)

    def test_equal_counts_give_one(self):
        assert cwr(snapshot(1900, 1500, 1500, 5000)) == pytest.approx(1.0)

    def test_counts_must_be_positive(self):
        with pytest.raises(DomainError):
            snapshot(1900, 0, 1000, 4000)

    def test_children_plus_women_bounded_by_total(self):
        with pytest.raises(DomainError):
            snapshot(1900, 3000, 2000, 4000)

    @given(
        children=st.integers(1, 10**6),
        women=st.integers(1, 10**6),
        k=st.floats(0.01, 100.0),
    )
    def test_scale_invariance(self, children, women, k):
        total = children + women + 1000
        base = snapshot(1900, children, women, total)
        scaled = snapshot(1900, children * k, women * k, total * k)
        assert cwr(scaled) == pytest.approx(cwr(base), rel=1e-12)


class TestAlign:
    def test_identical_snapshots_give_zero_growth(self):
        a = snapshot(1890, 1000, 900, 3000)
        b = snapshot(1895, 1000, 900, 3000)
        obs = align([a, b])
        assert len(obs) == 1
        assert obs[0].growth == 0.0
        assert obs[0].cwr == pytest.approx(cwr(a))
        assert obs[0].midpoint == 1892.5

    def test_log_identity(self):
        a = snapshot(1890, 1000, 900, 3000)
        b = snapshot(1895, 1000, 900, 3000 * math.exp(0.05))
        obs = align([a, b])
        assert obs[0].growth == pytest.approx(0.01, abs=1e-12)

    def test_n_minus_one_observations(self):
        series = [snapshot(1880 + 5 * i, 1000 + i, 900, 3000 + i) for i in range(6)]
        assert len(align(series)) == 5

    def test_unsorted_years_rejected(self):
        a = snapshot(1890, 1000, 900, 3000)
        b = snapshot(1885, 1000, 900, 3000)
        with pytest.raises(OrderingError):
            align([a, b])

    def test_single_snapshot_rejected(self):
        with pytest.raises(DomainError):
            align([snapshot(1890, 1000, 900, 3000)])

    @given(
        n1=st.floats(1000.0, 1e6),
        n2=st.floats(1000.0, 1e6),
        span=st.floats(1.0, 20.0),
    )
    def test_growth_antisymmetric_in_totals(self, n1, n2, span):
        a = snapshot(1880, 100, 100, n1 + 300)
        b = snapshot(1880 + span, 100, 100, n2 + 300)
        forward = align([a, b])[0].growth
        a2 = snapshot(1880, 100, 100, n2 + 300)
        b2 = snapshot(1880 + span, 100, 100, n1 + 300)
        backward = align([a2, b2])[0].growth
        assert forward == pytest.approx(-backward, abs=1e-12)

    def test_midpoint_strictly_between_years(self):
        obs = AlignedObservation(
            midpoint=1876.0, cwr=1.1, growth=-0.01, source_years=(1874.0, 1878.0)
        )
        assert obs.midpoint == 1876.0
        with pytest.raises(DomainError):
            AlignedObservation(
                midpoint=1874.0, cwr=1.1, growth=-0.01, source_years=(1874.0, 1878.0)
            )


class TestCsvReader:
    def test_reads_sample_with_comments_and_blanks(self, tmp_path):
        path = tmp_path / "counts.csv"
        path.write_text(
            "# a comment\n"
            "\n"
            "year,children_0_14,women_15_plus,total_population\n"
            "1874,16710,15500,56000\n"
            "\n"
            "# another comment\n"
            "1878,16330,14950,53804\n"
        )
        series = read_census_csv(path)
        assert [s.year for s in series] == [1874.0, 1878.0]

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1874,16710,15500,56000\n")
        with pytest.raises(DataFormatError):
            read_census_csv(path)

    def test_bundled_sample_loads(self):
        series = read_census_csv(data.census_sample_path())
        assert len(series) == 7
        assert series[0].year == 1874.0
        assert series[-1].year == 1901.0


class TestInfer:
    def test_halfwidths_must_be_positive(self):
        obs = AlignedObservation(
            midpoint=1876.0, cwr=1.1, growth=-0.01, source_years=(1874.0, 1878.0)
        )
        with pytest.raises(DomainError):
            infer(obs, cwr_halfwidth=0.0)

    def test_spanning_halfwidths_return_all_cells(self):
        obs = AlignedObservation(
            midpoint=1876.0, cwr=1.0, growth=0.0, source_years=(1874.0, 1878.0)
        )
        spec = GridSpec(tfr_min=4.0, tfr_max=5.0, e0_min=20.0, e0_max=25.0)
        feasible = infer(obs, cwr_halfwidth=100.0, growth_halfwidth=1.0, spec=spec)
        n_cells = len(spec.tfr_values()) * len(spec.e0_values())
        assert len(feasible.cells) == n_cells

    def test_case_study_early_period(self):
        series = read_census_csv(data.census_sample_path())
        obs = align(series)[0]
        assert obs.source_years == (1874.0, 1878.0)
        feasible = infer(obs)
        tfr_span = feasible.tfr_span()
        e0_span = feasible.e0_span()
        assert tfr_span is not None
        assert tfr_span[0] <= 8.0 and tfr_span[1] >= 7.0
        assert e0_span[0] <= 15.0 and e0_span[1] >= 10.0

    def test_case_study_late_period(self):
        series = read_census_csv(data.census_sample_path())
        obs = align(series)[-1]
        assert obs.source_years == (1896.0, 1901.0)
        feasible = infer(obs)
        tfr_span = feasible.tfr_span()
        e0_span = feasible.e0_span()
        assert tfr_span[0] <= 7.0 and tfr_span[1] >= 6.0
        assert e0_span[0] <= 29.0 and e0_span[1] >= 25.0
