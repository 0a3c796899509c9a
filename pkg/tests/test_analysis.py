import csv
import io
import math

import pytest

from familyplan import analysis
from familyplan.errors import BracketingError, DomainError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class TestCrossingProbability:
    def test_one_each_versus_two_boys_is_the_golden_ratio(self):
        root = analysis.crossing_probability((1, 1), (2, 0), 1e-10)
        assert abs(root - GOLDEN) <= 1e-9

    def test_symmetric_pair_crosses_at_even_odds(self):
        # F(1,0,p) = 1/p and F(0,1,p) = 1/(1-p) meet at 1/2
        root = analysis.crossing_probability((1, 0), (0, 1), 1e-10)
        assert abs(root - 0.5) <= 1e-9

    def test_identical_rules_have_no_bracket(self):
        with pytest.raises(BracketingError):
            analysis.crossing_probability((1, 1), (1, 1), 1e-10)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(DomainError):
            analysis.crossing_probability((1, 1), (2, 0), -1e-10)


class TestSweep:
    def test_anchor_values_at_even_odds(self):
        rows = analysis.sweep([(1, 1), (2, 0)], ["F"], 0.1, 0.9, 81, 1e-10)
        assert len(rows) == 81
        mid = rows[40]
        assert mid.p == pytest.approx(0.5, abs=1e-15)
        assert mid.quantities["F(1,1)"] == pytest.approx(3.0, abs=1e-8)
        assert mid.quantities["F(2,0)"] == pytest.approx(4.0, abs=1e-8)

    def test_ratio_cells_equal_birth_odds(self):
        rows = analysis.sweep([(1, 1), (3, 2)], ["ratio"], 0.2, 0.8, 7, 1e-10)
        for row in rows:
            odds = row.p / (1.0 - row.p)
            for value in row.quantities.values():
                assert abs(value - odds) <= 1e-8

    def test_girls_at_golden_point(self):
        rows = analysis.sweep([(1, 1)], ["G"], 0.618034, 0.7, 2, 1e-10)
        assert rows[0].quantities["G(1,1)"] == pytest.approx(1.236068, abs=1e-5)

    def test_rows_are_monotone_and_aligned(self):
        rows = analysis.sweep([(1, 1), (2, 0)], ["F", "G", "B"], 0.2, 0.8, 13, 1e-8)
        keys = list(rows[0].quantities)
        assert keys == ["F(1,1)", "F(2,0)", "G(1,1)", "G(2,0)", "B(1,1)", "B(2,0)"]
        for earlier, later in zip(rows, rows[1:]):
            assert later.p > earlier.p
            assert list(later.quantities) == keys
        assert rows[0].p == 0.2
        assert rows[-1].p == 0.8

    def test_rerun_reproduces_identical_values(self):
        first = analysis.sweep([(2, 1)], ["F", "average_share"], 0.3, 0.7, 9, 1e-10)
        second = analysis.sweep([(2, 1)], ["F", "average_share"], 0.3, 0.7, 9, 1e-10)
        assert first == second

    def test_failed_cells_marked_not_fatal(self):
        # 1e-7 is a legal probability but below the series guard band
        rows = analysis.sweep([(1, 1)], ["F"], 1e-7, 0.5, 2, 1e-10)
        assert math.isnan(rows[0].quantities["F(1,1)"])
        assert rows[1].quantities["F(1,1)"] == pytest.approx(3.0, abs=1e-8)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(rules=[], quantities=["F"], p_start=0.1, p_end=0.9, steps=3),
            dict(rules=[(1, 1)], quantities=[], p_start=0.1, p_end=0.9, steps=3),
            dict(rules=[(1, 1)], quantities=["X"], p_start=0.1, p_end=0.9, steps=3),
            dict(rules=[(1, 1)], quantities=["F"], p_start=0.9, p_end=0.1, steps=3),
            dict(rules=[(1, 1)], quantities=["F"], p_start=0.1, p_end=0.9, steps=1),
            dict(rules=[(1, 1)], quantities=["F"], p_start=0.0, p_end=0.9, steps=3),
        ],
    )
    def test_invalid_arguments_rejected(self, kwargs):
        with pytest.raises(DomainError):
            analysis.sweep(tol=1e-10, **kwargs)


class TestCsv:
    def test_format_and_round_trip(self):
        rows = analysis.sweep([(1, 1)], ["F", "G"], 0.25, 0.75, 3, 1e-10)
        text = analysis.sweep_to_csv(rows)
        lines = text.split("\n")
        # names carry commas, so the header quotes them per RFC 4180
        assert lines[0] == 'p,"F(1,1)","G(1,1)"'
        assert lines[-1] == ""
        assert len(lines) == 5
        assert not any(line != line.rstrip() for line in lines)
        assert "\r" not in text
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert len(parsed) == 3
        for row, record in zip(rows, parsed):
            assert float(record["p"]) == row.p
            assert float(record["F(1,1)"]) == row.quantities["F(1,1)"]
            assert float(record["G(1,1)"]) == row.quantities["G(1,1)"]

    def test_empty_sweep_rejected(self):
        with pytest.raises(DomainError):
            analysis.sweep_to_csv([])
