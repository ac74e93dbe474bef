import csv
import io
import math

import pytest

from scanplan.errors import InvalidArgument
from scanplan.geometry import SurveillanceRegion, TwoLobeLemniscate
from scanplan.montecarlo import DetectionEstimate, EpsilonGrid, MonteCarloConfig, SweepGrid, sweep_detection
from scanplan.report import (ANCHOR_IDS, ConcordanceBundle, build_concordance_bundle, concordance,
                             concordance_json, emit_mission_csv, emit_rule_csv, emit_se_curve_csv,
                             emit_sweep_csv, format_concordance, format_value)
from scanplan.analytic import rule_of_thumb_curve
from scanplan.sonar import RangeGrid, SonarParameters, mission_report, se_curve


def est(p, n, eps, trials=100):
    return DetectionEstimate(p, math.sqrt(p * (1 - p) / trials), trials, int(p * trials), 0, eps, n)


def test_single_cell_sweep_csv():
    grid = SweepGrid((0.0,), (5,), ((est(0.0, 5, 0.0),),))
    assert emit_sweep_csv(grid) == "epsilon,pd_N5,se_N5\n0.000000,0.000000,0.000000\n"


def test_sweep_csv_sorted_and_shaped():
    grid = SweepGrid((2.0, 1.0), (10, 5), (
        (est(0.5, 10, 2.0), est(0.25, 5, 2.0)),
        (est(0.3, 10, 1.0), est(0.1, 5, 1.0))))
    text = emit_sweep_csv(grid)
    lines = text.split("\n")
    assert len(lines) == 4 and lines[-1] == ""
    assert lines[0] == "epsilon,pd_N5,se_N5,pd_N10,se_N10"
    assert lines[1].startswith("1.000000,0.100000,")
    assert lines[2].startswith("2.000000,0.250000,")


def test_sweep_csv_round_trip_and_determinism():
    lem, region, cfg = TwoLobeLemniscate(20), SurveillanceRegion(40), MonteCarloConfig(3000, 5)
    grid = sweep_detection(lem, [15, 5], EpsilonGrid(0, 30, 4), region, config=cfg)
    text = emit_sweep_csv(grid)
    assert text == emit_sweep_csv(sweep_detection(lem, [15, 5], EpsilonGrid(0, 30, 4), region, config=cfg))
    rows = list(csv.DictReader(io.StringIO(text)))
    for i, row in enumerate(rows):
        assert float(row["epsilon"]) == pytest.approx(grid.epsilon_values[i], abs=5e-7)
        assert float(row["pd_N15"]) == pytest.approx(grid.estimates[i][0].p_hat, abs=5e-7)
        assert float(row["se_N5"]) == pytest.approx(grid.estimates[i][1].std_err, abs=5e-7)


def test_format_value():
    assert format_value(-math.inf) == "-inf"
    assert format_value(-1e-9) == "0.000000"
    assert format_value(1 / 3) == "0.333333"


class TestMissionCsv:
    def report(self, **kw):
        return mission_report(SonarParameters(**kw), TwoLobeLemniscate(16), SurveillanceRegion(200),
                              [10, 5], RangeGrid(10, 100, 3), MonteCarloConfig(500, 2))

    def test_header_and_shape(self):
        text = emit_mission_csv(self.report())
        lines = text.splitlines()
        assert lines[0] == "range,se_db,pd_N5,pd_N10"
        assert len(lines) == 4
        assert lines[1].startswith("10.000000,50.916977,")

    def test_negative_infinity(self):
        text = emit_mission_csv(self.report(aspect_angle_rad=math.pi / 2))
        assert all(line.split(",")[1] == "-inf" for line in text.splitlines()[1:])

    def test_deterministic(self):
        assert emit_mission_csv(self.report()) == emit_mission_csv(self.report())

    def test_round_trip(self):
        rep = self.report()
        rows = list(csv.DictReader(io.StringIO(emit_mission_csv(rep))))
        for row, mrow in zip(rows, rep.rows):
            assert float(row["se_db"]) == pytest.approx(mrow.se_db, abs=5e-7)
            assert float(row["pd_N10"]) == pytest.approx(mrow.estimates[10].p_hat, abs=5e-7)


def test_se_curve_and_rule_csv():
    text = emit_se_curve_csv(se_curve(SonarParameters(), RangeGrid(10, 20, 2)))
    assert text.splitlines()[0] == "range,se_db"
    assert text.splitlines()[1] == "10.000000,50.916977"
    rule = emit_rule_csv(rule_of_thumb_curve(0.5, 2))
    assert rule == "n,pd\n1.000000,0.500000\n2.000000,0.750000\n"


@pytest.fixture(scope="module")
def small_concordance():
    return concordance(build_concordance_bundle(MonteCarloConfig(4000, 1)))


class TestConcordance:
    def test_registry_complete(self, small_concordance):
        assert [r.anchor for r in small_concordance] == list(ANCHOR_IDS)
        assert len(ANCHOR_IDS) == 10

    def test_rule_of_thumb_row(self, small_concordance):
        a5 = small_concordance[4]
        assert (a5.published_value, a5.computed) == (30.0, 31.0)
        assert "exact inversion" in a5.note

    def test_path_length_row(self, small_concordance):
        a10 = small_concordance[9]
        assert a10.published_value == 402.0
        assert a10.computed == pytest.approx(100.53, abs=0.01)
        assert "enclosed area" in a10.note and "402.1239" in a10.note

    def test_sonar_rows(self, small_concordance):
        a6, a7 = small_concordance[5], small_concordance[6]
        assert "20.3406" in a6.note
        assert a7.computed == pytest.approx(-136.165, abs=1e-3)

    def test_outputs(self, small_concordance):
        text = format_concordance(small_concordance)
        assert all(f"{a}:" in text for a in ANCHOR_IDS)
        assert '"anchor": "A10"' in concordance_json(small_concordance)

    def test_missing_piece(self):
        with pytest.raises(InvalidArgument):
            concordance(ConcordanceBundle(None, 0.05, None))

    def test_missing_sweep_cell(self):
        b = build_concordance_bundle(MonteCarloConfig(100, 1))
        short = sweep_detection(TwoLobeLemniscate(20), [5], [10.0], SurveillanceRegion(40),
                                config=MonteCarloConfig(100, 1))
        with pytest.raises(InvalidArgument):
            concordance(ConcordanceBundle(short, b.ratio_squared, b.mission))
