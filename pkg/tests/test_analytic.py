import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scanplan.analytic import (analytic_detection_probability, hit_probability_from_ratio, min_scans,
                               rule_of_thumb_curve, single_scan_hit_probability)
from scanplan.errors import DomainError, InvalidArgument, UnreachableTarget
from scanplan.geometry import ScanSchedule, SurveillanceRegion, containment_check, coverage_fraction_grid, overlap_check

Q_RHO_005 = 0.039269908169872414  # pi * 0.05 / 4


class TestSingleScan:
    def test_eps10_delta40(self):
        assert single_scan_hit_probability(10, 40) == pytest.approx(0.0490874, abs=1e-7)

    def test_ratio(self):
        assert hit_probability_from_ratio(0.05) == pytest.approx(0.0392699, abs=1e-7)
        assert hit_probability_from_ratio(0.05) == pytest.approx(Q_RHO_005, rel=1e-14)

    def test_vanishing_disc(self):
        assert single_scan_hit_probability(1e-9, 40) < 1e-18

    def test_zero_rejected(self):
        with pytest.raises(InvalidArgument):
            single_scan_hit_probability(0, 40)

    def test_disc_larger_than_region(self):
        with pytest.raises(DomainError):
            single_scan_hit_probability(50, 40)
        assert hit_probability_from_ratio(4 / math.pi) == pytest.approx(1.0)


class TestDetectionProbability:
    def test_single_scan(self):
        assert analytic_detection_probability(0.3, 1) == pytest.approx(0.3)

    def test_thirty_scans(self):
        assert analytic_detection_probability(0.0392699, 30) == pytest.approx(0.69939, abs=1e-4)

    def test_certain(self):
        assert analytic_detection_probability(1.0, 7) == 1.0

    @given(st.floats(1e-6, 1 - 1e-6), st.integers(1, 200))
    def test_increasing_in_n(self, q, n):
        assert analytic_detection_probability(q, n + 1) >= analytic_detection_probability(q, n)

    def test_strictly_increasing_moderate(self):
        p = [analytic_detection_probability(0.04, n) for n in range(1, 100)]
        assert all(b > a for a, b in zip(p, p[1:]))
        p = [analytic_detection_probability(q, 10) for q in np.linspace(0.01, 0.99, 50)]
        assert all(b > a for a, b in zip(p, p[1:]))


class TestMinScans:
    def test_first_scan_enough(self):
        assert min_scans(0.5, 0.5) == 1

    def test_rule_of_thumb_target(self):
        assert min_scans(0.7, Q_RHO_005) == 31
        assert analytic_detection_probability(Q_RHO_005, 30) < 0.7 <= analytic_detection_probability(Q_RHO_005, 31)

    def test_closed_threshold(self):
        assert min_scans(0.75, 0.5) == 2

    def test_q_one(self):
        assert min_scans(0.999, 1.0) == 1

    def test_unreachable(self):
        with pytest.raises(UnreachableTarget):
            min_scans(0.5, 0.0)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_bad_target(self, p):
        with pytest.raises(InvalidArgument):
            min_scans(p, 0.5)

    def test_minimality_grid(self):
        for p in np.linspace(0.01, 0.99, 10):
            for q in np.geomspace(1e-3, 1.0, 10):
                n = min_scans(p, q)
                assert analytic_detection_probability(q, n) >= p
                assert n == 1 or analytic_detection_probability(q, n - 1) < p

    @given(st.floats(1e-4, 1 - 1e-4), st.floats(1e-4, 1.0))
    def test_minimality_property(self, p, q):
        n = min_scans(p, q)
        assert analytic_detection_probability(q, n) >= p
        assert n == 1 or analytic_detection_probability(q, n - 1) < p


class TestCurve:
    def test_first_entry(self):
        assert rule_of_thumb_curve(hit_probability_from_ratio(0.05), 1).rows() == [(1, pytest.approx(0.0392699, abs=1e-7))]

    def test_last_entry(self):
        curve = rule_of_thumb_curve(hit_probability_from_ratio(0.05), 30)
        assert curve.n_values == tuple(range(1, 31))
        assert curve.probabilities[-1] == pytest.approx(0.69939, abs=1e-4)

    def test_certain(self):
        assert rule_of_thumb_curve(1.0, 3).probabilities == (1.0, 1.0, 1.0)

    def test_n_max(self):
        with pytest.raises(InvalidArgument):
            rule_of_thumb_curve(0.5, 0)


class TestGeometricConsistency:
    def test_single_disc_area_ratio(self):
        q = single_scan_hit_probability(10, 40)
        grid = coverage_fraction_grid(ScanSchedule([(5, -3)]), 10, SurveillanceRegion(40), 2000)
        assert analytic_detection_probability(q, 1) == pytest.approx(grid, abs=2e-3)

    def test_product_form_close_to_union_area(self):
        # Disjoint contained discs: the union fraction is N*q, the product form 1-(1-q)^N.
        s = ScanSchedule([(-20, 0), (20, 0), (0, 20)])
        region = SurveillanceRegion(40)
        assert overlap_check(s, 5) and containment_check(s, 5, region)
        q = single_scan_hit_probability(5, 40)
        grid = coverage_fraction_grid(s, 5, region, 2000)
        assert abs(analytic_detection_probability(q, 3) - grid) < 0.005
