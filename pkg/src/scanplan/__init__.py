"""Scan-count planning for cookie-cutter sensors on fixed surveillance paths."""

__version__ = "0.1.0"

from .analytic import (analytic_detection_probability, hit_probability_from_ratio, min_scans,
                       rule_of_thumb_curve, single_scan_hit_probability)
from .geometry import (ExplicitWaypoints, Point2D, ScanSchedule, SurveillanceRegion,
                       TwoLobeLemniscate, build_schedule, containment_check,
                       coverage_fraction_grid, euclidean_distance, overlap_check,
                       path_arc_length, path_point, scan_angles)
from .montecarlo import (EpsilonGrid, FixedPoint, MonteCarloConfig, UniformInRegion,
                         estimate_detection_probability, is_detected, sweep_detection)
from .sonar import (RangeGrid, SonarParameters, effective_range, mission_report, se_curve,
                    signal_excess)
