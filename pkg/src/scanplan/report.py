"""CSV output and the comparison of computed values with published anchors.

CSV files use ``\\n`` line endings and six decimal places, with ``-inf`` for
an infinite signal excess. For fixed inputs and seed the output is
byte-for-byte reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .analytic import analytic_detection_probability, hit_probability_from_ratio, min_scans
from .errors import InvalidArgument
from .geometry import SurveillanceRegion, TwoLobeLemniscate, path_arc_length
from .montecarlo import EpsilonGrid, MonteCarloConfig, SweepGrid, sweep_detection
from .sonar import (MissionReport, SECurve, SonarParameters, effective_range, mission_report,
                    range_for_signal_excess, signal_excess)

__all__ = [
    "format_value",
    "emit_sweep_csv",
    "emit_mission_csv",
    "emit_se_curve_csv",
    "emit_rule_csv",
    "ConcordanceRow",
    "ConcordanceBundle",
    "ANCHOR_IDS",
    "build_concordance_bundle",
    "concordance",
    "format_concordance",
    "concordance_json",
]


def format_value(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def emit_sweep_csv(grid: SweepGrid) -> str:
    """``epsilon,pd_N<k>,se_N<k>,...`` with scan counts ascending, epsilon ascending."""
    cols = sorted(range(len(grid.n_values)), key=lambda j: grid.n_values[j])
    header = ["epsilon"]
    for j in cols:
        header += [f"pd_N{grid.n_values[j]}", f"se_N{grid.n_values[j]}"]
    order = sorted(range(len(grid.epsilon_values)), key=lambda i: grid.epsilon_values[i])
    rows = []
    for i in order:
        row = [grid.epsilon_values[i]]
        for j in cols:
            est = grid.estimates[i][j]
            row += [est.p_hat, est.std_err]
        rows.append(row)
    return _csv(header, rows)


def emit_mission_csv(report: MissionReport) -> str:
    """``range,se_db,pd_N<k>,...`` with one row per range."""
    ns = sorted(report.n_values)
    header = ["range", "se_db"] + [f"pd_N{n}" for n in ns]
    rows = [[row.range_nmi, row.se_db] + [row.estimates[n].p_hat for n in ns]
            for row in report.rows]
    return _csv(header, rows)


def emit_se_curve_csv(curve: SECurve) -> str:
    return _csv(["range", "se_db"], zip(curve.ranges, curve.se_db))


def emit_rule_csv(curve) -> str:
    return _csv(["n", "pd"], curve.rows())


# Concordance ---------------------------------------------------------------

ANCHOR_IDS = tuple(f"A{i}" for i in range(1, 11))

_SWEEP_AMPLITUDE = 20.0
_SWEEP_DELTA = 40.0
_MISSION_AMPLITUDE = 16.0
_MISSION_DELTA = 200.0
_RATIO_SQUARED = 0.05
_SCANS = (5, 10, 15, 20, 25)
_BRACKET = (1.0, 400.0)


@dataclass(frozen=True)
class ConcordanceRow:
    anchor: str
    source: str
    published: str
    relation: str
    published_value: float
    computed: float
    difference: float | None
    holds: bool | None
    note: str

    def difference_text(self) -> str:
        return "not comparable" if self.difference is None else f"{self.difference:.6g}"


@dataclass(frozen=True)
class ConcordanceBundle:
    """Computed inputs for :func:`concordance`.

    `sweep` must hold epsilon 10 and 20 for N = 5, 15, 25 on the 20-amplitude
    lemniscate in the 40 half-width square. `mission` must be built on the
    16-amplitude lemniscate in the 200 half-width square with rows at
    50 nmi, 140 nmi and at the ranges where the signal excess is 0 dB and
    60 dB, for N = 5 and 20.
    """

    sweep: SweepGrid | None
    ratio_squared: float | None
    mission: MissionReport | None


def build_concordance_bundle(config: MonteCarloConfig | None = None,
                             workers: int = 1) -> ConcordanceBundle:
    config = MonteCarloConfig() if config is None else config
    sweep = sweep_detection(TwoLobeLemniscate(_SWEEP_AMPLITUDE), _SCANS, EpsilonGrid(0.0, 30.0, 31),
                            SurveillanceRegion(_SWEEP_DELTA), config=config, workers=workers)
    params = SonarParameters()
    ranges = sorted({*_anchor_ranges(params), 50.0, 140.0})
    mission = mission_report(params, TwoLobeLemniscate(_MISSION_AMPLITUDE),
                             SurveillanceRegion(_MISSION_DELTA), _SCANS, ranges, config,
                             workers=workers)
    return ConcordanceBundle(sweep, _RATIO_SQUARED, mission)


def _anchor_ranges(params):
    zero = effective_range(params, *_BRACKET)
    sixty = range_for_signal_excess(params, 60.0, *_BRACKET)
    if zero is None or sixty is None:
        raise InvalidArgument("signal excess never reaches 0 dB or 60 dB inside the bracket")
    return zero.range_nmi, sixty.range_nmi


def _row(anchor, source, published, relation, value, computed, note, comparable=True):
    if relation == ">=":
        holds = computed >= value
    elif relation == "<":
        holds = computed < value
    else:
        holds = None
    diff = abs(computed - value) if comparable else None
    return ConcordanceRow(anchor, source, published, relation, value, computed, diff, holds, note)


def concordance(bundle: ConcordanceBundle) -> list[ConcordanceRow]:
    """Compare the computed bundle with the ten published anchors A1..A10."""
    if bundle.sweep is None or bundle.ratio_squared is None or bundle.mission is None:
        raise InvalidArgument("concordance bundle needs the sweep, the rule ratio and the mission report")
    sweep, mission = bundle.sweep, bundle.mission
    try:
        c = {(e, n): sweep.cell(e, n).p_hat for e in (10.0, 20.0) for n in (5, 15, 25)}
    except (KeyError, ValueError) as exc:
        raise InvalidArgument(f"sweep is missing an anchor cell: {exc}") from None
    if not isinstance(mission.path, TwoLobeLemniscate):
        raise InvalidArgument("mission report must use a lemniscate path")
    params = mission.params
    r_zero, r_sixty = _anchor_ranges(params)
    try:
        p20_zero = mission.row_at(r_zero).estimates[20].p_hat
        p5_sixty = mission.row_at(r_sixty).estimates[5].p_hat
        p20_140 = mission.row_at(140.0).estimates[20].p_hat
        p5_50 = mission.row_at(50.0).estimates[5].p_hat
    except KeyError as exc:
        raise InvalidArgument(f"mission report is missing an anchor cell: {exc}") from None

    q = hit_probability_from_ratio(bundle.ratio_squared)
    n_min = min_scans(0.7, q)
    a = mission.path.amplitude
    arc = path_arc_length(mission.path, 1_000_000)
    area = math.pi * a * a / 2.0
    se140 = signal_excess(params, 140.0)
    se50 = signal_excess(params, 50.0)
    union_note = ("union-of-discs Monte Carlo on the two-lobe path; the published curve "
                  "could not be matched under any tested path reading")

    return [
        _row("A1", "Fig. 2 reading (eps=10)", "N=15 gives P_d >= 0.5", ">=", 0.5,
             c[10.0, 15], union_note),
        _row("A2", "Fig. 2 reading (eps=10)", "N=25 gives P_d < 0.7", "<", 0.7,
             c[10.0, 25], union_note),
        _row("A3", "Fig. 2 reading (eps=20)", "N=5 gives P_d ~ 0.6", "~", 0.6,
             c[20.0, 5], union_note),
        _row("A4", "Fig. 2 reading (eps=20)", "N=15 gives P_d >= 0.9", ">=", 0.9,
             c[20.0, 15], union_note + "; every scan lies within a/2 = 10 of the x-axis, so detections "
             "need |y| < 30 and P_d <= 0.75 for any N"),
        _row("A5", "Fig. 3 reading (rho=0.05)", "P_d >= 0.7 needs N >= 30", ">=", 30.0,
             float(n_min),
             f"exact inversion of the closed form; P(30)={analytic_detection_probability(q, 30):.6f} < 0.7 "
             f"<= P(31)={analytic_detection_probability(q, 31):.6f}; published value read from a figure"),
        _row("A6", "Fig. 4 reading", "SE ~ 0 dB at R = 140 nmi", "~", 0.0, se140,
             f"with R in nmi and f=10 in the absorption formula, SE crosses 0 dB at R = {r_zero:.4f} nmi"),
        _row("A7", "Fig. 4 reading", "SE ~ 60 dB at R = 50 nmi", "~", 60.0, se50,
             f"same unit conventions; SE = 60 dB at R = {r_sixty:.4f} nmi"),
        _row("A8", "Fig. 5 reading", "N=20 gives P_d >= 0.7 at SE ~ 0 dB", ">=", 0.7,
             p20_zero,
             f"computed at eps = R(SE=0) = {r_zero:.4f} nmi, a=16, delta=200; "
             f"at the published range eps = 140 nmi P_d = {p20_140:.6f}"),
        _row("A9", "Fig. 5 reading", "N=5 gives P_d ~ 0.9 at SE ~ 60 dB", "~", 0.9,
             p5_sixty,
             f"computed at eps = R(SE=60) = {r_sixty:.4f} nmi, a=16, delta=200; "
             f"at the published range eps = 50 nmi P_d = {p5_50:.6f}"),
        _row("A10", "path length for the mission lemniscate", "path length ~ 402 nmi (pi/2 x 16^2)", "~", 402.0,
             arc,
             f"arc length of the two-lobe curve is 2*pi*a = {2 * math.pi * a:.4f}; the published value "
             f"matches the enclosed area pi*a^2/2 = {area:.4f}, not a length"),
    ]


def format_concordance(rows: list[ConcordanceRow]) -> str:
    out = []
    for r in rows:
        holds = "n/a" if r.holds is None else ("yes" if r.holds else "no")
        out.append(f"{r.anchor}: {r.published}  [{r.source}]")
        out.append(f"    computed = {r.computed:.6g}  |difference| = {r.difference_text()}  "
                   f"relation holds: {holds}")
        out.append(f"    note: {r.note}")
    return "\n".join(out) + "\n"


def concordance_json(rows: list[ConcordanceRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
