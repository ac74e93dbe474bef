"""Active sonar equation and the range-to-detection-probability pipeline.

Signal excess for a monostatic active sonar, all terms in dB::

    SE = SL - 2*TL + TS - RL - DT

with

* ``TL = 66 + 10*log10(R) + 2*alpha*R`` (R in nautical miles, alpha per nmi)
* ``alpha = 0.1 f^2/(1+f^2) + 40 f^2/(4100+f^2) + 2.75e-4 f^2 + 0.003``
  with `f` the ping frequency value as given (10 for a 10 Hz ping)
* ``TS = 10*log10((a L^2 / 2 lambda) * sinc^2(beta) * cos^2(psi))``,
  ``beta = (2 pi L / lambda) sin(psi)``, a finite-cylinder target of
  radius ``a`` and length ``L`` in feet
* ``RL = rl_factor * SL``
* ``DT = 10*log10(d / 2T)``

The wavelength comes from the sound speed in miles per hour converted to
feet per second, so it shares units with the cylinder dimensions.

Detection ranges map straight onto the cookie-cutter radius: a mission row at
range R estimates the detection probability with ``epsilon = R``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, InvalidArgument
from .geometry import SurveillancePath, SurveillanceRegion, build_schedule
from .montecarlo import (DetectionEstimate, MonteCarloConfig, ThreatPrior,
                         estimate_detection_probability)

__all__ = [
    "FEET_PER_MILE",
    "SonarParameters",
    "RangeGrid",
    "SECurve",
    "EffectiveRange",
    "MissionRow",
    "MissionReport",
    "absorption_coefficient",
    "transmission_loss",
    "wavelength",
    "target_strength",
    "detection_threshold",
    "reverberation_level",
    "signal_excess",
    "se_curve",
    "range_for_signal_excess",
    "effective_range",
    "mission_report",
]

FEET_PER_MILE = 5280.0
BISECTION_MAX_ITER = 200


@dataclass(frozen=True)
class SonarParameters:
    """Sonar, environment and target description.

    Defaults are the dipping-sonar / cylinder-target case used throughout
    the package: 250 dB source, f = 10, d = 25, T = 100 s, a 300 ft by
    15 ft cylinder seen at 45 degrees off beam, c = 3355 mph and a
    reverberation term of one tenth of the source level.

    `absorption_override` (dB per nmi) and `wavelength_override_ft`, when
    set, replace the values derived from the frequency.
    """

    source_level_db: float = 250.0
    frequency: float = 10.0
    detection_index: float = 25.0
    pulse_duration_s: float = 100.0
    cylinder_length: float = 300.0
    cylinder_radius: float = 15.0
    aspect_angle_rad: float = math.pi / 4
    sound_speed_mph: float = 3355.0
    rl_factor: float = 0.1
    absorption_override: float | None = None
    wavelength_override_ft: float | None = None

    def __post_init__(self):
        checks = [
            (math.isfinite(self.source_level_db), "source_level_db must be finite"),
            (self.frequency >= 0, "frequency must be non-negative"),
            (self.detection_index > 0, "detection_index must be positive"),
            (self.pulse_duration_s > 0, "pulse_duration_s must be positive"),
            (self.cylinder_length > 0, "cylinder_length must be positive"),
            (self.cylinder_radius > 0, "cylinder_radius must be positive"),
            (math.isfinite(self.aspect_angle_rad), "aspect_angle_rad must be finite"),
            (self.sound_speed_mph > 0, "sound_speed_mph must be positive"),
            (self.rl_factor >= 0, "rl_factor must be non-negative"),
            (self.absorption_override is None or self.absorption_override >= 0,
             "absorption_override must be non-negative"),
            (self.wavelength_override_ft is None or self.wavelength_override_ft > 0,
             "wavelength_override_ft must be positive"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidArgument(msg)

    @property
    def alpha(self) -> float:
        if self.absorption_override is not None:
            return self.absorption_override
        return absorption_coefficient(self.frequency)

    @property
    def wavelength_ft(self) -> float:
        if self.wavelength_override_ft is not None:
            return self.wavelength_override_ft
        return wavelength(self.sound_speed_mph, self.frequency)

    @property
    def target_strength_db(self) -> float:
        return target_strength(self.cylinder_length, self.cylinder_radius,
                               self.wavelength_ft, self.aspect_angle_rad)

    @property
    def detection_threshold_db(self) -> float:
        return detection_threshold(self.detection_index, self.pulse_duration_s)


class RangeGrid(NamedTuple):
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        if not 0 < self.min < self.max:
            raise InvalidArgument(f"range grid needs 0 < min < max, got {self.min}, {self.max}")
        if self.steps < 2:
            raise InvalidArgument(f"range grid needs at least 2 steps, got {self.steps}")
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SECurve:
    ranges: tuple[float, ...]
    se_db: tuple[float, ...]


class EffectiveRange(NamedTuple):
    range_nmi: float
    range_limited: bool


@dataclass(frozen=True)
class MissionRow:
    range_nmi: float
    se_db: float
    estimates: dict[int, DetectionEstimate]


@dataclass(frozen=True)
class MissionReport:
    rows: tuple[MissionRow, ...]
    n_values: tuple[int, ...]
    region: SurveillanceRegion
    path: SurveillancePath
    params: SonarParameters
    config: MonteCarloConfig = field(default_factory=MonteCarloConfig)

    def row_at(self, range_nmi: float) -> MissionRow:
        for row in self.rows:
            if math.isclose(row.range_nmi, range_nmi, rel_tol=1e-9):
                return row
        raise KeyError(f"no mission row at range {range_nmi}")


def absorption_coefficient(f: float) -> float:
    f2 = f * f
    return 0.1 * f2 / (1.0 + f2) + 40.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003


def transmission_loss(range_r: float, alpha: float) -> float:
    """One-way transmission loss in dB at range `range_r` (nmi)."""
    if not range_r > 0:
        raise DomainError(f"range must be positive, got {range_r}")
    return 66.0 + 10.0 * math.log10(range_r) + 2.0 * alpha * range_r


def wavelength(c_mph: float, f: float) -> float:
    """Acoustic wavelength in feet for sound speed `c_mph` and frequency `f` (Hz)."""
    if not f > 0:
        raise InvalidArgument(f"frequency must be positive to define a wavelength, got {f}")
    if not c_mph > 0:
        raise InvalidArgument(f"sound speed must be positive, got {c_mph}")
    return c_mph * FEET_PER_MILE / 3600.0 / f


def target_strength(length: float, radius: float, wavelength_ft: float, psi: float) -> float:
    """Finite-cylinder target strength in dB; ``-inf`` when the return vanishes."""
    if not (length > 0 and radius > 0 and wavelength_ft > 0):
        raise InvalidArgument("cylinder length, radius and wavelength must be positive")
    s = math.sin(psi)
    beta = 2.0 * math.pi * length / wavelength_ft * s
    sinc = math.sin(beta) / beta if beta != 0.0 else 1.0
    # (1 - |s|)(1 + |s|) is exactly zero at the float nearest pi/2, unlike cos(psi)**2.
    cos2 = (1.0 - abs(s)) * (1.0 + abs(s))
    v = radius * length * length / (2.0 * wavelength_ft) * sinc * sinc * cos2
    if v <= 0.0:
        return -math.inf
    return 10.0 * math.log10(v)


def detection_threshold(d: float, duration: float) -> float:
    if not (d > 0 and duration > 0):
        raise InvalidArgument(f"detection index and duration must be positive, got {d}, {duration}")
    return 10.0 * math.log10(d / (2.0 * duration))


def reverberation_level(params: SonarParameters) -> float:
    return params.rl_factor * params.source_level_db


def signal_excess(params: SonarParameters, range_r: float) -> float:
    tl = transmission_loss(range_r, params.alpha)
    ts = params.target_strength_db
    if ts == -math.inf:
        return -math.inf
    return (params.source_level_db - 2.0 * tl + ts
            - reverberation_level(params) - params.detection_threshold_db)


def se_curve(params: SonarParameters, range_grid: RangeGrid | Sequence[float]) -> SECurve:
    ranges = _range_values(range_grid)
    return SECurve(tuple(ranges), tuple(signal_excess(params, r) for r in ranges))


def range_for_signal_excess(params: SonarParameters, target_db: float, r_lo: float,
                            r_hi: float, tol: float = 1e-6) -> EffectiveRange | None:
    """Range at which the signal excess falls to `target_db`, by bisection.

    Returns ``None`` when the excess is already at or below the target at
    `r_lo`, and `r_hi` flagged as range-limited when it is still at or above
    the target there.
    """
    if not 0 < r_lo < r_hi:
        raise InvalidArgument(f"bracket needs 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]")
    if not tol > 0:
        raise InvalidArgument(f"tolerance must be positive, got {tol}")

    def g(r):
        return signal_excess(params, r) - target_db

    g_lo = g(r_lo)
    if g_lo <= 0:
        return None
    if g(r_hi) >= 0:
        return EffectiveRange(r_hi, True)
    lo, hi = r_lo, r_hi
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        g_mid = g(mid)
        if abs(g_mid) < tol:
            return EffectiveRange(mid, False)
        if g_mid > 0:
            lo = mid
        else:
            hi = mid
    raise DomainError(f"bisection did not reach |SE - {target_db}| < {tol} within "
                      f"{BISECTION_MAX_ITER} iterations; bracket collapsed at {lo}")


def effective_range(params: SonarParameters, r_lo: float, r_hi: float,
                    tol: float = 1e-6) -> EffectiveRange | None:
    """Range at which the signal excess crosses zero dB."""
    return range_for_signal_excess(params, 0.0, r_lo, r_hi, tol)


def _range_values(range_grid):
    if isinstance(range_grid, RangeGrid):
        return [float(r) for r in range_grid.values()]
    ranges = [float(r) for r in range_grid]
    if not ranges:
        raise InvalidArgument("range list is empty")
    if any(r <= 0 for r in ranges):
        raise InvalidArgument("ranges must be positive")
    if any(b <= a for a, b in zip(ranges, ranges[1:])):
        raise InvalidArgument("ranges must be strictly increasing")
    return ranges


def mission_report(params: SonarParameters, path: SurveillancePath, region: SurveillanceRegion,
                   n_values: Sequence[int], range_grid: RangeGrid | Sequence[float],
                   config: MonteCarloConfig | None = None, prior: ThreatPrior | None = None,
                   workers: int = 1) -> MissionReport:
    """Signal excess and detection probability for each range and scan count.

    The estimate for row ``i`` and scan count ``n_values[j]`` uses the
    stream ``config.stream + (i, j)`` and the detection radius ``epsilon = R``.
    """
    config = MonteCarloConfig() if config is None else config
    ranges = _range_values(range_grid)
    n_values = tuple(int(n) for n in n_values)
    if not n_values:
        raise InvalidArgument("mission report needs at least one scan count")
    schedules = [build_schedule(path, n) for n in n_values]
    cells = [(i, j) for i in range(len(ranges)) for j in range(len(n_values))]

    def run(cell):
        i, j = cell
        return estimate_detection_probability(schedules[j], ranges[i], region, prior,
                                              config.substream(i, j))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(run, cells))
    else:
        flat = [run(c) for c in cells]
    m = len(n_values)
    rows = tuple(
        MissionRow(r, signal_excess(params, r), dict(zip(n_values, flat[i * m:(i + 1) * m])))
        for i, r in enumerate(ranges))
    return MissionReport(rows, n_values, region, path, params, config)
