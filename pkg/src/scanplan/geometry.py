"""Planar geometry: the search square, surveillance paths and scan schedules.

All lengths share one arbitrary unit (nautical miles in the sonar
application). The search square is ``[-delta, delta] x [-delta, delta]``.

The lemniscate path is the polar curve ``r = a cos(theta)`` drawn with
magnitude ``|r|``, which gives two circular lobes of diameter ``a`` that
touch at the origin::

    x = |a cos(theta)| cos(theta)
    y = |a cos(theta)| sin(theta)

Drawing it with the signed radius instead traces a single circle twice; that
variant is available through :func:`circle_waypoints` for comparison.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import InvalidArgument, UnsupportedOperation

__all__ = [
    "Point2D",
    "SurveillanceRegion",
    "TwoLobeLemniscate",
    "ExplicitWaypoints",
    "SurveillancePath",
    "ScanSchedule",
    "scan_angles",
    "path_point",
    "build_schedule",
    "circle_waypoints",
    "euclidean_distance",
    "path_arc_length",
    "coverage_fraction_grid",
    "containment_check",
    "overlap_check",
]


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidArgument(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y


@dataclass(frozen=True)
class SurveillanceRegion:
    """The closed square ``[-delta, delta]^2`` holding the threat."""

    delta: float

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise InvalidArgument(f"region half-width must be positive, got {self.delta}")

    @property
    def area(self) -> float:
        return 4.0 * self.delta * self.delta

    def contains(self, p: Point2D) -> bool:
        return abs(p.x) <= self.delta and abs(p.y) <= self.delta


@dataclass(frozen=True)
class TwoLobeLemniscate:
    amplitude: float

    def __post_init__(self):
        if not (self.amplitude > 0 and math.isfinite(self.amplitude)):
            raise InvalidArgument(f"lemniscate amplitude must be positive, got {self.amplitude}")


@dataclass(frozen=True)
class ExplicitWaypoints:
    points: tuple[Point2D, ...]

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point2D) else Point2D(*p) for p in self.points)
        if not pts:
            raise InvalidArgument("waypoint path needs at least one point")
        object.__setattr__(self, "points", pts)


SurveillancePath = Union[TwoLobeLemniscate, ExplicitWaypoints]


@dataclass(frozen=True)
class ScanSchedule:
    """Ordered sensor positions, one per scan."""

    points: tuple[Point2D, ...]
    source_path: SurveillancePath | None = None

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point2D) else Point2D(*p) for p in self.points)
        if not pts:
            raise InvalidArgument("a schedule needs at least one scan")
        object.__setattr__(self, "points", pts)

    @property
    def n_scans(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        """Scan positions as an ``(N, 2)`` float array."""
        return np.array([(p.x, p.y) for p in self.points], dtype=float)


def scan_angles(n: int) -> list[float]:
    """Return the scan angles ``2*pi*j/n`` for ``j = 1..n``.

    >>> scan_angles(4)[-1] == 2 * math.pi
    True
    """
    if n < 1:
        raise InvalidArgument(f"number of scans must be at least 1, got {n}")
    return [2.0 * math.pi * j / n for j in range(1, n + 1)]


def path_point(path: SurveillancePath, theta: float) -> Point2D:
    """Position on the lemniscate at polar angle `theta`."""
    if not isinstance(path, TwoLobeLemniscate):
        raise UnsupportedOperation("path_point is only defined for the lemniscate; "
                                   "waypoints are used directly by build_schedule")
    r = abs(path.amplitude * math.cos(theta))
    return Point2D(r * math.cos(theta), r * math.sin(theta))


def build_schedule(path: SurveillancePath, n: int) -> ScanSchedule:
    if isinstance(path, ExplicitWaypoints):
        if n != len(path.points):
            raise InvalidArgument(f"waypoint path has {len(path.points)} points but {n} scans were requested")
        return ScanSchedule(path.points, path)
    return ScanSchedule(tuple(path_point(path, t) for t in scan_angles(n)), path)


def circle_waypoints(amplitude: float, n: int) -> ExplicitWaypoints:
    """Scan points of ``r = a cos(theta)`` drawn with the signed radius.

    This is the circle of diameter `amplitude` centred at ``(a/2, 0)``,
    sampled at the same angles as the lemniscate.
    """
    pts = []
    for t in scan_angles(n):
        r = amplitude * math.cos(t)
        pts.append(Point2D(r * math.cos(t), r * math.sin(t)))
    return ExplicitWaypoints(tuple(pts))


def euclidean_distance(p: Point2D, q: Point2D) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    return math.sqrt(dx * dx + dy * dy)


def path_arc_length(path: SurveillancePath, steps: int = 100_000) -> float:
    """Length of a surveillance path.

    The lemniscate is sampled at ``steps + 1`` equally spaced angles over
    ``[0, 2*pi]`` and the chord lengths are summed; the error shrinks like
    ``1/steps**2``. Waypoint paths return the open polyline length and ignore
    `steps`.
    """
    if steps < 2:
        raise InvalidArgument(f"steps must be at least 2, got {steps}")
    if isinstance(path, ExplicitWaypoints):
        pts = path.points
        return math.fsum(euclidean_distance(p, q) for p, q in zip(pts, pts[1:]))
    theta = np.linspace(0.0, 2.0 * np.pi, steps + 1)
    r = np.abs(path.amplitude * np.cos(theta))
    x = r * np.cos(theta)
    y = r * np.sin(theta)
    return math.fsum(np.hypot(np.diff(x), np.diff(y)))


def _covered_cells(centers: np.ndarray, rows: np.ndarray, scans: np.ndarray, eps: float) -> int:
    xs = centers[None, :]
    covered = np.zeros((rows.size, centers.size), dtype=bool)
    for sx, sy in scans:
        dx = xs - sx
        dy = rows[:, None] - sy
        covered |= np.sqrt(dx * dx + dy * dy) < eps
    return int(np.count_nonzero(covered))


def coverage_fraction_grid(schedule: ScanSchedule, epsilon: float, region: SurveillanceRegion,
                           k: int, workers: int = 1) -> float:
    """Fraction of the square within `epsilon` of at least one scan point.

    The square is cut into ``k x k`` equal cells and each cell counts as
    covered when its midpoint is strictly closer than `epsilon` to some scan.
    The midpoint rule has an error of order ``perimeter / k`` relative to
    the true covered-area fraction. Counts are exact integers, so the result
    does not depend on `workers`.
    """
    if not epsilon > 0:
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    if k < 1:
        raise InvalidArgument(f"grid resolution must be at least 1, got {k}")
    delta = region.delta
    h = 2.0 * delta / k
    centers = -delta + (np.arange(k) + 0.5) * h
    scans = schedule.as_array()
    # Bound the (rows x k) boolean scratch array to a few MB.
    chunk = max(1, 4_000_000 // k)
    blocks = [centers[i:i + chunk] for i in range(0, k, chunk)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda rows: _covered_cells(centers, rows, scans, epsilon), blocks))
    else:
        counts = [_covered_cells(centers, rows, scans, epsilon) for rows in blocks]
    return sum(counts) / (k * k)


def containment_check(schedule: ScanSchedule, epsilon: float, region: SurveillanceRegion) -> bool:
    """True when every scan disc lies inside the search square."""
    if not epsilon > 0:
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    return all(abs(p.x) + epsilon <= region.delta and abs(p.y) + epsilon <= region.delta
               for p in schedule.points)


def overlap_check(schedule: ScanSchedule | Sequence[Point2D], epsilon: float) -> bool:
    """True when no two scan discs share interior points.

    Discs that only touch (centre distance exactly ``2*epsilon``) count as
    non-overlapping.
    """
    if not epsilon > 0:
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    pts = schedule.points if isinstance(schedule, ScanSchedule) else tuple(schedule)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if euclidean_distance(p, q) < 2.0 * epsilon:
                return False
    return True
