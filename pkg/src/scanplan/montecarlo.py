"""Seeded Monte Carlo estimates of the probability that a scan detects the threat.

Random numbers
--------------
Every estimate draws from numpy's PCG64 generator. The stream for a block of
trials is seeded with ``SeedSequence(seed, spawn_key=stream + (block,))``,
where ``stream`` is a tuple of non-negative integers naming the estimate
(empty for a standalone call, ``(eps_index, n_index)`` for a sweep cell,
``(row_index, n_index)`` for a mission-report cell). ``SeedSequence`` hashes
the seed and spawn key together, so streams for different cells and blocks
are statistically independent and can be generated in any order.

Trials are split into blocks of :data:`BLOCK_SIZE`; each block yields an
integer hit count and the counts are summed. Results therefore depend only on
``(inputs, seed, stream)`` and never on how many threads do the work.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidArgument
from .geometry import (Point2D, ScanSchedule, SurveillancePath, SurveillanceRegion,
                       build_schedule, euclidean_distance)

__all__ = [
    "BLOCK_SIZE",
    "UniformInRegion",
    "FixedPoint",
    "ThreatPrior",
    "MonteCarloConfig",
    "DetectionEstimate",
    "EpsilonGrid",
    "SweepGrid",
    "block_generator",
    "is_detected",
    "sample_threat",
    "estimate_detection_probability",
    "sweep_detection",
]

BLOCK_SIZE = 4096
_MAX_SEED = 2**64


@dataclass(frozen=True)
class UniformInRegion:
    """Threat uniformly distributed over the search square."""


@dataclass(frozen=True)
class FixedPoint:
    """Threat at a known location; mostly useful in tests."""

    point: Point2D


ThreatPrior = Union[UniformInRegion, FixedPoint]


@dataclass(frozen=True)
class MonteCarloConfig:
    trials: int = 100_000
    seed: int = 0
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidArgument(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed < _MAX_SEED:
            raise InvalidArgument(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if any(s < 0 for s in self.stream):
            raise InvalidArgument(f"stream indices must be non-negative, got {self.stream}")

    def substream(self, *indices: int) -> "MonteCarloConfig":
        return replace(self, stream=self.stream + tuple(indices))


@dataclass(frozen=True)
class DetectionEstimate:
    p_hat: float
    std_err: float
    trials: int
    detected: int
    seed: int
    epsilon: float
    n_scans: int
    stream: tuple[int, ...] = ()

    @classmethod
    def from_counts(cls, detected, config, epsilon, n_scans):
        p = detected / config.trials
        return cls(p, math.sqrt(p * (1.0 - p) / config.trials), config.trials, detected,
                   config.seed, epsilon, n_scans, config.stream)


class EpsilonGrid(NamedTuple):
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        if self.steps < 1:
            raise InvalidArgument(f"epsilon grid needs at least one step, got {self.steps}")
        if self.steps == 1:
            return np.array([float(self.min)])
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SweepGrid:
    """Detection estimates indexed by ``[eps_index][n_index]``."""

    epsilon_values: tuple[float, ...]
    n_values: tuple[int, ...]
    estimates: tuple[tuple[DetectionEstimate, ...], ...] = field(repr=False)

    def __post_init__(self):
        if len(self.estimates) != len(self.epsilon_values) or any(
                len(row) != len(self.n_values) for row in self.estimates):
            raise InvalidArgument("estimate matrix does not match the sweep axes")

    def p_hat(self) -> np.ndarray:
        return np.array([[e.p_hat for e in row] for row in self.estimates])

    def std_err(self) -> np.ndarray:
        return np.array([[e.std_err for e in row] for row in self.estimates])

    def cell(self, epsilon: float, n: int) -> DetectionEstimate:
        j = self.n_values.index(n)
        for i, eps in enumerate(self.epsilon_values):
            if math.isclose(eps, epsilon, rel_tol=1e-9, abs_tol=1e-12):
                return self.estimates[i][j]
        raise KeyError(f"no sweep cell at epsilon={epsilon}")


def block_generator(config: MonteCarloConfig, block: int) -> np.random.Generator:
    """Generator for trial block `block` of the estimate named by `config`."""
    ss = np.random.SeedSequence(config.seed, spawn_key=config.stream + (block,))
    return np.random.Generator(np.random.PCG64(ss))


def is_detected(schedule: ScanSchedule, epsilon: float, threat: Point2D) -> bool:
    """True when some scan point is strictly closer than `epsilon` to the threat."""
    if not epsilon > 0:
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    return any(euclidean_distance(p, threat) < epsilon for p in schedule.points)


def sample_threat(prior: ThreatPrior, region: SurveillanceRegion,
                  rng: np.random.Generator) -> Point2D:
    """Draw one threat location.

    Uses two uniform draws ``u1, u2`` mapped to ``-delta + 2*delta*u``, in the
    same order the vectorised estimator consumes them.
    """
    if isinstance(prior, FixedPoint):
        return prior.point
    u1, u2 = rng.random(2)
    d = region.delta
    return Point2D(-d + 2.0 * d * u1, -d + 2.0 * d * u2)


def _block_hits(scans, epsilon, region, prior, config, block, size):
    if isinstance(prior, FixedPoint):
        p = prior.point
        dx = scans[:, 0] - p.x
        dy = scans[:, 1] - p.y
        return size if bool(np.any(np.sqrt(dx * dx + dy * dy) < epsilon)) else 0
    d = region.delta
    u = block_generator(config, block).random((size, 2))
    tx = -d + 2.0 * d * u[:, 0]
    ty = -d + 2.0 * d * u[:, 1]
    hit = np.zeros(size, dtype=bool)
    for sx, sy in scans:
        dx = tx - sx
        dy = ty - sy
        hit |= np.sqrt(dx * dx + dy * dy) < epsilon
    return int(np.count_nonzero(hit))


def estimate_detection_probability(schedule: ScanSchedule, epsilon: float,
                                   region: SurveillanceRegion,
                                   prior: ThreatPrior | None = None,
                                   config: MonteCarloConfig | None = None,
                                   workers: int = 1) -> DetectionEstimate:
    """Estimate the probability that at least one scan detects the threat.

    Each trial samples a threat location from `prior` and counts a detection
    when any scan lies strictly within `epsilon`. This is the probability of
    the union of the scan discs, which is exact under the uniform prior
    whether or not the discs overlap.

    ``epsilon == 0`` returns probability 0 without sampling.
    """
    prior = UniformInRegion() if prior is None else prior
    config = MonteCarloConfig() if config is None else config
    if epsilon < 0 or not math.isfinite(epsilon):
        raise InvalidArgument(f"epsilon must be non-negative and finite, got {epsilon}")
    if isinstance(prior, FixedPoint) and not region.contains(prior.point):
        raise InvalidArgument("fixed threat location lies outside the region")
    if epsilon == 0:
        return DetectionEstimate.from_counts(0, config, 0.0, schedule.n_scans)

    scans = schedule.as_array()
    n_blocks = -(-config.trials // BLOCK_SIZE)
    sizes = [BLOCK_SIZE] * (n_blocks - 1) + [config.trials - BLOCK_SIZE * (n_blocks - 1)]

    def run(b):
        return _block_hits(scans, epsilon, region, prior, config, b, sizes[b])

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, range(n_blocks)))
    else:
        hits = sum(run(b) for b in range(n_blocks))
    return DetectionEstimate.from_counts(hits, config, float(epsilon), schedule.n_scans)


def sweep_detection(path: SurveillancePath, n_values: Sequence[int],
                    epsilon_grid: EpsilonGrid | Sequence[float],
                    region: SurveillanceRegion, prior: ThreatPrior | None = None,
                    config: MonteCarloConfig | None = None, workers: int = 1,
                    common_random_numbers: bool = False) -> SweepGrid:
    """Estimate detection probability over an (epsilon, N) grid.

    Cell ``(i, j)`` uses the stream ``config.stream + (i, j)``. With
    `common_random_numbers` every epsilon in a column shares the stream
    ``config.stream + (0, j)``, so the same threat samples are reused and the
    column is exactly monotone in epsilon.
    """
    config = MonteCarloConfig() if config is None else config
    if isinstance(epsilon_grid, EpsilonGrid):
        eps_values = [float(e) for e in epsilon_grid.values()]
    else:
        eps_values = [float(e) for e in epsilon_grid]
    n_values = [int(n) for n in n_values]
    if not eps_values or not n_values:
        raise InvalidArgument("sweep needs at least one epsilon and one scan count")
    if any(e < 0 for e in eps_values):
        raise InvalidArgument("epsilon values must be non-negative")
    schedules = [build_schedule(path, n) for n in n_values]

    cells = [(i, j) for i in range(len(eps_values)) for j in range(len(n_values))]

    def run(cell):
        i, j = cell
        cfg = config.substream(0 if common_random_numbers else i, j)
        return estimate_detection_probability(schedules[j], eps_values[i], region, prior, cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(run, cells))
    else:
        flat = [run(c) for c in cells]
    m = len(n_values)
    rows = tuple(tuple(flat[i * m:(i + 1) * m]) for i in range(len(eps_values)))
    return SweepGrid(tuple(eps_values), tuple(n_values), rows)
