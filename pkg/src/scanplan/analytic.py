"""Closed-form detection probability for non-overlapping, contained scan discs.

If every scan disc of radius ``eps`` lies inside the ``2*delta`` square, one
scan catches a uniformly placed threat with probability

    q = pi * eps**2 / (4 * delta**2)

and treating the N scans as independent gives ``1 - (1 - q)**N``. The rule
does not depend on the path, only on the ratio ``(eps/delta)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidArgument, UnreachableTarget

__all__ = [
    "RuleOfThumbCurve",
    "single_scan_hit_probability",
    "hit_probability_from_ratio",
    "analytic_detection_probability",
    "min_scans",
    "rule_of_thumb_curve",
]


@dataclass(frozen=True)
class RuleOfThumbCurve:
    q: float
    n_values: tuple[int, ...]
    probabilities: tuple[float, ...]

    def rows(self):
        return list(zip(self.n_values, self.probabilities))


def single_scan_hit_probability(epsilon: float, delta: float) -> float:
    if not epsilon > 0:
        raise InvalidArgument(f"epsilon must be positive, got {epsilon}")
    if not delta > 0:
        raise InvalidArgument(f"delta must be positive, got {delta}")
    q = math.pi * epsilon * epsilon / (4.0 * delta * delta)
    if q > 1.0:
        raise DomainError(f"disc of radius {epsilon} is larger than the {2 * delta} square "
                          f"(q = {q:.6g}); use the Monte Carlo estimator instead")
    return q


def hit_probability_from_ratio(ratio_squared: float) -> float:
    """Single-scan probability from ``rho = (eps/delta)**2``; valid for ``0 < rho <= 4/pi``."""
    if not ratio_squared > 0:
        raise InvalidArgument(f"ratio_squared must be positive, got {ratio_squared}")
    return single_scan_hit_probability(math.sqrt(ratio_squared), 1.0)


def analytic_detection_probability(q: float, n: int) -> float:
    if not 0.0 <= q <= 1.0:
        raise InvalidArgument(f"q must lie in [0, 1], got {q}")
    if n < 1:
        raise InvalidArgument(f"number of scans must be at least 1, got {n}")
    return 1.0 - (1.0 - q) ** n


def min_scans(p_target: float, q: float) -> int:
    """Smallest N with ``1 - (1 - q)**N >= p_target``.

    The logarithmic inversion is checked against direct evaluation so that
    rounding in the logs never shifts the answer by one.
    """
    if not 0.0 < p_target < 1.0:
        raise InvalidArgument(f"target probability must lie in (0, 1), got {p_target}")
    if not 0.0 <= q <= 1.0:
        raise InvalidArgument(f"q must lie in [0, 1], got {q}")
    if q == 0.0:
        raise UnreachableTarget("a scan that never detects cannot reach any target")
    if q == 1.0:
        return 1

    def prob(n):
        return analytic_detection_probability(q, n)

    n = max(1, math.ceil(math.log1p(-p_target) / math.log1p(-q)))
    while n > 1 and prob(n - 1) >= p_target:
        n -= 1
    while prob(n) < p_target:
        n += 1
    return n


def rule_of_thumb_curve(q: float, n_max: int) -> RuleOfThumbCurve:
    """Tabulate ``1 - (1 - q)**N`` for ``N = 1..n_max``."""
    if n_max < 1:
        raise InvalidArgument(f"n_max must be at least 1, got {n_max}")
    ns = tuple(range(1, n_max + 1))
    return RuleOfThumbCurve(q, ns, tuple(analytic_detection_probability(q, n) for n in ns))
