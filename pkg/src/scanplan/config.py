"""Flat ``key = value`` configuration files.

Example::

    # search square and path
    region.delta = 40
    path.type = lemniscate
    path.amplitude = 20

    mc.trials = 100000
    mc.seed = 1

    sweep.epsilon_min = 0
    sweep.epsilon_max = 30
    sweep.epsilon_steps = 31
    sweep.scans = 5, 10, 15, 20, 25

``#`` starts a comment, lists are comma separated and waypoints are written
as ``x y`` pairs (``path.waypoints = -20 0, 20 0``). ``region.delta`` and the
``path`` keys are always required. The ``sweep``, ``rule`` and ``mission``
sections are optional, but a section that is present must be complete.
Sonar keys default individually to :class:`~scanplan.sonar.SonarParameters`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError, ScanPlanError
from .geometry import ExplicitWaypoints, Point2D, SurveillancePath, SurveillanceRegion, TwoLobeLemniscate
from .montecarlo import EpsilonGrid, MonteCarloConfig
from .sonar import RangeGrid, SonarParameters

__all__ = [
    "SweepSettings",
    "RuleSettings",
    "MissionSettings",
    "MissionConfig",
    "parse_config",
    "load_config",
    "format_config",
]


@dataclass(frozen=True)
class SweepSettings:
    epsilon_grid: EpsilonGrid
    scans: tuple[int, ...]


@dataclass(frozen=True)
class RuleSettings:
    ratio_squared: float
    target: float
    n_max: int


@dataclass(frozen=True)
class MissionSettings:
    range_grid: RangeGrid
    scans: tuple[int, ...]


@dataclass(frozen=True)
class MissionConfig:
    region: SurveillanceRegion
    path: SurveillancePath
    mc: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    sonar: SonarParameters = field(default_factory=SonarParameters)
    sweep: SweepSettings | None = None
    rule: RuleSettings | None = None
    mission: MissionSettings | None = None

    def require(self, section: str):
        value = getattr(self, section)
        if value is None:
            raise ConfigError(f"configuration has no [{section}] settings (keys '{section}.*')")
        return value


def _float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"non-finite number {text!r}")
    return v


def _int(text):
    return int(text)


def _str(text):
    return text


def _int_list(text):
    items = [t.strip() for t in text.split(",")]
    if not items or any(not t for t in items):
        raise ValueError("empty list item")
    return tuple(int(t) for t in items)


def _points(text):
    pts = []
    for item in text.split(","):
        parts = item.split()
        if len(parts) != 2:
            raise ValueError(f"waypoint {item.strip()!r} is not an 'x y' pair")
        pts.append(Point2D(_float(parts[0]), _float(parts[1])))
    return tuple(pts)


_SONAR_KEYS = {f"sonar.{f.name}": _float for f in fields(SonarParameters)}

_KEYS = {
    "region.delta": _float,
    "path.type": _str,
    "path.amplitude": _float,
    "path.waypoints": _points,
    "mc.trials": _int,
    "mc.seed": _int,
    "sweep.epsilon_min": _float,
    "sweep.epsilon_max": _float,
    "sweep.epsilon_steps": _int,
    "sweep.scans": _int_list,
    "rule.ratio_squared": _float,
    "rule.target": _float,
    "rule.n_max": _int,
    "mission.range_min": _float,
    "mission.range_max": _float,
    "mission.range_steps": _int,
    "mission.scans": _int_list,
    **_SONAR_KEYS,
}

_SECTIONS = {
    "sweep": ("sweep.epsilon_min", "sweep.epsilon_max", "sweep.epsilon_steps", "sweep.scans"),
    "rule": ("rule.ratio_squared", "rule.target", "rule.n_max"),
    "mission": ("mission.range_min", "mission.range_max", "mission.range_steps", "mission.scans"),
}


def parse_config(text: str) -> MissionConfig:
    """Parse and validate configuration text.

    Raises :class:`ConfigError` carrying the offending line number for
    unknown keys, duplicate keys and malformed values, and without a line
    number for missing or inconsistent keys.
    """
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno)
        try:
            values[key] = _KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
        lines[key] = lineno

    def build(key, make):
        try:
            return make()
        except ScanPlanError as exc:
            raise ConfigError(str(exc), lines.get(key)) from None

    for key in ("region.delta", "path.type"):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    region = build("region.delta", lambda: SurveillanceRegion(values["region.delta"]))
    path = _build_path(values, lines, build)

    mc = build("mc.trials", lambda: MonteCarloConfig(
        trials=values.get("mc.trials", MonteCarloConfig.trials),
        seed=values.get("mc.seed", MonteCarloConfig.seed)))
    sonar = build("sonar", lambda: SonarParameters(
        **{k.split(".", 1)[1]: v for k, v in values.items() if k in _SONAR_KEYS}))

    present = {name: [k for k in keys if k in values] for name, keys in _SECTIONS.items()}
    for name, keys in _SECTIONS.items():
        if present[name] and len(present[name]) != len(keys):
            missing = [k for k in keys if k not in values]
            raise ConfigError(f"section '{name}' is incomplete; missing {', '.join(missing)}")

    sweep = rule = mission = None
    if present["sweep"]:
        sweep = SweepSettings(
            EpsilonGrid(values["sweep.epsilon_min"], values["sweep.epsilon_max"],
                        values["sweep.epsilon_steps"]),
            values["sweep.scans"])
        build("sweep.epsilon_steps", sweep.epsilon_grid.values)
        if sweep.epsilon_grid.min < 0 or sweep.epsilon_grid.max < sweep.epsilon_grid.min:
            raise ConfigError("sweep needs 0 <= epsilon_min <= epsilon_max", lines["sweep.epsilon_min"])
        _check_scans(sweep.scans, lines["sweep.scans"])
    if present["rule"]:
        rule = RuleSettings(values["rule.ratio_squared"], values["rule.target"], values["rule.n_max"])
        if not rule.ratio_squared > 0:
            raise ConfigError("rule.ratio_squared must be positive", lines["rule.ratio_squared"])
        if not 0 < rule.target < 1:
            raise ConfigError("rule.target must lie in (0, 1)", lines["rule.target"])
        if rule.n_max < 1:
            raise ConfigError("rule.n_max must be at least 1", lines["rule.n_max"])
    if present["mission"]:
        mission = MissionSettings(
            RangeGrid(values["mission.range_min"], values["mission.range_max"],
                      values["mission.range_steps"]),
            values["mission.scans"])
        build("mission.range_min", mission.range_grid.values)
        _check_scans(mission.scans, lines["mission.scans"])

    return MissionConfig(region, path, mc, sonar, sweep, rule, mission)


def _build_path(values, lines, build):
    kind = values["path.type"]
    if kind == "lemniscate":
        if "path.waypoints" in values:
            raise ConfigError("path.waypoints is not used by a lemniscate path", lines["path.waypoints"])
        if "path.amplitude" not in values:
            raise ConfigError("missing required key 'path.amplitude'")
        return build("path.amplitude", lambda: TwoLobeLemniscate(values["path.amplitude"]))
    if kind == "waypoints":
        if "path.amplitude" in values:
            raise ConfigError("path.amplitude is not used by a waypoint path", lines["path.amplitude"])
        if "path.waypoints" not in values:
            raise ConfigError("missing required key 'path.waypoints'")
        return ExplicitWaypoints(values["path.waypoints"])
    raise ConfigError(f"path.type must be 'lemniscate' or 'waypoints', got {kind!r}", lines["path.type"])


def _check_scans(scans, lineno):
    if any(n < 1 for n in scans):
        raise ConfigError("scan counts must be positive", lineno)


def load_config(path) -> MissionConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(config: MissionConfig) -> str:
    """Render `config` in the file format; ``parse_config`` reads it back unchanged."""
    out = [f"region.delta = {config.region.delta!r}"]
    if isinstance(config.path, TwoLobeLemniscate):
        out += ["path.type = lemniscate", f"path.amplitude = {config.path.amplitude!r}"]
    else:
        pts = ", ".join(f"{p.x!r} {p.y!r}" for p in config.path.points)
        out += ["path.type = waypoints", f"path.waypoints = {pts}"]
    out += [f"mc.trials = {config.mc.trials}", f"mc.seed = {config.mc.seed}"]
    for f in fields(SonarParameters):
        if getattr(config.sonar, f.name) is None:
            continue
        out.append(f"sonar.{f.name} = {getattr(config.sonar, f.name)!r}")
    if config.sweep is not None:
        g = config.sweep.epsilon_grid
        out += [f"sweep.epsilon_min = {g.min!r}", f"sweep.epsilon_max = {g.max!r}",
                f"sweep.epsilon_steps = {g.steps}",
                f"sweep.scans = {', '.join(map(str, config.sweep.scans))}"]
    if config.rule is not None:
        r = config.rule
        out += [f"rule.ratio_squared = {r.ratio_squared!r}", f"rule.target = {r.target!r}",
                f"rule.n_max = {r.n_max}"]
    if config.mission is not None:
        g = config.mission.range_grid
        out += [f"mission.range_min = {g.min!r}", f"mission.range_max = {g.max!r}",
                f"mission.range_steps = {g.steps}",
                f"mission.scans = {', '.join(map(str, config.mission.scans))}"]
    return "\n".join(out) + "\n"
