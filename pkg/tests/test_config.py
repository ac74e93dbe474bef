import pytest

from scanplan.config import format_config, parse_config
from scanplan.errors import ConfigError
from scanplan.geometry import ExplicitWaypoints, Point2D, TwoLobeLemniscate
from scanplan.sonar import SonarParameters

BASE = "region.delta = 40\npath.type = lemniscate\npath.amplitude = 20\n"

FULL = """\
# everything
region.delta = 200   # half-width
path.type = waypoints
path.waypoints = -20 0, 20 0.5
mc.trials = 1234
mc.seed = 18446744073709551615
sonar.source_level_db = 240.5
sonar.rl_factor = 0.2
sweep.epsilon_min = 0
sweep.epsilon_max = 30
sweep.epsilon_steps = 31
sweep.scans = 5, 10,15
rule.ratio_squared = 0.05
rule.target = 0.7
rule.n_max = 40
mission.range_min = 1
mission.range_max = 400
mission.range_steps = 50
mission.scans = 20
"""


def test_basic_example():
    cfg = parse_config(BASE)
    assert cfg.region.delta == 40
    assert cfg.path == TwoLobeLemniscate(20)
    assert cfg.sweep is None and cfg.rule is None and cfg.mission is None
    assert cfg.sonar == SonarParameters()


def test_mc_keys():
    cfg = parse_config(BASE + "mc.trials = 100000\nmc.seed = 1\n")
    assert (cfg.mc.trials, cfg.mc.seed) == (100000, 1)


def test_full():
    cfg = parse_config(FULL)
    assert cfg.path == ExplicitWaypoints((Point2D(-20, 0), Point2D(20, 0.5)))
    assert cfg.mc.seed == 2**64 - 1
    assert cfg.sonar.source_level_db == 240.5 and cfg.sonar.frequency == 10.0
    assert cfg.sweep.scans == (5, 10, 15)
    assert cfg.sweep.epsilon_grid.steps == 31
    assert cfg.rule.n_max == 40
    assert cfg.mission.scans == (20,)


def test_empty_is_error():
    with pytest.raises(ConfigError, match="missing required key"):
        parse_config("")


@pytest.mark.parametrize("text, line", [
    (BASE + "bogus.key = 1\n", 4),
    (BASE + "mc.trials = many\n", 4),
    (BASE + "mc.trials = 0\n", 4),
    (BASE + "region.delta = 3\n", 4),
    ("region.delta = -1\npath.type = lemniscate\npath.amplitude = 20\n", 1),
    ("region.delta = 40\npath.type = spiral\n", 2),
    (BASE + "just some words\n", 4),
    (BASE + "sweep.scans = 5,,10\n", 4),
    (BASE + "sonar.frequency = -1\n", None),
    (BASE + "mc.trials =\n", 4),
    (BASE + "region.delta = nan\n", 4),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line


def test_incomplete_section():
    with pytest.raises(ConfigError, match="incomplete"):
        parse_config(BASE + "sweep.epsilon_min = 0\n")


def test_path_key_mismatch():
    with pytest.raises(ConfigError):
        parse_config("region.delta = 1\npath.type = waypoints\npath.amplitude = 2\n")
    with pytest.raises(ConfigError):
        parse_config("region.delta = 1\npath.type = lemniscate\n")


def test_require():
    with pytest.raises(ConfigError):
        parse_config(BASE).require("mission")


@pytest.mark.parametrize("text", [BASE, FULL, BASE + "sonar.absorption_override = 0\n"])
def test_round_trip(text):
    cfg = parse_config(text)
    assert parse_config(format_config(cfg)) == cfg
