"""Command line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 domain or numeric
error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import __version__
from .analytic import hit_probability_from_ratio, min_scans, rule_of_thumb_curve
from .config import MissionConfig, load_config
from .errors import ConfigError, ScanPlanError
from .montecarlo import MonteCarloConfig, sweep_detection
from .report import (build_concordance_bundle, concordance, concordance_json, emit_mission_csv,
                     emit_rule_csv, emit_se_curve_csv, emit_sweep_csv, format_concordance)
from .sonar import mission_report, se_curve


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p, config_required):
    p.add_argument("--config", required=config_required, metavar="PATH",
                   help="configuration file (key = value lines)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--seed", type=int, help="override mc.seed")
    p.add_argument("--trials", type=int, help="override mc.trials")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads; results do not depend on this")


def build_parser():
    parser = _Parser(prog="scanplan", description="Scan-count planning for cookie-cutter sensors.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("sweep", help="detection probability over an (epsilon, N) grid")
    _common(p, True)

    p = sub.add_parser("rule-of-thumb", help="minimum scan count from the closed-form rule")
    _common(p, False)
    p.add_argument("--ratio-squared", type=float, help="(epsilon/delta)^2")
    p.add_argument("--target", type=float, help="required detection probability")
    p.add_argument("--n-max", type=int, help="also print the curve for N = 1..n-max")
    p.add_argument("--curve", action="store_true", help="print the curve (needs --n-max or rule.n_max)")

    p = sub.add_parser("sonar-curve", help="signal excess against range")
    _common(p, True)

    p = sub.add_parser("mission", help="signal excess and detection probability against range")
    _common(p, True)

    p = sub.add_parser("concordance", help="compare computed values with published anchors")
    _common(p, False)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _mc(args, config: MissionConfig | None) -> MonteCarloConfig:
    mc = config.mc if config is not None else MonteCarloConfig()
    if args.trials is not None:
        mc = replace(mc, trials=args.trials)
    if args.seed is not None:
        mc = replace(mc, seed=args.seed)
    return mc


def _run(args) -> str:
    config = load_config(args.config) if args.config else None
    mc = _mc(args, config)
    workers = max(1, args.workers)

    if args.command == "sweep":
        s = config.require("sweep")
        grid = sweep_detection(config.path, s.scans, s.epsilon_grid, config.region,
                               config=mc, workers=workers)
        return emit_sweep_csv(grid)

    if args.command == "sonar-curve":
        m = config.require("mission")
        return emit_se_curve_csv(se_curve(config.sonar, m.range_grid))

    if args.command == "mission":
        m = config.require("mission")
        report = mission_report(config.sonar, config.path, config.region, m.scans,
                                m.range_grid, mc, workers=workers)
        return emit_mission_csv(report)

    if args.command == "rule-of-thumb":
        rule = config.rule if config is not None else None
        ratio = args.ratio_squared if args.ratio_squared is not None else (rule and rule.ratio_squared)
        target = args.target if args.target is not None else (rule and rule.target)
        n_max = args.n_max if args.n_max is not None else (rule and rule.n_max)
        if ratio is None or target is None:
            raise UsageError("rule-of-thumb needs --ratio-squared and --target (or a rule section)")
        q = hit_probability_from_ratio(ratio)
        out = f"q = {q:.6f}\nn_min = {min_scans(target, q)}\n"
        if args.curve or args.n_max is not None:
            if not n_max:
                raise UsageError("--curve needs --n-max or rule.n_max")
            out += emit_rule_csv(rule_of_thumb_curve(q, n_max))
        return out

    if args.command == "concordance":
        rows = concordance(build_concordance_bundle(mc, workers))
        return concordance_json(rows) if args.format == "json" else format_concordance(rows)

    raise UsageError(f"unknown command {args.command!r}")


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = _run(args)
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ScanPlanError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
