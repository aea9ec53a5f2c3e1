"""Command-line entry point.

Subcommands map one-to-one onto the experiment drivers:

    airytrain fieldmap      render winning-beam field maps + overlays
    airytrain heights       SE versus blockage height sweep
    airytrain montecarlo    random-blockage ensemble, SE versus overhead
    airytrain boundary-check  feasibility oracle suite (root + agreement)

On success the exit code is 0 and written paths are listed on stdout; on
failure a one-line JSON error object goes to stderr (exit 2 for bad
configuration or design errors, 1 for anything unexpected).
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ExperimentConfig, load_config
from .errors import AiryTrainError, ConfigError
from .experiments import (
    run_boundary_check,
    run_field_map,
    run_height_sweep,
    run_monte_carlo,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="airytrain",
        description="Curved-beam training experiments for blocked near-field links.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value config file (defaults are built in)")
        p.add_argument("--seed", type=int, help="override the RNG seed")
        p.add_argument("--out", help="override the output directory")
        p.add_argument(
            "--no-figures", action="store_true", help="write CSV/JSON only, skip PNGs"
        )

    p_field = sub.add_parser("fieldmap", help="field maps of each strategy's winner")
    add_common(p_field)
    p_field.add_argument("--strategies", help="comma list, e.g. nupc,fs1c,hfac")

    p_heights = sub.add_parser("heights", help="SE versus blockage height")
    add_common(p_heights)

    p_mc = sub.add_parser("montecarlo", help="random-blockage ensemble")
    add_common(p_mc)
    p_mc.add_argument("--strategies", help="comma list; focusing is always added")
    p_mc.add_argument("--scenarios", type=int, help="number of random scenarios")

    p_bc = sub.add_parser("boundary-check", help="feasibility oracle suite")
    add_common(p_bc)
    p_bc.add_argument(
        "--samples", type=int, default=1000, help="random waypoints for the agreement check"
    )
    return parser


def _load(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if getattr(args, "strategies", None):
        overrides["strategies"] = tuple(
            s.strip() for s in args.strategies.split(",") if s.strip()
        )
    if getattr(args, "scenarios", None) is not None:
        overrides["scenarios"] = args.scenarios
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        render = not args.no_figures
        if args.command == "fieldmap":
            paths = run_field_map(cfg, render=render)
        elif args.command == "heights":
            paths = run_height_sweep(cfg, render=render)
        elif args.command == "montecarlo":
            paths = run_monte_carlo(cfg, render=render)
        else:  # boundary-check
            result = run_boundary_check(cfg, samples=args.samples)
            for key in (
                "critical_x_root",
                "critical_x_closed_form",
                "relative_error",
                "residual",
                "agreement_rate",
                "max_disagreement_distance",
            ):
                print(f"{key} = {result[key]}")
            return 0
        for name, path in sorted(paths.items()):
            print(f"wrote {name}: {path}")
        return 0
    except (ConfigError, AiryTrainError, ValueError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error), file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
