"""Command-line front end over the harness.

Subcommands: run, sweep, landscape, compare, config.  Results land in the
requested files/directories; a short JSON summary goes to stdout.  Any
failure prints a machine-readable JSON object to stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import ParamBelief
from .fisher import FisherEngine
from .harness import (
    compare_baseline,
    default_landscape_axes,
    emit_landscape,
    run_active_learning,
    run_robustness_sweep,
)
from .planner import PlannerConfig
from .scenarios import KINDS, make_scenario, scenario_config

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="contactlearn",
        description="Active learning of contact parameters from force measurements",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, with_engine=True):
        sp.add_argument("--scenario", required=True, choices=KINDS)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--kmax", type=int, default=10)
        if with_engine:
            sp.add_argument(
                "--engine", choices=("contact-aware", "baseline"), default="contact-aware"
            )
            sp.add_argument("--fd-step", type=float, default=1.0e-4)
        sp.add_argument("--noise-std", type=float, default=0.25)
        sp.add_argument("--horizon", type=int, default=10)
        sp.add_argument("--samples", type=int, default=10)

    sp = sub.add_parser("run", help="one closed-loop active learning run")
    add_common(sp)
    sp.add_argument("--out", required=True, help="run directory to create")
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("sweep", help="repeat the loop from several priors")
    add_common(sp)
    sp.add_argument("--priors", help="JSON file with prior modes", default=None)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("landscape", help="single-step information grid as CSV")
    sp.add_argument("--scenario", required=True, choices=KINDS)
    sp.add_argument("--axes", default=None, help="comma pair, e.g. phi_n,v_n")
    sp.add_argument("--res", type=int, default=41)
    sp.add_argument("--out", required=True, help="CSV file to write")
    sp.set_defaults(func=_cmd_landscape)

    sp = sub.add_parser("compare", help="paired contact-aware vs finite-difference runs")
    sp.add_argument("--scenario", required=True, choices=KINDS)
    sp.add_argument("--seeds", type=int, default=20)
    sp.add_argument("--kmax", type=int, default=10)
    sp.add_argument("--fd-step", type=float, default=1.0e-4)
    sp.add_argument("--noise-std", type=float, default=0.25)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("config", help="dump scenario configuration")
    sp.add_argument("--dump", action="store_true", required=True)
    sp.add_argument("--scenario", choices=KINDS, default=None)
    sp.set_defaults(func=_cmd_config)

    return p


def _scenario_from(args):
    return make_scenario(args.scenario, noise_std=args.noise_std)


def _planner_from(args) -> PlannerConfig:
    return PlannerConfig(horizon=args.horizon, num_samples=args.samples)


def _cmd_run(args) -> int:
    scenario = _scenario_from(args)
    engine = FisherEngine(args.engine, args.fd_step)
    record = run_active_learning(
        scenario,
        seed=args.seed,
        k_max=args.kmax,
        engine=engine,
        planner_cfg=_planner_from(args),
        out_dir=args.out,
    )
    print(
        json.dumps(
            {
                "out": args.out,
                "theta_hat": {
                    p: float(v)
                    for p, v in zip(scenario.model.param_names, record.theta_hat[-1])
                },
                "pct_err": {
                    p: float(v)
                    for p, v in zip(scenario.model.param_names, record.pct_err[-1])
                },
            }
        )
    )
    return 0


def _load_priors(path: str, scenario) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    modes = raw["modes"] if isinstance(raw, dict) else raw
    priors = []
    for m in modes:
        mode = scenario.prior.mode.replace_values(np.asarray(m, dtype=float))
        priors.append(ParamBelief(mode, scenario.prior.covariance, scenario.prior.support))
    return priors


def _cmd_sweep(args) -> int:
    scenario = _scenario_from(args)
    priors = _load_priors(args.priors, scenario) if args.priors else None
    engine = FisherEngine(args.engine, args.fd_step)
    records = run_robustness_sweep(
        scenario,
        priors,
        seed=args.seed,
        k_max=args.kmax,
        engine=engine,
        planner_cfg=_planner_from(args),
        out_dir=args.out,
    )
    print(json.dumps({"out": args.out, "n_priors": len(records)}))
    return 0


def _cmd_landscape(args) -> int:
    scenario = make_scenario(args.scenario)
    axes = tuple(args.axes.split(",")) if args.axes else default_landscape_axes(args.scenario)
    grid = emit_landscape(scenario, axes=axes, resolution=args.res, out=args.out)
    print(json.dumps({"out": args.out, "axes": list(grid["axes"]), "res": args.res}))
    return 0


def _cmd_compare(args) -> int:
    scenario = make_scenario(args.scenario, noise_std=args.noise_std)
    report = compare_baseline(
        scenario,
        n_seeds=args.seeds,
        k_max=args.kmax,
        fd_step=args.fd_step,
        out_dir=args.out,
    )
    report.pop("records", None)
    print(json.dumps(report))
    return 0


def _cmd_config(args) -> int:
    kinds = [args.scenario] if args.scenario else list(KINDS)
    out = {k: scenario_config(make_scenario(k)) for k in kinds}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args) or 0)
    except Exception as exc:  # surface every failure as machine-readable JSON
        print(
            json.dumps({"error": str(exc), "type": type(exc).__name__}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
