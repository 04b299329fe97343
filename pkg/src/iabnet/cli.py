"""Command line front end.

Precedence for every setting: explicit flag, then config file, then the
built-in defaults. Exit codes: 0 success (and validation pass), 1 validation
failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .analytics import CoverageThresholds, coverage_probability, load_floor_leakage
from .config import ConfigError, ExperimentConfig, load_config
from .loads import clt_moments, gaussian_load_pmf, other_load_pmf, total_variation
from .params import Strategy, Tier
from .simulator import estimate_coverage, sample_other_load
from .sweep import find_optimal_eta, run_sweep, validate


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="YAML configuration file")
    parser.add_argument("--seed", type=int, default=None, help="base Monte-Carlo seed")
    parser.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials per point")
    parser.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    parser.add_argument("--eta", type=float, default=None, help="backhaul fraction of the band")
    parser.add_argument("--w-mhz", type=float, default=None, help="total bandwidth, MHz")
    parser.add_argument("--m-bar", type=int, default=None, help="users per hotspot")
    parser.add_argument("--n", type=int, default=None, help="number of hotspots")
    parser.add_argument("--rho-mbps", type=float, default=None, help="target rate, Mbit/s")


_SCALAR_OVERRIDES = {
    "seed": "seed",
    "trials": "trials",
    "eta": "eta",
    "w_mhz": "w_mhz",
    "m_bar": "m_bar",
    "n": "n",
    "rho_mbps": "rho_mbps",
}


def _load(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for arg_name, field in _SCALAR_OVERRIDES.items():
        value = getattr(args, arg_name, None)
        if value is not None:
            overrides[field] = value
    for list_arg, field, cast in (
        ("etas", "etas", float),
        ("w_mhz_sweep", "w_mhz_sweep", float),
        ("m_bars", "m_bars", int),
        ("rhos_mbps", "rhos_mbps", float),
        ("strategies", "strategies", str),
    ):
        raw = getattr(args, list_arg, None)
        if raw is not None:
            try:
                overrides[field] = tuple(cast(v) for v in raw.split(","))
            except ValueError as exc:
                raise ConfigError(f"could not parse --{list_arg.replace('_', '-')}: {exc}") from exc
    return dataclasses.replace(config, **overrides)


def _strategies(args: argparse.Namespace, config: ExperimentConfig) -> list[Strategy]:
    if getattr(args, "strategy", None) and args.strategy != "both":
        return [Strategy(args.strategy)]
    return config.strategy_list()


def cmd_coverage(args: argparse.Namespace) -> int:
    config = _load(args)
    params = config.system_params()
    thresholds = CoverageThresholds(args.theta1, args.theta2, args.theta3)
    analytic = coverage_probability(thresholds, params)
    print(f"thresholds (linear): backhaul={args.theta1} sbs={args.theta2} abs={args.theta3}")
    print(f"coverage analytic: {analytic:.6f}")
    if args.mc:
        est = estimate_coverage(thresholds, params, seed=config.seed, workers=args.workers)
        print(f"coverage mc:       {est.value:.6f} (se {est.se:.6f}, {est.trials} trials)")
        print(f"difference:        {abs(analytic - est.value):.6f}")
    return 0


def cmd_rate_sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    out = args.out if args.out is not None else Path(args.out_dir) / "sweep.csv"
    out.parent.mkdir(parents=True, exist_ok=True)

    def progress(rec):
        mc = "" if rec.pr_mc is None else f" mc={rec.pr_mc:.5f}+-{rec.mc_se:.5f}"
        print(
            f"{rec.strategy:10s} eta={rec.eta:.3f} W={rec.w_hz / 1e6:6.0f}MHz m_bar={rec.m_bar:3d} "
            f"rho={rec.rho_bps / 1e6:5.0f}Mbps pr={rec.pr_analytical:.5f}{mc} [{rec.quad_flag}]"
        )

    run_sweep(config, out_path=out, with_mc=not args.no_mc, workers=args.workers, progress=progress)
    print(f"wrote {out}")
    return 0


def cmd_optimal_eta(args: argparse.Namespace) -> int:
    config = _load(args)
    for strategy in _strategies(args, config):
        report = find_optimal_eta(config, strategy, grid_step=args.grid_step)
        print(
            f"{report.strategy:10s} W={report.w_hz / 1e6:6.0f}MHz m_bar={report.m_bar:3d} "
            f"rho={report.rho_bps / 1e6:5.0f}Mbps eta*={report.eta_star:.4f} pr*={report.pr_star:.5f} "
            f"baseline={report.pr_baseline:.5f} gain={report.gain:+.5f}"
        )
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    config = _load(args)

    def progress(row):
        status = "insufficient" if row.insufficient else ("ok" if row.passed else "FAIL")
        print(
            f"{status:12s} {row.strategy:10s} eta={row.eta:.3f} W={row.w_hz / 1e6:6.0f}MHz "
            f"m_bar={row.m_bar:3d} analytic={row.analytic:.5f} mc={row.mc:.5f} "
            f"|diff|={abs(row.analytic - row.mc):.5f} tol={row.tolerance:.5f}"
        )

    report = validate(config, workers=args.workers, sigmas=args.sigmas, slack=args.slack, progress=progress)
    if report.load_tv is not None:
        status = "ok" if report.load_tv_passed else "FAIL"
        print(f"{status:12s} load model: max total variation {report.load_tv:.5f}")
    print("VALIDATION PASSED" if report.passed else "VALIDATION FAILED")
    return 0 if report.passed else 1


def cmd_load_dist(args: argparse.Namespace) -> int:
    config = _load(args)
    params = config.system_params()
    if params.n < 2:
        print("single hotspot: the other-hotspot load is identically 0")
        return 0
    mom = clt_moments(params)
    print(f"gaussian model: abs mean={mom.mean_abs:.4f} sbs mean={mom.mean_sbs:.4f} variance={mom.variance_abs:.4f}")
    leak_abs, leak_sbs = load_floor_leakage(params)
    print(f"floor leakage: abs={leak_abs:.3e} sbs={leak_sbs:.3e}")
    tiers = {"abs": [Tier.ABS], "sbs": [Tier.SBS], "both": [Tier.ABS, Tier.SBS]}[args.tier]
    for tier in tiers:
        exact = other_load_pmf(params, tier)
        approx = gaussian_load_pmf(params, tier)
        tv = total_variation(exact, approx)
        line = (
            f"{tier.value}: exact mean={exact.mean():.4f} var={exact.variance():.4f} "
            f"tv(exact, gaussian)={tv:.5f}"
        )
        if args.mc:
            rng = np.random.Generator(np.random.Philox(config.seed))
            trials = config.trials
            samples = sample_other_load(params, tier, rng, trials)
            line += f" mc mean={samples.mean():.4f} var={samples.var(ddof=1):.4f} ({trials} samples)"
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iabnet",
        description="Rate coverage analysis of a self-backhauled mmWave hotspot network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cov = sub.add_parser("coverage", help="SNR coverage probability at fixed thresholds")
    _add_common(p_cov)
    p_cov.add_argument("--theta1", type=float, default=1.0, help="backhaul SNR threshold, linear")
    p_cov.add_argument("--theta2", type=float, default=1.0, help="SBS access SNR threshold, linear")
    p_cov.add_argument("--theta3", type=float, default=1.0, help="ABS access SNR threshold, linear")
    p_cov.add_argument("--mc", action="store_true", help="also run the Monte-Carlo estimator")
    p_cov.set_defaults(func=cmd_coverage)

    p_sweep = sub.add_parser("rate-sweep", help="rate coverage over the configured sweep, to CSV")
    _add_common(p_sweep)
    p_sweep.add_argument("--etas", type=str, default=None, help="comma-separated backhaul fractions")
    p_sweep.add_argument("--w-mhz-sweep", type=str, default=None, help="comma-separated bandwidths, MHz")
    p_sweep.add_argument("--m-bars", type=str, default=None, help="comma-separated users per hotspot")
    p_sweep.add_argument("--rhos-mbps", type=str, default=None, help="comma-separated target rates, Mbit/s")
    p_sweep.add_argument("--strategies", type=str, default=None, help="comma-separated partition strategies")
    p_sweep.add_argument("--no-mc", action="store_true", help="skip the Monte-Carlo column")
    p_sweep.add_argument("--out", type=Path, default=None, help="output CSV path")
    p_sweep.add_argument("--out-dir", type=Path, default=Path("."), help="directory for the default CSV name")
    p_sweep.set_defaults(func=cmd_rate_sweep)

    p_opt = sub.add_parser("optimal-eta", help="maximize rate coverage over the backhaul fraction")
    _add_common(p_opt)
    p_opt.add_argument("--strategy", choices=[s.value for s in Strategy] + ["both"], default="both")
    p_opt.add_argument("--grid-step", type=float, default=0.05, help="coarse search step in eta")
    p_opt.set_defaults(func=cmd_optimal_eta)

    p_val = sub.add_parser("validate", help="check the closed forms against the simulator")
    _add_common(p_val)
    p_val.add_argument("--etas", type=str, default=None, help="comma-separated backhaul fractions")
    p_val.add_argument("--w-mhz-sweep", type=str, default=None, help="comma-separated bandwidths, MHz")
    p_val.add_argument("--m-bars", type=str, default=None, help="comma-separated users per hotspot")
    p_val.add_argument("--rhos-mbps", type=str, default=None, help="comma-separated target rates, Mbit/s")
    p_val.add_argument("--strategies", type=str, default=None, help="comma-separated partition strategies")
    p_val.add_argument("--sigmas", type=float, default=3.0, help="tolerance multiplier")
    p_val.add_argument("--slack", type=float, default=0.005, help="absolute tolerance added to the SE")
    p_val.set_defaults(func=cmd_validate)

    p_load = sub.add_parser("load-dist", help="exact vs Gaussian model of the other-hotspot load")
    _add_common(p_load)
    p_load.add_argument("--tier", choices=["abs", "sbs", "both"], default="both")
    p_load.add_argument("--mc", action="store_true", help="also sample the load distribution")
    p_load.set_defaults(func=cmd_load_dist)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
