"""Parameter sweeps, optimal-split search and analytic-vs-MC validation.

The sweep CSV is a reproducibility contract: fixed column order, floats
written with repr (shortest round-trip form), empty cells where the Monte
Carlo column was skipped, and a deterministic per-point seed derived from the
configured base seed, so two runs of the same configuration are
byte-identical.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .analytics import (
    NumericsError,
    _load_moments,
    load_floor_leakage,
    optimal_eta,
    rate_cov_abs,
    rate_cov_sbs,
    rate_coverage,
)
from .config import ExperimentConfig
from .loads import clt_moments, gaussian_load_pmf, other_load_pmf, total_variation
from .params import Strategy, SystemParams, Tier
from .simulator import estimate_rate_coverage

CSV_COLUMNS = (
    "strategy",
    "eta",
    "W_hz",
    "m_bar",
    "rho_bps",
    "pr_analytical",
    "pr_m",
    "pr_s",
    "pr_mc",
    "mc_se",
    "quad_flag",
)

# Gaussian floor leakage above this mass is surfaced in quad_flag.
_LEAK_FLAG_LEVEL = 1e-4

# Convolution support cap above which the exact-load check is skipped.
_TV_SUPPORT_CAP = 10_000


@dataclass(frozen=True)
class SweepRecord:
    """One sweep point: the analytic split and, optionally, its MC estimate."""

    strategy: str
    eta: float
    w_hz: float
    m_bar: int
    rho_bps: float
    pr_analytical: float
    pr_m: float
    pr_s: float
    pr_mc: float | None
    mc_se: float | None
    quad_flag: str


def point_seed(base_seed: int, index: int) -> int:
    """Deterministic Monte-Carlo seed of sweep point `index`."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _evaluate_point(
    params: SystemParams,
    strategy: Strategy,
    rho: float,
) -> tuple[float, float, str]:
    try:
        moments = None if params.n == 1 else _load_moments(params)
        pr_m = rate_cov_abs(rho, params, moments)
        pr_s = rate_cov_sbs(rho, params, strategy, moments)
    except NumericsError:
        return math.nan, math.nan, "nan"
    leak = max(load_floor_leakage(params))
    flag = "ok" if leak <= _LEAK_FLAG_LEVEL else f"leak={leak:.2e}"
    return pr_m, pr_s, flag


def run_sweep(
    config: ExperimentConfig,
    out_path: str | Path | None = None,
    with_mc: bool = True,
    workers: int = 1,
    progress: Callable[[SweepRecord], None] | None = None,
) -> list[SweepRecord]:
    """Evaluate every configured point, in the fixed order strategy > W >
    m_bar > rho > eta, and optionally write the CSV."""
    records: list[SweepRecord] = []
    index = 0
    for strategy in config.strategy_list():
        for w_hz in config.w_hz_list():
            for m_bar in config.m_bars:
                for rho in config.rho_hz_list():
                    for eta in config.etas:
                        params = config.system_params(eta=eta, w_hz=w_hz, m_bar=m_bar)
                        pr_m, pr_s, flag = _evaluate_point(params, strategy, rho)
                        pr_mc = mc_se = None
                        if with_mc:
                            est = estimate_rate_coverage(
                                rho, params, strategy, seed=point_seed(config.seed, index), workers=workers
                            )
                            pr_mc, mc_se = est.value, est.se
                        record = SweepRecord(
                            strategy=strategy.value,
                            eta=float(eta),
                            w_hz=float(w_hz),
                            m_bar=int(m_bar),
                            rho_bps=float(rho),
                            pr_analytical=pr_m + pr_s,
                            pr_m=pr_m,
                            pr_s=pr_s,
                            pr_mc=pr_mc,
                            mc_se=mc_se,
                            quad_flag=flag,
                        )
                        records.append(record)
                        if progress is not None:
                            progress(record)
                        index += 1
    if out_path is not None:
        write_sweep_csv(records, out_path)
    return records


def write_sweep_csv(records: list[SweepRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(
                [
                    rec.strategy,
                    repr(rec.eta),
                    repr(rec.w_hz),
                    rec.m_bar,
                    repr(rec.rho_bps),
                    repr(rec.pr_analytical),
                    repr(rec.pr_m),
                    repr(rec.pr_s),
                    "" if rec.pr_mc is None else repr(rec.pr_mc),
                    "" if rec.mc_se is None else repr(rec.mc_se),
                    rec.quad_flag,
                ]
            )


@dataclass(frozen=True)
class OptimalEtaReport:
    strategy: str
    w_hz: float
    m_bar: int
    rho_bps: float
    eta_star: float
    pr_star: float
    pr_baseline: float
    gain: float


def find_optimal_eta(
    config: ExperimentConfig,
    strategy: Strategy,
    w_hz: float | None = None,
    m_bar: int | None = None,
    rho: float | None = None,
    grid_step: float = 0.05,
) -> OptimalEtaReport:
    """Best backhaul fraction for one configuration, with the macro-only
    baseline Pr(eta = 0) and the gain over it."""
    params = config.system_params(w_hz=w_hz, m_bar=m_bar)
    rho_hz = config.rho_mbps * 1e6 if rho is None else rho
    eta_star, pr_star = optimal_eta(rho_hz, params, strategy, grid_step=grid_step)
    baseline = rate_coverage(rho_hz, replace(params, eta=0.0), strategy)
    return OptimalEtaReport(
        strategy=strategy.value,
        w_hz=params.w,
        m_bar=params.m_bar,
        rho_bps=rho_hz,
        eta_star=eta_star,
        pr_star=pr_star,
        pr_baseline=baseline,
        gain=pr_star - baseline,
    )


@dataclass(frozen=True)
class ValidationRow:
    strategy: str
    eta: float
    w_hz: float
    m_bar: int
    rho_bps: float
    analytic: float
    mc: float
    se: float
    tolerance: float
    passed: bool
    insufficient: bool


@dataclass(frozen=True)
class ValidationReport:
    rows: list[ValidationRow]
    load_tv: float | None
    load_tv_passed: bool | None
    passed: bool


def validate(
    config: ExperimentConfig,
    workers: int = 1,
    sigmas: float = 3.0,
    slack: float = 0.005,
    se_gate: float = 0.02,
    tv_limit: float = 0.05,
    progress: Callable[[ValidationRow], None] | None = None,
) -> ValidationReport:
    """Check the closed forms against the simulator on the configured sweep.

    A point passes when |analytic - mc| <= sigmas * (se + slack); a point
    whose standard error exceeds se_gate is marked insufficient instead of
    failed. The Gaussian load model is additionally checked against the exact
    convolution in total variation when the support is small enough.
    """
    rows: list[ValidationRow] = []
    index = 0
    for strategy in config.strategy_list():
        for w_hz in config.w_hz_list():
            for m_bar in config.m_bars:
                for rho in config.rho_hz_list():
                    for eta in config.etas:
                        params = config.system_params(eta=eta, w_hz=w_hz, m_bar=m_bar)
                        analytic = rate_coverage(rho, params, strategy)
                        est = estimate_rate_coverage(
                            rho, params, strategy, seed=point_seed(config.seed, index), workers=workers
                        )
                        tol = sigmas * (est.se + slack)
                        insufficient = est.se > se_gate
                        passed = abs(analytic - est.value) <= tol
                        row = ValidationRow(
                            strategy=strategy.value,
                            eta=float(eta),
                            w_hz=float(w_hz),
                            m_bar=int(m_bar),
                            rho_bps=float(rho),
                            analytic=analytic,
                            mc=est.value,
                            se=est.se,
                            tolerance=tol,
                            passed=passed,
                            insufficient=insufficient,
                        )
                        rows.append(row)
                        if progress is not None:
                            progress(row)
                        index += 1

    load_tv = None
    load_tv_passed = None
    params = config.system_params()
    if params.n >= 2 and (params.n - 1) * params.m_bar <= _TV_SUPPORT_CAP:
        mom = clt_moments(params)
        tvs = []
        for tier in (Tier.ABS, Tier.SBS):
            exact = other_load_pmf(params, tier)
            approx = gaussian_load_pmf(params, tier)
            tvs.append(total_variation(exact, approx))
        load_tv = max(tvs)
        load_tv_passed = load_tv < tv_limit and mom.variance_abs == mom.variance_sbs

    overall = all(r.passed or r.insufficient for r in rows)
    if load_tv_passed is not None:
        overall = overall and load_tv_passed
    return ValidationReport(rows=rows, load_tv=load_tv, load_tv_passed=load_tv_passed, passed=overall)
