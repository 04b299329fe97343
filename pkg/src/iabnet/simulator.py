"""Monte-Carlo counterpart of the analytical expressions.

Two layers: full network snapshots (realize / rate_report) for inspection and
semantics tests, and a vectorized typical-user estimator used for validation.
The estimator draws in a fixed order within fixed-size chunks seeded from a
spawned SeedSequence, so estimates depend only on (seed, trials, chunk_size),
never on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytics import CoverageThresholds
from .geometry import MIN_LINK_DISTANCE
from .params import Strategy, SystemParams

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Estimate:
    """A Monte-Carlo probability estimate with its standard error."""

    value: float
    se: float
    trials: int

    def agrees_with(self, reference: float, sigmas: float = 3.0, slack: float = 0.0) -> bool:
        return abs(self.value - reference) <= sigmas * (self.se + slack)


def _estimate(successes: int, trials: int) -> Estimate:
    p = successes / trials
    return Estimate(p, math.sqrt(p * (1.0 - p) / trials), trials)


# ---------------------------------------------------------------------------
# network snapshots


@dataclass(frozen=True)
class NetworkRealization:
    """One drop of hotspot centres and users, association already resolved."""

    center_radius: np.ndarray   # (n,)
    center_angle: np.ndarray    # (n,)
    offset: np.ndarray          # (n, m_bar) user distance to own SBS
    offset_angle: np.ndarray    # (n, m_bar) angle to the macro direction
    kappa: np.ndarray           # (n, m_bar) user distance to the macro BS
    sbs_mask: np.ndarray        # (n, m_bar) True where the SBS wins

    @property
    def sbs_loads(self) -> np.ndarray:
        return self.sbs_mask.sum(axis=1)

    @property
    def abs_load(self) -> int:
        return int((~self.sbs_mask).sum())


def realize(params: SystemParams, rng: np.random.Generator) -> NetworkRealization:
    n, m_bar = params.n, params.m_bar
    center_radius = (params.r - params.r_s) * np.sqrt(rng.random(n))
    center_angle = TWO_PI * (1.0 - rng.random(n))
    offset = np.maximum(params.r_s * np.sqrt(rng.random((n, m_bar))), MIN_LINK_DISTANCE)
    offset_angle = TWO_PI * (1.0 - rng.random((n, m_bar)))
    kappa = _law_of_cosines(center_radius[:, None], offset, offset_angle)
    sbs_mask = offset < params.k_p * kappa
    return NetworkRealization(center_radius, center_angle, offset, offset_angle, kappa, sbs_mask)


def _law_of_cosines(x, u, xi):
    return np.sqrt(x * x + u * u + 2.0 * x * u * np.cos(xi))


def _draw_snr(rng, distance, power, antenna_gain, params: SystemParams):
    """SNR over the full band for each link, drawing blockage and fading.

    Both fading branches are drawn regardless of the blockage outcome so the
    stream layout stays fixed.
    """
    d = np.asarray(distance, dtype=float)
    los = rng.random(d.shape) < np.exp(-d / params.mu)
    gain_l = rng.gamma(params.m_los, 1.0 / params.m_los, d.shape)
    gain_n = rng.gamma(params.m_nlos, 1.0 / params.m_nlos, d.shape)
    fading = np.where(los, gain_l, gain_n)
    exponent = np.where(los, params.alpha_los, params.alpha_nlos)
    return power * antenna_gain * fading / (params.beta * d**exponent * params.noise_w)


def rate_report(
    real: NetworkRealization,
    params: SystemParams,
    strategy: Strategy,
    rng: np.random.Generator,
) -> np.ndarray:
    """Downlink rate of every user in the snapshot; shape (n, m_bar).

    SBS users share one backhaul SNR draw per hotspot; each user gets an
    equal time share of its server, and an SBS-served rate is the lower of
    the access and backhaul shares.
    """
    gain = params.gain
    snr_backhaul = _draw_snr(rng, real.center_radius, params.p_m, gain * gain, params)
    distance = np.where(real.sbs_mask, real.offset, real.kappa)
    power = np.where(real.sbs_mask, params.p_s, params.p_m)
    snr_access = _draw_snr(rng, distance, power, gain, params)

    spectral = np.log2(1.0 + snr_access)
    rates = np.zeros_like(spectral)

    abs_load = real.abs_load
    if abs_load > 0:
        rates[~real.sbs_mask] = (params.w_a / abs_load) * spectral[~real.sbs_mask]

    loads = real.sbs_loads
    total_sbs = int(loads.sum())
    for i in range(params.n):
        if loads[i] == 0:
            continue
        if strategy is Strategy.EQUAL:
            w_s = params.w_b / params.n
        else:
            w_s = params.w_b * loads[i] / total_sbs
        share = w_s / loads[i]
        backhaul_rate = share * math.log2(1.0 + snr_backhaul[i])
        mask = real.sbs_mask[i]
        access_rate = (params.w_a / loads[i]) * spectral[i, mask]
        rates[i, mask] = np.minimum(access_rate, backhaul_rate)
    return rates


def user_rate(
    real: NetworkRealization,
    hotspot: int,
    user: int,
    params: SystemParams,
    strategy: Strategy,
    rng: np.random.Generator,
) -> float:
    """Rate of one user of the snapshot, drawing only that user's links.

    Draws backhaul before access, like rate_report, so the two paths agree
    draw for draw on a single-SBS single-user snapshot.
    """
    if real.sbs_mask[hotspot, user]:
        snr_bh = _draw_snr(rng, np.array([real.center_radius[hotspot]]), params.p_m, params.gain**2, params)
        snr_acc = _draw_snr(rng, np.array([real.offset[hotspot, user]]), params.p_s, params.gain, params)
        load = int(real.sbs_loads[hotspot])
        if strategy is Strategy.EQUAL:
            w_s = params.w_b / params.n
        else:
            w_s = params.w_b * load / int(real.sbs_loads.sum())
        return min(
            (params.w_a / load) * math.log2(1.0 + float(snr_acc[0])),
            (w_s / load) * math.log2(1.0 + float(snr_bh[0])),
        )
    snr_acc = _draw_snr(rng, np.array([real.kappa[hotspot, user]]), params.p_m, params.gain, params)
    return (params.w_a / real.abs_load) * math.log2(1.0 + float(snr_acc[0]))


# ---------------------------------------------------------------------------
# typical-user estimators


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _typical_geometry(params: SystemParams, rng: np.random.Generator, count: int):
    """Typical user's placement plus everything association-relevant.

    Draw order (fixed): typical centre radius, typical offset and angle,
    co-user offsets and angles, other centre radii, other user offsets and
    angles.
    """
    n, m_bar = params.n, params.m_bar
    x_t = (params.r - params.r_s) * np.sqrt(rng.random(count))
    u_t = np.maximum(params.r_s * np.sqrt(rng.random(count)), MIN_LINK_DISTANCE)
    xi_t = TWO_PI * (1.0 - rng.random(count))

    u_co = params.r_s * np.sqrt(rng.random((count, m_bar - 1)))
    xi_co = TWO_PI * (1.0 - rng.random((count, m_bar - 1)))
    x_o = (params.r - params.r_s) * np.sqrt(rng.random((count, n - 1)))
    u_o = params.r_s * np.sqrt(rng.random((count, n - 1, m_bar)))
    xi_o = TWO_PI * (1.0 - rng.random((count, n - 1, m_bar)))

    kp = params.k_p
    kappa_t = _law_of_cosines(x_t, u_t, xi_t)
    typical_sbs = u_t < kp * kappa_t
    co_sbs = u_co < kp * _law_of_cosines(x_t[:, None], u_co, xi_co)
    other_sbs = u_o < kp * _law_of_cosines(x_o[:, :, None], u_o, xi_o)
    return x_t, u_t, kappa_t, typical_sbs, co_sbs, other_sbs


def _rate_chunk(params: SystemParams, strategy: Strategy, rho: float, seed: int, index: int, count: int):
    """Counts of (ABS branch, SBS branch) rate successes in one chunk."""
    rng = _chunk_rng(seed, index)
    x_t, u_t, kappa_t, typical_sbs, co_sbs, other_sbs = _typical_geometry(params, rng, count)

    snr_sbs_acc = _draw_snr(rng, u_t, params.p_s, params.gain, params)
    snr_abs_acc = _draw_snr(rng, kappa_t, params.p_m, params.gain, params)
    snr_backhaul = _draw_snr(rng, x_t, params.p_m, params.gain**2, params)

    own_sbs_load = 1 + co_sbs.sum(axis=1)
    own_abs_load = 1 + (~co_sbs).sum(axis=1)
    other_sbs_per_hotspot = other_sbs.sum(axis=2)
    other_sbs_total = other_sbs_per_hotspot.sum(axis=1)
    other_abs_total = (~other_sbs).sum(axis=(1, 2))

    abs_load = np.where(typical_sbs, own_abs_load - 1, own_abs_load) + other_abs_total
    sbs_load = own_sbs_load - (~typical_sbs).astype(int)
    network_sbs_total = sbs_load + other_sbs_total

    w_a, w_b = params.w_a, params.w_b
    abs_rate = (w_a / np.maximum(abs_load, 1)) * np.log2(1.0 + snr_abs_acc)

    if strategy is Strategy.EQUAL:
        w_s = np.full(count, w_b / params.n)
    else:
        w_s = w_b * sbs_load / np.maximum(network_sbs_total, 1)
    safe_load = np.maximum(sbs_load, 1)
    sbs_rate = np.minimum(
        (w_a / safe_load) * np.log2(1.0 + snr_sbs_acc),
        (w_s / safe_load) * np.log2(1.0 + snr_backhaul),
    )

    abs_ok = (~typical_sbs) & (abs_rate >= rho)
    sbs_ok = typical_sbs & (sbs_rate >= rho)
    return int(abs_ok.sum()), int(sbs_ok.sum())


def _coverage_chunk(
    params: SystemParams,
    thresholds: CoverageThresholds,
    seed: int,
    index: int,
    count: int,
):
    rng = _chunk_rng(seed, index)
    x_t = (params.r - params.r_s) * np.sqrt(rng.random(count))
    u_t = np.maximum(params.r_s * np.sqrt(rng.random(count)), MIN_LINK_DISTANCE)
    xi_t = TWO_PI * (1.0 - rng.random(count))
    kappa_t = _law_of_cosines(x_t, u_t, xi_t)
    typical_sbs = u_t < params.k_p * kappa_t

    snr_sbs_acc = _draw_snr(rng, u_t, params.p_s, params.gain, params)
    snr_abs_acc = _draw_snr(rng, kappa_t, params.p_m, params.gain, params)
    snr_backhaul = _draw_snr(rng, x_t, params.p_m, params.gain**2, params)

    ok = np.where(
        typical_sbs,
        (snr_backhaul > thresholds.theta1) & (snr_sbs_acc > thresholds.theta2),
        snr_abs_acc > thresholds.theta3,
    )
    return int(ok.sum())


def _chunk_plan(params: SystemParams, trials: int | None):
    total = params.mc.trials if trials is None else int(trials)
    if total < 1:
        raise ValueError(f"trials must be positive, got {trials!r}")
    size = params.mc.chunk_size
    sizes = [size] * (total // size)
    if total % size:
        sizes.append(total % size)
    return total, sizes


def _run_chunks(task, args_list, workers: int):
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers!r}")
    if workers == 1:
        return [task(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, *zip(*args_list)))


def estimate_rate_components(
    rho: float,
    params: SystemParams,
    strategy: Strategy,
    seed: int,
    trials: int | None = None,
    workers: int = 1,
) -> tuple[Estimate, Estimate, Estimate]:
    """(ABS branch, SBS branch, total) estimates of P(rate >= rho)."""
    if not (rho > 0.0):
        raise ValueError(f"rho must be positive, got {rho!r}")
    total, sizes = _chunk_plan(params, trials)
    args = [(params, strategy, rho, seed, i, c) for i, c in enumerate(sizes)]
    counts = _run_chunks(_rate_chunk, args, workers)
    n_abs = sum(c[0] for c in counts)
    n_sbs = sum(c[1] for c in counts)
    return _estimate(n_abs, total), _estimate(n_sbs, total), _estimate(n_abs + n_sbs, total)


def estimate_rate_coverage(
    rho: float,
    params: SystemParams,
    strategy: Strategy,
    seed: int,
    trials: int | None = None,
    workers: int = 1,
) -> Estimate:
    return estimate_rate_components(rho, params, strategy, seed, trials, workers)[2]


def estimate_coverage(
    thresholds: CoverageThresholds,
    params: SystemParams,
    seed: int,
    trials: int | None = None,
    workers: int = 1,
) -> Estimate:
    """Estimate of the unconditional SNR coverage probability."""
    total, sizes = _chunk_plan(params, trials)
    args = [(params, thresholds, seed, i, c) for i, c in enumerate(sizes)]
    counts = _run_chunks(_coverage_chunk, args, workers)
    return _estimate(sum(counts), total)


def sample_other_load(
    params: SystemParams,
    tier,
    rng: np.random.Generator,
    count: int,
) -> np.ndarray:
    """Samples of the total tier load contributed by n-1 untagged hotspots."""
    from .params import Tier

    n, m_bar = params.n, params.m_bar
    x = (params.r - params.r_s) * np.sqrt(rng.random((count, n - 1)))
    u = params.r_s * np.sqrt(rng.random((count, n - 1, m_bar)))
    xi = TWO_PI * (1.0 - rng.random((count, n - 1, m_bar)))
    sbs = u < params.k_p * _law_of_cosines(x[:, :, None], u, xi)
    if tier is Tier.SBS:
        return sbs.sum(axis=(1, 2))
    return (~sbs).sum(axis=(1, 2))
