"""Closed-form coverage and rate coverage evaluated by nested quadrature.

The outer integral runs over the hotspot-centre distance x (density
2x/(r - r_s)^2), the inner ones over the user offset (u, xi) inside a
hotspot. Conditional coverage factors are mixtures of LOS/NLOS Erlang tail
probabilities; rate coverage adds a sum over the in-hotspot load and an
integral over the Gaussian model of the load contributed by other hotspots.

All public functions are pure in (arguments, params); a geometry kernel is
memoized behind the scenes because it depends only on the disk radii, the
association ratio and the node counts, never on bandwidth, powers or eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import ndtr

from .params import Strategy, SystemParams

LN2 = math.log(2.0)

# Erlang tail underflows to 0 well before this; also shields the series from
# overflow when the threshold argument is huge or infinite.
_ERLANG_Z_CUTOFF = 700.0

# Exponent cap (in bits) beyond which a rate threshold 2^b - 1 is treated as
# unreachable and the coverage factor is exactly 0.
_BITS_CAP = 1000.0

# Variance below which the other-load Gaussian collapses to a point mass.
_DEGENERATE_VARIANCE = 1e-12


class NumericsError(RuntimeError):
    """A quadrature produced a non-finite value."""


@dataclass(frozen=True)
class CoverageThresholds:
    """SNR thresholds (linear) for backhaul, SBS access and ABS access."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            value = getattr(self, name)
            if math.isnan(value) or value < 0.0:
                raise ValueError(f"{name} must be a non-negative threshold, got {value!r}")


class GaussianLoadMoments(NamedTuple):
    """Mean other-hotspot load on each tier and their shared variance."""

    mean_abs: float
    mean_sbs: float
    variance: float


def gamma_ccdf(t, m: int):
    """P(h > t) for unit-mean Nakagami-m power fading, h ~ Gamma(m, 1/m).

    For integer m this is the Erlang tail e^{-mt} * sum_{j<m} (mt)^j / j!.
    Accepts scalars or arrays; t may be +inf (returns 0).
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"shape m must be a positive integer, got {m!r}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(t_arr)) or np.any(t_arr < 0.0):
        raise ValueError("t must be non-negative")
    out = _erlang_ccdf(m * t_arr, m)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def _erlang_ccdf(z: np.ndarray, m: int) -> np.ndarray:
    """Erlang tail at z = m*t; guarded against overflow for large z."""
    z = np.asarray(z, dtype=float)
    big = z > _ERLANG_Z_CUTOFF
    safe = np.where(big, 0.0, z)
    term = np.ones_like(safe)
    acc = np.ones_like(safe)
    for j in range(1, m):
        term = term * safe / j
        acc = acc + term
    out = np.exp(-safe) * acc
    return np.where(big, 0.0, out)


def u_max(x, xi, params: SystemParams):
    """Largest offset u at which a user at hotspot distance x, angle xi still
    prefers the SBS, capped at the hotspot radius.

    This is the positive root of u^2 (1-kp^2) - 2 x cos(xi) kp^2 u - kp^2 x^2,
    where kp = (p_s/p_m)^(1/alpha_assoc) < 1.
    """
    kp = params.k_p
    x_arr = np.asarray(x, dtype=float)
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(x_arr < 0.0):
        raise ValueError("x must be non-negative")
    kp2 = kp * kp
    root = x_arr * kp * (np.sqrt(1.0 - kp2 * np.sin(xi_arr) ** 2) + kp * np.cos(xi_arr)) / (1.0 - kp2)
    out = np.minimum(params.r_s, root)
    if np.isscalar(x) and np.isscalar(xi):
        return float(out)
    return out


@lru_cache(maxsize=8)
def _xi_rule(nodes_xi: int):
    z, w = leggauss(nodes_xi)
    xi = math.pi * (z + 1.0)          # nodes in (0, 2*pi)
    wt = w / 2.0                      # weights of the mean over xi
    return xi, wt


def association_prob_sbs(x, params: SystemParams):
    """Probability that a user of a hotspot at distance x is served by its SBS."""
    x_arr = np.asarray(x, dtype=float)
    limit = params.r - params.r_s
    if np.any(x_arr < 0.0) or np.any(x_arr > limit + 1e-9):
        raise ValueError(f"x must lie in [0, {limit}]")
    xi, wt = _xi_rule(params.quad.nodes_xi)
    um = u_max(x_arr[..., None], xi, params)
    out = np.sum(wt * (um / params.r_s) ** 2, axis=-1)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# quadrature kernel


class _Kernel:
    """Geometry-dependent grids shared by every coverage/rate integral.

    Holds, for each outer x node, flattened (xi, u) grids of the SBS region
    (u < u_max) and the ABS region (u > u_max) with quadrature weights that
    already include the offset density and the 1/(2*pi) angular mean, plus
    the propagation geometry of each grid point (LOS probability and the
    distance raised to each path-loss exponent).
    """

    def __init__(self, x, x_wt, params_key):
        r_s, k_p, mu, a_los, a_nlos, nodes_u, nodes_xi = params_key
        self.x = np.asarray(x, dtype=float)
        self.x_wt = np.asarray(x_wt, dtype=float)
        nx = self.x.size

        z_xi, w_xi = leggauss(nodes_xi)
        xi = math.pi * (z_xi + 1.0)
        wt_xi = w_xi / 2.0
        z_u, w_u = leggauss(nodes_u)
        v = (z_u + 1.0) / 2.0             # unit-interval nodes
        wt_v = w_u / 2.0

        kp2 = k_p * k_p
        um = np.minimum(
            r_s,
            self.x[:, None] * k_p * (np.sqrt(1.0 - kp2 * np.sin(xi) ** 2) + k_p * np.cos(xi)) / (1.0 - kp2),
        )  # (nx, nxi)
        self.a_s = np.sum(wt_xi * (um / r_s) ** 2, axis=1)

        cos_xi = np.cos(xi)

        # SBS region: u in (0, u_max(x, xi)), mapped from the unit interval.
        u_sbs = um[:, :, None] * v[None, None, :]
        w_sbs = (wt_xi[None, :, None] * wt_v[None, None, :]) * um[:, :, None] * (2.0 * u_sbs / r_s**2)
        self.s_wt = w_sbs.reshape(nx, -1)
        self.s_p = np.exp(-u_sbs / mu).reshape(nx, -1)
        self.s_dl = (u_sbs**a_los).reshape(nx, -1)
        self.s_dn = (u_sbs**a_nlos).reshape(nx, -1)

        # ABS region: u in (u_max, r_s); the server is the macro BS at
        # distance kappa given by the law of cosines.
        width = r_s - um
        u_abs = um[:, :, None] + width[:, :, None] * v[None, None, :]
        w_abs = (wt_xi[None, :, None] * wt_v[None, None, :]) * width[:, :, None] * (2.0 * u_abs / r_s**2)
        kappa = np.sqrt(self.x[:, None, None] ** 2 + u_abs**2 + 2.0 * self.x[:, None, None] * u_abs * cos_xi[None, :, None])
        self.m_wt = w_abs.reshape(nx, -1)
        self.m_p = np.exp(-kappa / mu).reshape(nx, -1)
        self.m_dl = (kappa**a_los).reshape(nx, -1)
        self.m_dn = (kappa**a_nlos).reshape(nx, -1)

        # Backhaul geometry of the SBS itself.
        self.b_p = np.exp(-self.x / mu)
        self.b_dl = self.x**a_los
        self.b_dn = self.x**a_nlos

    def _region_profile(self, wt, dl, dn, p, theta, scale, m_l, m_nl, chunk=128):
        """Integral over one region of the LOS/NLOS Erlang-tail mixture,
        for every threshold in theta. Returns (len(theta), nx)."""
        theta = np.asarray(theta, dtype=float)
        nx = self.x.size
        out = np.zeros((theta.size, nx))
        finite = np.isfinite(theta)
        idx = np.nonzero(finite)[0]
        for start in range(0, idx.size, chunk):
            cols = idx[start : start + chunk]
            th = theta[cols]
            for i in range(nx):
                zl = (m_l * scale) * dl[i][:, None] * th[None, :]
                zn = (m_nl * scale) * dn[i][:, None] * th[None, :]
                mix = p[i][:, None] * _erlang_ccdf(zl, m_l) + (1.0 - p[i])[:, None] * _erlang_ccdf(zn, m_nl)
                out[cols, i] = wt[i] @ mix
        return out

    def backhaul_factor(self, theta, scale, m_l, m_nl):
        """ABS-to-SBS coverage factor at each x; (len(theta), nx)."""
        theta = np.asarray(theta, dtype=float)
        finite = np.isfinite(theta)
        th = np.where(finite, theta, 0.0)
        zl = (m_l * scale) * np.multiply.outer(th, self.b_dl)
        zn = (m_nl * scale) * np.multiply.outer(th, self.b_dn)
        out = self.b_p * _erlang_ccdf(zl, m_l) + (1.0 - self.b_p) * _erlang_ccdf(zn, m_nl)
        out[~finite, :] = 0.0
        return out

    def sbs_access_profile(self, theta, scale, m_l, m_nl):
        return self._region_profile(self.s_wt, self.s_dl, self.s_dn, self.s_p, theta, scale, m_l, m_nl)

    def abs_access_profile(self, theta, scale, m_l, m_nl):
        return self._region_profile(self.m_wt, self.m_dl, self.m_dn, self.m_p, theta, scale, m_l, m_nl)


@lru_cache(maxsize=3)
def _kernel_cached(x_key, params_key):
    r, r_s, nodes_x = x_key
    z, w = leggauss(nodes_x)
    limit = r - r_s
    x = limit * (z + 1.0) / 2.0
    # weight of the mean against f_X = 2x/limit^2 (sums to 1).
    x_wt = w * x / limit
    return _Kernel(x, x_wt, params_key)


def _kernel(params: SystemParams) -> _Kernel:
    x_key = (params.r, params.r_s, params.quad.nodes_x)
    params_key = (
        params.r_s,
        params.k_p,
        params.mu,
        params.alpha_los,
        params.alpha_nlos,
        params.quad.nodes_u,
        params.quad.nodes_xi,
    )
    return _kernel_cached(x_key, params_key)


def _point_kernel(x: float, params: SystemParams) -> _Kernel:
    params_key = (
        params.r_s,
        params.k_p,
        params.mu,
        params.alpha_los,
        params.alpha_nlos,
        params.quad.nodes_u,
        params.quad.nodes_xi,
    )
    return _Kernel(np.array([x], dtype=float), np.array([1.0]), params_key)


def _threshold_scales(params: SystemParams):
    """Multipliers turning d^alpha * theta into the Erlang argument t."""
    noise = params.noise_w
    q_backhaul = params.beta * noise / (params.p_m * params.gain**2)
    q_sbs = params.beta * noise / (params.p_s * params.gain)
    q_abs = params.beta * noise / (params.p_m * params.gain)
    return q_backhaul, q_sbs, q_abs


# ---------------------------------------------------------------------------
# coverage


def cov_prob_sbs_conditional(theta1: float, theta2: float, x: float, params: SystemParams) -> float:
    """P(served by SBS, backhaul SNR > theta1, access SNR > theta2 | x).

    The backhaul factor is independent of the user offset, so the value
    factorizes into it times the in-region access integral; at zero
    thresholds the value equals the SBS association probability.
    """
    _check_threshold(theta1)
    _check_threshold(theta2)
    kern = _point_kernel(float(x), params)
    q_b, q_s, _ = _threshold_scales(params)
    bh = kern.backhaul_factor(np.array([theta1]), q_b, params.m_los, params.m_nlos)[0, 0]
    acc = kern.sbs_access_profile(np.array([theta2]), q_s, params.m_los, params.m_nlos)[0, 0]
    return float(bh * acc)


def cov_prob_abs_conditional(theta3: float, x: float, params: SystemParams) -> float:
    """P(served by ABS and access SNR > theta3 | x)."""
    _check_threshold(theta3)
    kern = _point_kernel(float(x), params)
    _, _, q_m = _threshold_scales(params)
    val = kern.abs_access_profile(np.array([theta3]), q_m, params.m_los, params.m_nlos)[0, 0]
    return float(val)


def coverage_probability(thresholds: CoverageThresholds, params: SystemParams) -> float:
    """Unconditional SNR coverage of the typical user."""
    kern = _kernel(params)
    q_b, q_s, q_m = _threshold_scales(params)
    m_l, m_nl = params.m_los, params.m_nlos
    bh = kern.backhaul_factor(np.array([thresholds.theta1]), q_b, m_l, m_nl)[0]
    acc_s = kern.sbs_access_profile(np.array([thresholds.theta2]), q_s, m_l, m_nl)[0]
    acc_m = kern.abs_access_profile(np.array([thresholds.theta3]), q_m, m_l, m_nl)[0]
    value = float(kern.x_wt @ (bh * acc_s + acc_m))
    if not math.isfinite(value):
        raise NumericsError("coverage quadrature produced a non-finite value")
    return value


def _check_threshold(theta: float):
    if math.isnan(theta) or theta < 0.0:
        raise ValueError(f"threshold must be non-negative, got {theta!r}")


# ---------------------------------------------------------------------------
# load moments (Gaussian model of the load from other hotspots)


def _load_moments(params: SystemParams) -> GaussianLoadMoments:
    """Mean/variance of the total load the other n-1 hotspots put on each tier.

    Each hotspot contributes a Binomial(m_bar, A(x)) load mixed over x, so the
    mean is (n-1) m_bar E[A] and the variance (n-1)(m_bar E[A_m A_s] +
    m_bar^2 Var[A]); the variance is tier-symmetric because A_s = 1 - A_m.
    """
    if params.n < 2:
        raise ValueError("load moments require at least two hotspots")
    kern = _kernel(params)
    a_s = kern.a_s
    a_m = 1.0 - a_s
    wt = kern.x_wt
    e_am = float(wt @ a_m)
    e_as = float(wt @ a_s)
    e_amas = float(wt @ (a_m * a_s))
    var_am = float(wt @ (a_m * a_m)) - e_am * e_am
    other = params.n - 1
    m_bar = params.m_bar
    mean_abs = other * m_bar * e_am
    mean_sbs = other * m_bar * e_as
    variance = other * (m_bar * e_amas + m_bar * m_bar * var_am)
    return GaussianLoadMoments(mean_abs, mean_sbs, variance)


def load_floor_leakage(params: SystemParams) -> tuple[float, float]:
    """Gaussian mass dropped by truncating the other-load integral to
    [max(0, mean - 8 sd), mean + 8 sd], per tier. Diagnostic only."""
    if params.n < 2:
        return 0.0, 0.0
    mom = _load_moments(params)
    sd = math.sqrt(max(mom.variance, 0.0))
    if sd == 0.0:
        return 0.0, 0.0
    tail = float(ndtr(-8.0))
    leak_abs = float(ndtr((max(0.0, mom.mean_abs - 8.0 * sd) - mom.mean_abs) / sd)) + tail
    leak_sbs = float(ndtr((max(0.0, mom.mean_sbs - 8.0 * sd) - mom.mean_sbs) / sd)) + tail
    return leak_abs, leak_sbs


# ---------------------------------------------------------------------------
# rate coverage


def _rate_threshold(bits) -> np.ndarray:
    """theta = 2^bits - 1, with bits above the cap mapped to +inf (the
    corresponding coverage factor is then exactly 0)."""
    b = np.asarray(bits, dtype=float)
    guarded = b > _BITS_CAP
    theta = np.expm1(LN2 * np.where(guarded, 0.0, b))
    return np.where(guarded, np.inf, theta)


def _normal_pdf(t, mean, sd):
    z = (np.asarray(t, dtype=float) - mean) / sd
    return np.exp(-0.5 * z * z) / (sd * math.sqrt(2.0 * math.pi))


def _gauss_window(mean: float, sd: float) -> tuple[float, float]:
    return max(0.0, mean - 8.0 * sd), mean + 8.0 * sd


def _panel_nodes(a: float, b: float, count: int):
    z, w = leggauss(count)
    half = (b - a) / 2.0
    return a + half * (z + 1.0), half * w


def _abs_load_grid(m_bar: int, mean: float, sd: float, nodes_t: int):
    """Quadrature for sum_k integral phi(t) g(k + t) dt on a grid in s = k + t.

    Returns (s_nodes, phi_w) with phi_w[k-1, j] the weight of load k at node
    s_j (Gaussian density times quadrature weight, zero where t = s - k < 0).
    When the window is narrow the grid falls back to independent per-load
    panels; otherwise one composite grid is shared, split at the integer
    points where the t >= 0 floor cuts a term.
    """
    t_lo, t_hi = _gauss_window(mean, sd)
    span = t_hi - t_lo
    ks = np.arange(1, m_bar + 1)

    if span < 4.0:
        s_parts, w_parts = [], []
        for k in ks:
            t, w = _panel_nodes(t_lo, t_hi, nodes_t)
            s_parts.append(k + t)
            w_parts.append(w * _normal_pdf(t, mean, sd))
        s = np.concatenate(s_parts)
        phi_w = np.zeros((m_bar, s.size))
        for j, k in enumerate(ks):
            phi_w[j, j * nodes_t : (j + 1) * nodes_t] = w_parts[j]
        return s, phi_w

    if t_lo > 0.0:
        bounds = [1.0 + t_lo, m_bar + t_hi]
    else:
        bounds = [float(b) for b in range(1, m_bar + 1)] + [m_bar + t_hi]
    s_parts, w_parts = [], []
    for a, b in zip(bounds[:-1], bounds[1:]):
        count = max(4, math.ceil(nodes_t * (b - a) / span))
        nodes, weights = _panel_nodes(a, b, count)
        s_parts.append(nodes)
        w_parts.append(weights)
    s = np.concatenate(s_parts)
    ws = np.concatenate(w_parts)
    t_by_k = s[None, :] - ks[:, None]
    phi_w = ws[None, :] * _normal_pdf(t_by_k, mean, sd) * (t_by_k >= 0.0)
    return s, phi_w


def _in_hotspot_weights(params: SystemParams, a_own: np.ndarray, a_other: np.ndarray) -> np.ndarray:
    """P(own-tier hotspot load = k | tier, x) for k = 1..m_bar; (m_bar, nx).

    The tagged user is counted, so the load is 1 + Binomial(m_bar-1, a_own).
    """
    m_bar = params.m_bar
    ks = np.arange(1, m_bar + 1)
    comb = np.array([math.comb(m_bar - 1, int(k) - 1) for k in ks], dtype=float)
    return comb[:, None] * a_own[None, :] ** (ks[:, None] - 1) * a_other[None, :] ** (m_bar - ks[:, None])


def rate_cov_abs(rho: float, params: SystemParams, moments: GaussianLoadMoments | None = None) -> float:
    """Probability that a macro-served typical user attains rate >= rho."""
    _check_rho(rho)
    w_a = params.w_a
    if w_a <= 0.0:
        return 0.0
    kern = _kernel(params)
    _, _, q_m = _threshold_scales(params)
    a_s = kern.a_s
    a_m = 1.0 - a_s
    wk = _in_hotspot_weights(params, a_m, a_s)

    if params.n == 1:
        mean, variance = 0.0, 0.0
    else:
        mom = moments if moments is not None else _load_moments(params)
        mean, variance = mom.mean_abs, mom.variance

    ks = np.arange(1, params.m_bar + 1, dtype=float)
    if variance <= _DEGENERATE_VARIANCE:
        s = ks + mean
        phi_w = np.eye(params.m_bar)
    else:
        s, phi_w = _abs_load_grid(params.m_bar, mean, math.sqrt(variance), params.quad.nodes_t)

    theta = _rate_threshold(rho * s / w_a)
    pcm = kern.abs_access_profile(theta, q_m, params.m_los, params.m_nlos)  # (ns, nx)
    combined = phi_w.T @ wk                                                 # (ns, nx)
    value = float(np.einsum("ji,ji,i->", combined, pcm, kern.x_wt))
    if not math.isfinite(value):
        raise NumericsError("rate quadrature produced a non-finite value")
    return value


def rate_cov_sbs(
    rho: float,
    params: SystemParams,
    strategy: Strategy,
    moments: GaussianLoadMoments | None = None,
) -> float:
    """Probability that an SBS-served typical user attains rate >= rho.

    The user's rate is the lower of its access share and its share of the
    SBS's backhaul, so both SNR thresholds grow with the in-hotspot load;
    under the load-based partition the backhaul threshold also grows with the
    load of the other hotspots (Gaussian model).
    """
    _check_rho(rho)
    w_a, w_b = params.w_a, params.w_b
    if w_b <= 0.0 or w_a <= 0.0:
        return 0.0
    kern = _kernel(params)
    q_b, q_s, _ = _threshold_scales(params)
    m_l, m_nl = params.m_los, params.m_nlos
    a_s = kern.a_s
    a_m = 1.0 - a_s
    wk = _in_hotspot_weights(params, a_s, a_m)
    ks = np.arange(1, params.m_bar + 1, dtype=float)

    theta_access = _rate_threshold(rho * ks / w_a)
    acc = kern.sbs_access_profile(theta_access, q_s, m_l, m_nl)  # (m_bar, nx)

    # A single SBS owns the whole backhaul band either way, so the strategies
    # coincide exactly at n = 1.
    if strategy is Strategy.EQUAL or params.n == 1:
        theta_bh = _rate_threshold(rho * params.n * ks / w_b)
        bh = kern.backhaul_factor(theta_bh, q_b, m_l, m_nl)
    else:
        mom = moments if moments is not None else _load_moments(params)
        mean, variance = mom.mean_sbs, mom.variance
        if variance <= _DEGENERATE_VARIANCE:
            theta_bh = _rate_threshold(rho * (ks + mean) / w_b)
            bh = kern.backhaul_factor(theta_bh, q_b, m_l, m_nl)
        else:
            sd = math.sqrt(variance)
            t_lo, t_hi = _gauss_window(mean, sd)
            t, w = _panel_nodes(t_lo, t_hi, params.quad.nodes_t)
            pdf_w = w * _normal_pdf(t, mean, sd)
            theta_bh = _rate_threshold(rho * (ks[:, None] + t[None, :]) / w_b)
            bh_all = kern.backhaul_factor(theta_bh.ravel(), q_b, m_l, m_nl)
            bh_all = bh_all.reshape(params.m_bar, t.size, -1)
            bh = np.einsum("g,kgi->ki", pdf_w, bh_all)

    value = float(np.einsum("ki,ki,ki,i->", wk, bh, acc, kern.x_wt))
    if not math.isfinite(value):
        raise NumericsError("rate quadrature produced a non-finite value")
    return value


def rate_coverage(rho: float, params: SystemParams, strategy: Strategy) -> float:
    """Total rate coverage: macro branch plus SBS branch."""
    moments = None if params.n == 1 else _load_moments(params)
    return rate_cov_abs(rho, params, moments) + rate_cov_sbs(rho, params, strategy, moments)


def _check_rho(rho: float):
    if not (rho > 0.0):
        raise ValueError(f"rho must be positive, got {rho!r}")


# ---------------------------------------------------------------------------
# optimal bandwidth split


def optimal_eta(
    rho: float,
    params: SystemParams,
    strategy: Strategy,
    grid_step: float = 0.05,
) -> tuple[float, float]:
    """Maximize rate coverage over the backhaul fraction eta.

    Scans the grid {0, grid_step, ..., 1 - grid_step}, then refines the best
    bracket by golden-section search. Returns (eta_star, pr_star); on a flat
    objective the smallest maximizing eta wins.
    """
    _check_rho(rho)
    if not (0.0 < grid_step < 1.0):
        raise ValueError(f"grid_step must be in (0, 1), got {grid_step!r}")
    moments = None if params.n == 1 else _load_moments(params)

    evaluations: list[tuple[float, float]] = []

    def pr(eta: float) -> float:
        p = replace(params, eta=eta)
        value = rate_cov_abs(rho, p, moments) + rate_cov_sbs(rho, p, strategy, moments)
        evaluations.append((eta, value))
        return value

    grid = list(np.arange(0.0, 1.0 - 1e-12, grid_step))
    values = [pr(e) for e in grid]
    best = int(np.argmax(values))

    lo = grid[best - 1] if best > 0 else 0.0
    hi = grid[best + 1] if best + 1 < len(grid) else min(1.0, grid[-1] + grid_step)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = pr(c), pr(d)
    while hi - lo > 2e-3:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = pr(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = pr(d)

    best_value = max(v for _, v in evaluations)
    eta_star = min(e for e, v in evaluations if v == best_value)
    return float(eta_star), float(best_value)


# ---------------------------------------------------------------------------
# convergence self-check


def node_doubling_deltas(
    params: SystemParams,
    rho: float | None = None,
    strategy: Strategy | None = None,
    thresholds: CoverageThresholds | None = None,
) -> dict[str, float]:
    """Absolute change of each requested probability when every quadrature
    node count is doubled. The declared target is params.quad.tolerance."""
    doubled = replace(params, quad=params.quad.doubled())
    deltas: dict[str, float] = {}
    if thresholds is not None:
        deltas["coverage"] = abs(coverage_probability(thresholds, params) - coverage_probability(thresholds, doubled))
    if rho is not None:
        deltas["rate_abs"] = abs(rate_cov_abs(rho, params) - rate_cov_abs(rho, doubled))
        strategies = [strategy] if strategy is not None else list(Strategy)
        for strat in strategies:
            deltas[f"rate_sbs_{strat.value}"] = abs(
                rate_cov_sbs(rho, params, strat) - rate_cov_sbs(rho, doubled, strat)
            )
    return deltas
