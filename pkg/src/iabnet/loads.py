"""Exact and Gaussian models of the cell loads.

The load a single hotspot puts on a tier is Binomial(m_bar, A(x)) mixed over
the hotspot distance x. Sums over hotspots are obtained by discrete
convolution; the Gaussian model used inside the rate-coverage integrals is
checked against that exact distribution here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from .analytics import _kernel, _load_moments, association_prob_sbs
from .params import SystemParams, Tier

# Cap on the exact-convolution support size.
_MAX_SUPPORT = 10_000


class LoadMoments(NamedTuple):
    """Gaussian-model moments of the load from the other n-1 hotspots."""

    mean_abs: float
    variance_abs: float
    mean_sbs: float
    variance_sbs: float


@dataclass(frozen=True)
class LoadDistribution:
    """A distribution on consecutive integer loads.

    The pmf may sum to slightly less than 1 when it comes from truncating a
    continuous model to the support.
    """

    values: np.ndarray
    pmf: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=int)
        pmf = np.asarray(self.pmf, dtype=float)
        if values.shape != pmf.shape or values.ndim != 1:
            raise ValueError("values and pmf must be 1-D arrays of equal length")
        if np.any(pmf < -1e-12):
            raise ValueError("pmf must be non-negative")
        if pmf.sum() > 1.0 + 1e-9:
            raise ValueError("pmf must not sum to more than 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "pmf", np.maximum(pmf, 0.0))

    def mean(self) -> float:
        return float(self.values @ self.pmf)

    def variance(self) -> float:
        m = self.mean()
        return float((self.values.astype(float) - m) ** 2 @ self.pmf)


def _tier_fraction(params: SystemParams, tier: Tier) -> np.ndarray:
    kern = _kernel(params)
    return kern.a_s if tier is Tier.SBS else 1.0 - kern.a_s


def in_hotspot_load_pmf(k: int, x: float, tier: Tier, params: SystemParams) -> float:
    """P(the typical user's hotspot loads its tier with k users | center at x).

    The typical user is always counted, so the load is 1 plus a binomial count
    over the other m_bar - 1 users of the hotspot; k outside 1..m_bar has no
    mass. Conditioned on x the co-users pick their tier independently of the
    typical user, so no conditioning on its own tier is needed.
    """
    m_bar = params.m_bar
    if k < 1 or k > m_bar:
        return 0.0
    a_s = float(association_prob_sbs(x, params))
    a = a_s if tier is Tier.SBS else 1.0 - a_s
    return math.comb(m_bar - 1, k - 1) * a ** (k - 1) * (1.0 - a) ** (m_bar - k)


def _single_hotspot_pmf(params: SystemParams, tier: Tier) -> np.ndarray:
    """P(one untagged hotspot contributes j users to the tier), j = 0..m_bar."""
    a = _tier_fraction(params, tier)
    wt = _kernel(params).x_wt
    m_bar = params.m_bar
    pmf = np.empty(m_bar + 1)
    for j in range(m_bar + 1):
        comb = math.comb(m_bar, j)
        pmf[j] = comb * float(wt @ (a**j * (1.0 - a) ** (m_bar - j)))
    return pmf


def other_load_pmf(params: SystemParams, tier: Tier) -> LoadDistribution:
    """Exact distribution of the total tier load of the other n-1 hotspots,
    computed by repeated convolution; support 0..(n-1)*m_bar."""
    other = params.n - 1
    if other < 1:
        return LoadDistribution(np.array([0]), np.array([1.0]))
    if other * params.m_bar > _MAX_SUPPORT:
        raise ValueError(f"exact convolution support exceeds {_MAX_SUPPORT}; use the Gaussian model")
    single = _single_hotspot_pmf(params, tier)
    pmf = single
    for _ in range(other - 1):
        pmf = np.convolve(pmf, single)
    return LoadDistribution(np.arange(pmf.size), pmf)


def clt_moments(params: SystemParams) -> LoadMoments:
    """Gaussian-model mean and variance of the other-hotspot load per tier.

    The two variances coincide because the tier fractions of each hotspot sum
    to one.
    """
    mom = _load_moments(params)
    return LoadMoments(mom.mean_abs, mom.variance, mom.mean_sbs, mom.variance)


def discretized_gaussian(mean: float, sd: float, values: np.ndarray) -> LoadDistribution:
    """Gaussian mass binned to unit intervals around the given integers."""
    if sd <= 0.0:
        raise ValueError(f"sd must be positive, got {sd!r}")
    values = np.asarray(values, dtype=int)
    hi = ndtr((values + 0.5 - mean) / sd)
    lo = ndtr((values - 0.5 - mean) / sd)
    return LoadDistribution(values, hi - lo)


def gaussian_load_pmf(params: SystemParams, tier: Tier) -> LoadDistribution:
    """The Gaussian model of other_load_pmf, binned on the same support."""
    mom = clt_moments(params)
    mean = mom.mean_sbs if tier is Tier.SBS else mom.mean_abs
    support = np.arange((params.n - 1) * params.m_bar + 1)
    return discretized_gaussian(mean, math.sqrt(mom.variance_abs), support)


def total_variation(a: LoadDistribution, b: LoadDistribution) -> float:
    """Total variation distance; mass either pmf leaves off its support is
    treated as sitting on a separate outside state."""
    lo = min(a.values.min(), b.values.min())
    hi = max(a.values.max(), b.values.max())
    grid = np.arange(lo, hi + 1)
    pa = np.zeros(grid.size)
    pb = np.zeros(grid.size)
    pa[a.values - lo] = a.pmf
    pb[b.values - lo] = b.pmf
    out_a = max(0.0, 1.0 - float(a.pmf.sum()))
    out_b = max(0.0, 1.0 - float(b.pmf.sum()))
    return 0.5 * (float(np.abs(pa - pb).sum()) + abs(out_a - out_b))
