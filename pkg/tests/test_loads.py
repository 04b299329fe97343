import math
from dataclasses import replace

import numpy as np
import pytest

from iabnet.loads import (
    LoadDistribution,
    clt_moments,
    discretized_gaussian,
    gaussian_load_pmf,
    in_hotspot_load_pmf,
    other_load_pmf,
    total_variation,
)
from iabnet.params import SystemParams, Tier


@pytest.fixture(scope="module")
def params():
    return SystemParams()


def sbs_fraction_mean(params):
    # E[A_s] for the quadratic association profile, see test_analytics
    kp = params.k_p
    c = kp * kp / ((1.0 - kp * kp) ** 2 * params.r_s**2)
    return c * (params.r - params.r_s) ** 2 / 2.0


def test_in_hotspot_pmf_is_normalized(params):
    for x in (6.0, 17.5, 30.0):
        for tier in (Tier.ABS, Tier.SBS):
            total = sum(in_hotspot_load_pmf(k, x, tier, params) for k in range(1, params.m_bar + 1))
            assert total == pytest.approx(1.0, abs=1e-12)
    # the typical user is always counted, so no mass outside 1..m_bar
    assert in_hotspot_load_pmf(0, 20.0, Tier.ABS, params) == 0.0
    assert in_hotspot_load_pmf(params.m_bar + 1, 20.0, Tier.SBS, params) == 0.0


def test_in_hotspot_pmf_single_user():
    p = SystemParams(m_bar=1)
    for tier in (Tier.ABS, Tier.SBS):
        assert in_hotspot_load_pmf(1, 12.0, tier, p) == pytest.approx(1.0, abs=1e-12)


def test_in_hotspot_pmf_tier_mirror(params):
    # swapping the tier mirrors the count of the m_bar - 1 co-users
    m_bar = params.m_bar
    for k in range(1, m_bar + 1):
        abs_side = in_hotspot_load_pmf(k, 25.0, Tier.ABS, params)
        sbs_side = in_hotspot_load_pmf(m_bar + 1 - k, 25.0, Tier.SBS, params)
        assert abs_side == pytest.approx(sbs_side, rel=1e-12)


def test_other_load_two_point_case():
    # one other hotspot with one user: its ABS load is 1 unless the user
    # joins the SBS
    p = SystemParams(n=2, m_bar=1)
    e_as = sbs_fraction_mean(p)
    dist = other_load_pmf(p, Tier.ABS)
    assert list(dist.values) == [0, 1]
    assert dist.pmf[0] == pytest.approx(e_as, abs=1e-9)
    assert dist.pmf[1] == pytest.approx(1.0 - e_as, abs=1e-9)
    flipped = other_load_pmf(p, Tier.SBS)
    assert flipped.pmf[0] == pytest.approx(1.0 - e_as, abs=1e-9)


def test_other_load_support_and_mass(params):
    dist = other_load_pmf(params, Tier.SBS)
    assert dist.values[0] == 0
    assert dist.values[-1] == (params.n - 1) * params.m_bar
    assert dist.pmf.sum() == pytest.approx(1.0, abs=1e-12)
    assert dist.variance() >= 0.0


def test_other_load_single_hotspot():
    dist = other_load_pmf(SystemParams(n=1), Tier.ABS)
    assert list(dist.values) == [0]
    assert dist.pmf[0] == 1.0


def test_other_load_support_guard():
    p = SystemParams(n=2001, m_bar=10)
    with pytest.raises(ValueError):
        other_load_pmf(p, Tier.ABS)


def test_convolution_moments_match_clt(params):
    small = replace(params, n=4, m_bar=3)
    mom = clt_moments(small)
    for tier, mean in ((Tier.ABS, mom.mean_abs), (Tier.SBS, mom.mean_sbs)):
        dist = other_load_pmf(small, tier)
        assert dist.mean() == pytest.approx(mean, abs=1e-9)
        assert dist.variance() == pytest.approx(mom.variance_abs, abs=1e-9)


def test_clt_variances_are_tier_symmetric(params):
    mom = clt_moments(params)
    assert mom.variance_abs == mom.variance_sbs
    assert mom.mean_abs + mom.mean_sbs == pytest.approx((params.n - 1) * params.m_bar, abs=1e-9)


def test_discretized_gaussian_bins():
    dist = discretized_gaussian(10.0, 2.0, np.arange(0, 21))
    assert dist.pmf.sum() < 1.0
    assert dist.pmf.sum() == pytest.approx(1.0, abs=1e-5)
    # symmetric around the mean
    np.testing.assert_allclose(dist.pmf, dist.pmf[::-1], rtol=1e-10)
    # symmetry pins the mean at the center, scaled by the retained mass
    assert dist.mean() == pytest.approx(10.0 * dist.pmf.sum(), rel=1e-12)
    with pytest.raises(ValueError):
        discretized_gaussian(5.0, 0.0, np.arange(3))


def test_gaussian_model_close_to_exact(params):
    for tier in (Tier.ABS, Tier.SBS):
        tv = total_variation(other_load_pmf(params, tier), gaussian_load_pmf(params, tier))
        assert tv < 0.05


def test_total_variation_properties():
    a = LoadDistribution(np.array([0, 1]), np.array([0.5, 0.5]))
    assert total_variation(a, a) == 0.0
    b = LoadDistribution(np.array([5, 6]), np.array([0.25, 0.75]))
    assert total_variation(a, b) == pytest.approx(1.0)
    # missing mass counts as an extra state
    truncated = LoadDistribution(np.array([0, 1]), np.array([0.5, 0.25]))
    assert total_variation(a, truncated) == pytest.approx(0.25)


def test_load_distribution_validation():
    with pytest.raises(ValueError):
        LoadDistribution(np.array([0, 1]), np.array([0.7, 0.7]))
    with pytest.raises(ValueError):
        LoadDistribution(np.array([0, 1]), np.array([-0.1, 0.5]))
    with pytest.raises(ValueError):
        LoadDistribution(np.array([[0], [1]]), np.array([[0.5], [0.5]]))
