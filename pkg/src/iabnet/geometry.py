"""Spatial sampling, blockage, fading and SNR primitives.

Distances are metres, powers watts, angles radians. Hotspot centres live in
the disk of radius r - r_s around the macro BS so hotspots never cross the
cell edge; users are uniform in a disk of radius r_s around their centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import SystemParams, Tier

# Shortest user-to-server distance used when computing link gains; avoids an
# unbounded SNR when a user lands (numerically) on top of its SBS.
MIN_LINK_DISTANCE = 1e-3

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PolarPoint:
    """A point in polar coordinates relative to some origin."""

    radius: float
    angle: float  # radians, in (0, 2*pi]

    def __post_init__(self):
        if not (self.radius >= 0.0):
            raise ValueError(f"radius must be non-negative, got {self.radius!r}")
        if not (0.0 < self.angle <= TWO_PI):
            raise ValueError(f"angle must be in (0, 2*pi], got {self.angle!r}")


@dataclass(frozen=True)
class UserPlacement:
    """A user described by its hotspot centre and its offset inside the hotspot.

    The offset angle is measured from the hotspot's own radial direction, so
    the user-to-macro distance follows from the law of cosines directly.
    """

    hotspot_center: PolarPoint
    offset: PolarPoint

    @property
    def kappa(self) -> float:
        """Distance from the user to the macro BS at the origin."""
        x = self.hotspot_center.radius
        u = self.offset.radius
        return math.sqrt(x * x + u * u + 2.0 * x * u * math.cos(self.offset.angle))


@dataclass(frozen=True)
class LinkSample:
    """One realized propagation state of a link."""

    distance: float
    los: bool
    fading_gain: float
    antenna_gain: float
    snr: float

    def __post_init__(self):
        if not (self.distance > 0.0):
            raise ValueError("link distance must be positive")
        if not (self.fading_gain > 0.0):
            raise ValueError("fading gain must be positive")
        if not (self.snr > 0.0):
            raise ValueError("snr must be positive")


def _disk_radii(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    """Radii of points uniform in a disk: inverse-CDF of f(r) = 2r/radius^2."""
    return radius * np.sqrt(rng.random(count))


def _angles(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform angles in (0, 2*pi]."""
    return TWO_PI * (1.0 - rng.random(count))


def sample_hotspot_centers(rng: np.random.Generator, params: SystemParams) -> list[PolarPoint]:
    """Draw the n hotspot centres, uniform in the disk of radius r - r_s."""
    radii = _disk_radii(rng, params.n, params.r - params.r_s)
    angles = _angles(rng, params.n)
    return [PolarPoint(float(r), float(a)) for r, a in zip(radii, angles)]


def sample_user_offset(rng: np.random.Generator, params: SystemParams) -> PolarPoint:
    """Draw one user offset, uniform in the hotspot disk of radius r_s."""
    u = _disk_radii(rng, 1, params.r_s)[0]
    xi = _angles(rng, 1)[0]
    return PolarPoint(float(u), float(xi))


def path_loss(distance: float, exponent: float, params: SystemParams) -> float:
    """Linear path loss beta * d^alpha.

    Raises ValueError for non-positive distances: the model has no DC term,
    so a zero distance would mean infinite received power.
    """
    if not (distance > 0.0):
        raise ValueError(f"distance must be positive, got {distance!r}")
    return params.beta * distance ** exponent


def los_probability(distance: float, params: SystemParams) -> float:
    """Probability that a link of the given length is line-of-sight."""
    if not (distance >= 0.0):
        raise ValueError(f"distance must be non-negative, got {distance!r}")
    return math.exp(-distance / params.mu)


def sample_fading(rng: np.random.Generator, m: int) -> float:
    """Unit-mean Nakagami-m power fading gain: Gamma(m, 1/m)."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"Nakagami shape must be a positive integer, got {m!r}")
    return float(rng.gamma(m, 1.0 / m))


def snr(
    power: float,
    antenna_gain: float,
    distance: float,
    los: bool,
    fading: float,
    params: SystemParams,
) -> float:
    """Noise-limited SNR of one link (linear).

    The noise power uses the full system bandwidth: transmissions occupy a
    slice of the band, but power spectral density and noise scale together so
    the ratio is bandwidth-share free.
    """
    exponent = params.alpha_los if los else params.alpha_nlos
    loss = path_loss(distance, exponent, params)
    return power * antenna_gain * fading / (loss * params.noise_w)


def associate(placement: UserPlacement, params: SystemParams) -> Tier:
    """Which tier serves this user, based on sub-6GHz paging powers.

    The paging comparison has no fading or blockage: the SBS wins only when
    p_s * u^-alpha strictly beats p_m * kappa^-alpha; ties go to the macro.
    """
    u = placement.offset.radius
    kappa = placement.kappa
    if u == 0.0:
        # On top of its SBS: the SBS wins unless the SBS sits on the macro.
        return Tier.SBS if kappa > 0.0 else Tier.ABS
    if kappa == 0.0:
        return Tier.ABS
    alpha = params.alpha_assoc
    if params.p_s * u ** (-alpha) > params.p_m * kappa ** (-alpha):
        return Tier.SBS
    return Tier.ABS
