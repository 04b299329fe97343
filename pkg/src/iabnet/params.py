"""System parameters for the IAB downlink model.

All quantities are stored in linear units (watts, Hz, metres); the
configuration layer converts dBm/dB inputs exactly once at load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

NOISE_PSD_DBM_HZ = -174.0  # thermal noise power spectral density, fixed


def db_to_linear(value_db: float) -> float:
    """Convert a dB ratio to a linear ratio."""
    return 10.0 ** (value_db / 10.0)


def dbm_to_watts(value_dbm: float) -> float:
    """Convert a dBm power to watts."""
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear ratio to dB."""
    return 10.0 * math.log10(value)


def watts_to_dbm(value_w: float) -> float:
    """Convert a power in watts to dBm."""
    return 10.0 * math.log10(value_w) + 30.0


class Strategy(Enum):
    """Backhaul bandwidth partition strategy across small cells."""

    EQUAL = "equal"
    LOAD_BASED = "load_based"


class Tier(Enum):
    """Serving tier of a user: macro (ABS) or small cell (SBS)."""

    ABS = "abs"
    SBS = "sbs"


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the nested Gauss-Legendre integrals.

    tolerance is the absolute change allowed when every node count is
    doubled (convergence self-check target), not a per-call adaptivity knob.
    """

    nodes_x: int = 64
    nodes_u: int = 64
    nodes_xi: int = 128
    nodes_t: int = 96
    tolerance: float = 1e-4

    def __post_init__(self):
        for name in ("nodes_x", "nodes_u", "nodes_xi", "nodes_t"):
            count = getattr(self, name)
            if not isinstance(count, int) or count < 16:
                raise ValueError(f"quadrature.{name} must be an integer >= 16, got {count!r}")
        if not (self.tolerance > 0.0):
            raise ValueError(f"quadrature.tolerance must be positive, got {self.tolerance!r}")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(
            nodes_x=2 * self.nodes_x,
            nodes_u=2 * self.nodes_u,
            nodes_xi=2 * self.nodes_xi,
            nodes_t=2 * self.nodes_t,
            tolerance=self.tolerance,
        )


@dataclass(frozen=True)
class MonteCarloSpec:
    """Trial budget and chunking for the simulator estimators.

    chunk_size fixes how trials are split into independently seeded Philox
    streams; changing it changes the sample path, so it is part of the
    reproducibility contract.
    """

    trials: int = 200_000
    chunk_size: int = 10_000

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 0:
            raise ValueError(f"monte_carlo.trials must be a non-negative integer, got {self.trials!r}")
        if not isinstance(self.chunk_size, int) or self.chunk_size < 1:
            raise ValueError(f"monte_carlo.chunk_size must be a positive integer, got {self.chunk_size!r}")


@dataclass(frozen=True)
class SystemParams:
    """Immutable description of one network configuration.

    Defaults reproduce the reference urban-hotspot setup: a single macro BS
    (ABS) at the centre of a disk of radius ``r``, ``n`` small cells (SBS) at
    hotspot centres within radius ``r - r_s``, and ``m_bar`` users per hotspot.
    """

    r: float = 40.0                 # macrocell radius, m
    r_s: float = 5.0                # hotspot radius, m
    n: int = 10                     # number of hotspots / SBSs
    m_bar: int = 5                  # users per hotspot
    p_m: float = dbm_to_watts(30.0)  # ABS transmit power, W
    p_s: float = dbm_to_watts(0.0)   # SBS transmit power, W
    alpha_los: float = 2.0          # LOS path-loss exponent
    alpha_nlos: float = 3.3         # NLOS path-loss exponent
    alpha_assoc: float = 3.3        # exponent used by sub-6GHz paging association
    beta: float = db_to_linear(70.0)  # path loss at 1 m, linear
    gain: float = db_to_linear(18.0)  # per-antenna directional gain, linear
    mu: float = 30.0                # LOS range constant, m
    m_los: int = 2                  # Nakagami shape, LOS
    m_nlos: int = 3                 # Nakagami shape, NLOS
    w: float = 300e6                # total mmWave bandwidth, Hz
    eta: float = 0.5                # backhaul fraction of w
    noise_figure_db: float = 10.0
    rho: float = 50e6               # target rate, bit/s
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    mc: MonteCarloSpec = field(default_factory=MonteCarloSpec)

    def __post_init__(self):
        if not (self.r > 0.0):
            raise ValueError(f"r must be positive, got {self.r!r}")
        if not (0.0 < self.r_s < self.r):
            raise ValueError(f"r_s must be in (0, r), got {self.r_s!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m_bar, int) or self.m_bar < 1:
            raise ValueError(f"m_bar must be a positive integer, got {self.m_bar!r}")
        if not (self.p_m > 0.0) or not (self.p_s > 0.0):
            raise ValueError("transmit powers must be positive")
        if not (self.p_s < self.p_m):
            raise ValueError(f"p_s must be below p_m, got p_s={self.p_s!r}, p_m={self.p_m!r}")
        for name in ("alpha_los", "alpha_nlos", "alpha_assoc"):
            if not (getattr(self, name) > 0.0):
                raise ValueError(f"{name} must be positive")
        if not (self.beta > 0.0) or not (self.gain > 0.0):
            raise ValueError("beta and gain must be positive")
        if not (self.mu > 0.0):
            raise ValueError(f"mu must be positive, got {self.mu!r}")
        for name in ("m_los", "m_nlos"):
            shape = getattr(self, name)
            if not isinstance(shape, int) or shape < 1:
                raise ValueError(f"{name} must be a positive integer, got {shape!r}")
        if not (self.w > 0.0):
            raise ValueError(f"w must be positive, got {self.w!r}")
        # eta = 1 is allowed so that the degenerate all-backhaul split can be
        # evaluated (rate coverage is exactly 0 there).
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must be in [0, 1], got {self.eta!r}")
        if not (self.rho >= 0.0):
            raise ValueError(f"rho must be non-negative, got {self.rho!r}")

    @property
    def k_p(self) -> float:
        """Association distance ratio (p_s/p_m)^(1/alpha_assoc), in (0, 1)."""
        return (self.p_s / self.p_m) ** (1.0 / self.alpha_assoc)

    @property
    def w_b(self) -> float:
        """Backhaul bandwidth, Hz."""
        return self.eta * self.w

    @property
    def w_a(self) -> float:
        """Access bandwidth, Hz. Defined as w - w_b so the two sum exactly."""
        return self.w - self.w_b

    @property
    def noise_w(self) -> float:
        """Noise power over the full band, W (includes the noise figure)."""
        noise_dbm = NOISE_PSD_DBM_HZ + 10.0 * math.log10(self.w) + self.noise_figure_db
        return dbm_to_watts(noise_dbm)
