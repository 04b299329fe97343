"""Experiment configuration: YAML in engineering units, SystemParams out.

The YAML file is a flat mapping whose keys equal the ExperimentConfig field
names. Powers are dBm, gains dB, bandwidths MHz and rates Mbit/s; the
conversion to the linear SI units used internally happens only when a
SystemParams is built, so load/dump round-trips are exact.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import yaml

from .params import (
    MonteCarloSpec,
    QuadratureSpec,
    Strategy,
    SystemParams,
    db_to_linear,
    dbm_to_watts,
)


class ConfigError(Exception):
    """Raised for unknown keys, malformed values or out-of-range settings."""


_STRATEGY_NAMES = tuple(s.value for s in Strategy)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a base network plus the sweeps to run over it."""

    r: float = 40.0
    r_s: float = 5.0
    n: int = 10
    m_bar: int = 5
    p_m_dbm: float = 30.0
    p_s_dbm: float = 0.0
    alpha_los: float = 2.0
    alpha_nlos: float = 3.3
    alpha_assoc: float = 3.3
    beta_db: float = 70.0
    gain_db: float = 18.0
    mu: float = 30.0
    m_los: int = 2
    m_nlos: int = 3
    w_mhz: float = 300.0
    eta: float = 0.5
    noise_figure_db: float = 10.0
    rho_mbps: float = 50.0
    nodes_x: int = 64
    nodes_u: int = 64
    nodes_xi: int = 128
    nodes_t: int = 96
    tolerance: float = 1e-4
    trials: int = 200_000
    chunk_size: int = 10_000
    seed: int = 12345
    strategies: tuple = _STRATEGY_NAMES
    etas: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    w_mhz_sweep: tuple = (300.0,)
    m_bars: tuple = (5,)
    rhos_mbps: tuple = (50.0,)

    def __post_init__(self):
        for name in ("strategies", "etas", "w_mhz_sweep", "m_bars", "rhos_mbps"):
            value = getattr(self, name)
            if not isinstance(value, (list, tuple)) or len(value) == 0:
                raise ConfigError(f"{name} must be a non-empty list")
            object.__setattr__(self, name, tuple(value))
        for s in self.strategies:
            if s not in _STRATEGY_NAMES:
                raise ConfigError(f"unknown strategy {s!r}; expected one of {list(_STRATEGY_NAMES)}")
        for e in self.etas:
            if not (0.0 <= e <= 1.0):
                raise ConfigError(f"etas entries must be in [0, 1], got {e!r}")
        for wv in self.w_mhz_sweep:
            if not (wv > 0.0):
                raise ConfigError(f"w_mhz_sweep entries must be positive, got {wv!r}")
        for mb in self.m_bars:
            if not isinstance(mb, int) or mb < 1:
                raise ConfigError(f"m_bars entries must be positive integers, got {mb!r}")
        for rv in self.rhos_mbps:
            if not (rv > 0.0):
                raise ConfigError(f"rhos_mbps entries must be positive, got {rv!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        # Catch range errors in the base scalars right away.
        self.system_params()

    def strategy_list(self) -> list[Strategy]:
        return [Strategy(s) for s in self.strategies]

    def system_params(
        self,
        eta: float | None = None,
        w_hz: float | None = None,
        m_bar: int | None = None,
    ) -> SystemParams:
        """Build the immutable parameter set, optionally overriding the swept
        quantities."""
        try:
            quad = QuadratureSpec(
                nodes_x=self.nodes_x,
                nodes_u=self.nodes_u,
                nodes_xi=self.nodes_xi,
                nodes_t=self.nodes_t,
                tolerance=self.tolerance,
            )
            mc = MonteCarloSpec(trials=self.trials, chunk_size=self.chunk_size)
            return SystemParams(
                r=self.r,
                r_s=self.r_s,
                n=self.n,
                m_bar=self.m_bar if m_bar is None else m_bar,
                p_m=dbm_to_watts(self.p_m_dbm),
                p_s=dbm_to_watts(self.p_s_dbm),
                alpha_los=self.alpha_los,
                alpha_nlos=self.alpha_nlos,
                alpha_assoc=self.alpha_assoc,
                beta=db_to_linear(self.beta_db),
                gain=db_to_linear(self.gain_db),
                mu=self.mu,
                m_los=self.m_los,
                m_nlos=self.m_nlos,
                w=self.w_mhz * 1e6 if w_hz is None else w_hz,
                eta=self.eta if eta is None else eta,
                noise_figure_db=self.noise_figure_db,
                rho=self.rho_mbps * 1e6,
                quad=quad,
                mc=mc,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def rho_hz_list(self) -> list[float]:
        return [r * 1e6 for r in self.rhos_mbps]

    def w_hz_list(self) -> list[float]:
        return [w * 1e6 for w in self.w_mhz_sweep]


_FIELD_NAMES = {f.name for f in dataclasses.fields(ExperimentConfig)}
_INT_FIELDS = {"n", "m_bar", "m_los", "m_nlos", "nodes_x", "nodes_u", "nodes_xi", "nodes_t", "trials", "chunk_size", "seed"}
_LIST_FIELDS = {"strategies", "etas", "w_mhz_sweep", "m_bars", "rhos_mbps"}


def config_from_mapping(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"configuration must be a mapping, got {type(data).__name__}")
    unknown = sorted(set(data) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    coerced = {}
    for key, value in data.items():
        if key in _LIST_FIELDS:
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{key} must be a list")
            coerced[key] = tuple(value)
        elif key in _INT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{key} must be an integer, got {value!r}")
            coerced[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{key} must be a number, got {value!r}")
            coerced[key] = float(value)
    return ExperimentConfig(**coerced)


def load_config(path: str | Path) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from exc
    if data is None:
        data = {}
    return config_from_mapping(data)


def dump_config(config: ExperimentConfig, path: str | Path) -> None:
    data = dataclasses.asdict(config)
    for key in _LIST_FIELDS:
        data[key] = list(data[key])
    Path(path).write_text(yaml.safe_dump(data, sort_keys=False))
