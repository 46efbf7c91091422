"""Domain types, scenario configuration and seeded random deployment.

A scenario describes a square field with N statically deployed sensor nodes
and one energy-unconstrained base station (default: field centre).  Nodes may
be heterogeneous in two ways: initial energy (drawn uniformly from
[e_min, e_max] for a configured fraction of nodes) and sensing role (a
fraction are regular-data-acquisition nodes with a per-round message schedule
drawn from configured ranges).  A further fraction is malfunctioning, which
perturbs their actual transmit energy and therefore defeats consumption
prediction.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np


class ConfigError(ValueError):
    """A scenario field failed validation; carries the offending field name."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


class ContractViolation(ValueError):
    """An operation was called outside its contract."""


@dataclass(frozen=True)
class RadioParams:
    """Radio energy-model constants and the path-loss law used for ranging."""

    e_elec: float = 5e-9          # J/bit, transmitter/receiver electronics
    eps_fs: float = 10e-12        # J/bit/m^2, free-space amplifier
    eps_mp: float = 0.0013e-12    # J/bit/m^4, multipath amplifier
    d0: float = 75.0              # m, amplifier crossover distance
    k_rss: float = 1.0            # path-loss constant
    alpha_pathloss: float = 2.0   # path-loss exponent, in [1, 6]

    def __post_init__(self):
        for name in ("e_elec", "eps_fs", "eps_mp", "d0", "k_rss", "alpha_pathloss"):
            if getattr(self, name) <= 0:
                raise ConfigError(name, "must be strictly positive")
        if not (1.0 <= self.alpha_pathloss <= 6.0):
            raise ConfigError("alpha_pathloss", "must lie in [1, 6]")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulated network scenario."""

    m_field: float = 100.0
    n_nodes: int = 100
    bs_pos: Optional[tuple[float, float]] = None  # None -> field centre
    e_min: float = 1.0
    e_max: float = 3.0
    frac_energy_heterogeneous: float = 1.0
    homogeneous_energy: float = 2.0
    frac_rda: float = 0.0
    frac_malfunction: float = 0.0
    alpha: float = 0.7
    beta: float = 0.3
    epsilon_tol: float = 0.93
    frames_per_round: int = 5
    rda_msgs_range: tuple[int, int] = (3, 7)
    msg_len_range_bits: tuple[int, int] = (2000, 6000)
    broadcast_bits: int = 2500
    nonrda_tx_prob_per_frame: float = 1.0
    nonrda_len_range_bits: tuple[int, int] = (4000, 4000)
    neighbor_radius: float = 12.0
    e_da_per_bit: float = 5e-9
    fused_len_bits: int = 4000
    cost_factor_cap: float = 5.0
    malfunction_noise_range: tuple[float, float] = (0.5, 1.5)
    eq20_literal: bool = False
    gamma_rule_literal: bool = False
    force_unit_factors: bool = False
    disable_suppression: bool = False
    rng_seed: int = 0
    radio: RadioParams = field(default_factory=RadioParams)

    def __post_init__(self):
        if self.m_field <= 0:
            raise ConfigError("m_field", "must be positive")
        if self.n_nodes < 1:
            raise ConfigError("n_nodes", "must be at least 1")
        if self.e_min > self.e_max:
            raise ConfigError("e_min", "must not exceed e_max")
        if self.e_min < 0:
            raise ConfigError("e_min", "must be non-negative")
        if self.homogeneous_energy < 0:
            raise ConfigError("homogeneous_energy", "must be non-negative")
        for name in ("frac_energy_heterogeneous", "frac_rda", "frac_malfunction",
                     "epsilon_tol", "nonrda_tx_prob_per_frame"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigError(name, "must lie in [0, 1]")
        if abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ConfigError("alpha", "alpha + beta must equal 1")
        if self.frames_per_round < 1:
            raise ConfigError("frames_per_round", "must be at least 1")
        for name in ("rda_msgs_range", "msg_len_range_bits", "nonrda_len_range_bits",
                     "malfunction_noise_range"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigError(name, "must be a non-negative (lo, hi) range with lo <= hi")
        if self.broadcast_bits < 0:
            raise ConfigError("broadcast_bits", "must be non-negative")
        if self.fused_len_bits < 0:
            raise ConfigError("fused_len_bits", "must be non-negative")
        if self.neighbor_radius <= 0:
            raise ConfigError("neighbor_radius", "must be positive")
        if self.e_da_per_bit < 0:
            raise ConfigError("e_da_per_bit", "must be non-negative")
        if self.cost_factor_cap <= 0:
            raise ConfigError("cost_factor_cap", "must be positive")

    @property
    def bs_xy(self) -> tuple[float, float]:
        if self.bs_pos is not None:
            return self.bs_pos
        return (self.m_field / 2.0, self.m_field / 2.0)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, rng_seed=int(seed))

    def to_flat_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "radio":
                for rf in fields(RadioParams):
                    d[rf.name] = getattr(v, rf.name)
            elif isinstance(v, tuple):
                d[f.name] = list(v)
            else:
                d[f.name] = v
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.to_flat_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


_TUPLE_FIELDS = {"bs_pos", "rda_msgs_range", "msg_len_range_bits",
                 "nonrda_len_range_bits", "malfunction_noise_range"}


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a flat key-value mapping; unknown keys error."""
    scen_names = {f.name for f in fields(ScenarioConfig)} - {"radio"}
    radio_names = {f.name for f in fields(RadioParams)}
    scen_kwargs = {}
    radio_kwargs = {}
    for key, value in data.items():
        if key in radio_names:
            radio_kwargs[key] = value
        elif key in scen_names:
            if key in _TUPLE_FIELDS and value is not None:
                value = tuple(value)
            scen_kwargs[key] = value
        else:
            raise ConfigError(key, "unknown scenario key")
    return ScenarioConfig(radio=RadioParams(**radio_kwargs), **scen_kwargs)


def load_scenario(path) -> ScenarioConfig:
    """Load a scenario from a flat JSON object file."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("<root>", "scenario file must contain a JSON object")
    return scenario_from_dict(data)


def table1_scenario(**overrides) -> ScenarioConfig:
    """The default desk-scale scenario: 100 nodes on a 100 m field, 1-3 J."""
    return scenario_from_dict(overrides) if overrides else ScenarioConfig()


@dataclass
class NodeState:
    """One sensor node."""

    id: int
    pos: tuple[float, float]
    e_init: float
    e_now: float
    is_rda: bool = False
    is_malfunctioning: bool = False
    alive: bool = True
    msgs_per_round: int = 0
    msg_len_bits: int = 0
    r_s: int = 0
    in_G: bool = True
    e_predicted_next: Optional[float] = None


def _flag_count(frac: float, n: int) -> int:
    return int(math.floor(frac * n + 0.5))


def deploy(config: ScenarioConfig) -> list[NodeState]:
    """Seeded random deployment: positions, initial energies, role flags.

    Identical seed yields a bit-identical node list.  The RDA and
    malfunctioning subsets are independent draws, so a node may be both.
    """
    n = config.n_nodes
    rng = np.random.default_rng([config.rng_seed, 0])
    xs = rng.uniform(0.0, config.m_field, n)
    ys = rng.uniform(0.0, config.m_field, n)

    e_init = np.full(n, config.homogeneous_energy, dtype=float)
    n_het = _flag_count(config.frac_energy_heterogeneous, n)
    het_idx = rng.permutation(n)[:n_het]
    e_init[het_idx] = rng.uniform(config.e_min, config.e_max, n_het)

    is_rda = np.zeros(n, dtype=bool)
    is_rda[rng.permutation(n)[:_flag_count(config.frac_rda, n)]] = True
    is_malf = np.zeros(n, dtype=bool)
    is_malf[rng.permutation(n)[:_flag_count(config.frac_malfunction, n)]] = True

    return [
        NodeState(
            id=i,
            pos=(float(xs[i]), float(ys[i])),
            e_init=float(e_init[i]),
            e_now=float(e_init[i]),
            is_rda=bool(is_rda[i]),
            is_malfunctioning=bool(is_malf[i]),
        )
        for i in range(n)
    ]


def regenerate_rda_schedule(node: NodeState, rng: np.random.Generator,
                            config: ScenarioConfig) -> NodeState:
    """Redraw an RDA node's per-round message count and length in place."""
    if not node.is_rda:
        raise ContractViolation(f"node {node.id} is not an RDA node")
    n1, n2 = config.rda_msgs_range
    l1, l2 = config.msg_len_range_bits
    node.msgs_per_round = int(rng.integers(n1, n2 + 1))
    node.msg_len_bits = int(rng.integers(l1, l2 + 1))
    return node
