"""Cluster-head election for the prediction-clustering protocol.

Each round, a node weighs two factors: how its residual energy compares with
the mean believed energy of its neighbors (energy factor), and how cheap one
intra-cluster transmission would be if it served as head, relative to the
ideal analytic value (communication-cost factor).  The weighted combination
scales the base head proportion into a per-node election probability, which
feeds a rotation threshold that also rewards nodes that have gone unelected
for whole rotation epochs.

Scalar functions define the per-node contracts; the *_all variants are the
vectorized forms the engine uses, and tests pin their equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import NodeState, RadioParams
from .radio import estimate_distance, received_power, rx_energy, tx_energy, tx_energy_per_bit


# --- energy factor -----------------------------------------------------------

def energy_factor(e_i: float, neighbor_energies) -> float:
    """Node energy over the mean believed energy of its neighbors.

    An empty neighborhood gives no information; the factor defaults to 1.
    """
    neighbor_energies = list(neighbor_energies)
    if not neighbor_energies:
        return 1.0
    mean = sum(neighbor_energies) / len(neighbor_energies)
    if mean <= 0:
        return 1.0
    return e_i / mean


def energy_factors_all(e: np.ndarray, belief: np.ndarray, neigh: np.ndarray) -> np.ndarray:
    """Vectorized energy factor; neigh[i, j] marks j as a live neighbor of i."""
    counts = neigh.sum(axis=1)
    sums = neigh @ belief
    out = np.ones_like(e)
    ok = (counts > 0) & (sums > 0)
    out[ok] = e[ok] * counts[ok] / sums[ok]
    return out


# --- communication-cost factor ----------------------------------------------

def avg_round_energy_if_head(lengths, distances, radio: RadioParams,
                             ideal_fallback: float = 0.0) -> float:
    """Mean energy of one transmission from each neighbor to this node.

    With no neighbors the ideal value is returned so the cost factor
    degenerates to 1.
    """
    lengths = list(lengths)
    distances = list(distances)
    if not lengths:
        return ideal_fallback
    total = sum(tx_energy(l, d, radio).joules for l, d in zip(lengths, distances))
    return total / len(lengths)


def avg_round_energies_all(l_sched: np.ndarray, cost_per_bit: np.ndarray,
                           neigh: np.ndarray, ideal_fallback: float) -> np.ndarray:
    """Vectorized per-node mean neighbor-to-node transmission energy.

    cost_per_bit is the static matrix e_elec + amplifier(d_ij); l_sched holds
    each node's scheduled message length for this round.
    """
    counts = neigh.sum(axis=1)
    sums = (cost_per_bit * neigh) @ l_sched
    out = np.full(l_sched.shape, ideal_fallback, dtype=float)
    ok = counts > 0
    out[ok] = sums[ok] / counts[ok]
    return out


def cost_factor(e_ideal: float, e_i_round: float, cap: float = 5.0) -> float:
    """Ideal per-transmission energy over this node's would-be intra-cluster mean."""
    if e_i_round <= 0:
        return cap
    return min(e_ideal / e_i_round, cap)


def cost_factors_all(e_ideal: float, e_round: np.ndarray, cap: float) -> np.ndarray:
    out = np.full(e_round.shape, cap, dtype=float)
    ok = e_round > 0
    out[ok] = np.minimum(e_ideal / e_round[ok], cap)
    return out


# --- election probability and threshold -------------------------------------

_P_EPS = 1e-12


def election_probability(p_opt: float, w_energy: float, w_cost: float,
                         alpha: float, beta: float) -> float:
    """p_i = p_opt * (alpha*w_energy + beta*w_cost), clamped into (0, 1)."""
    p = p_opt * (alpha * w_energy + beta * w_cost)
    return min(max(p, _P_EPS), 1.0 - _P_EPS)


def election_probabilities_all(p_opt: float, w: np.ndarray) -> np.ndarray:
    return np.clip(p_opt * w, _P_EPS, 1.0 - _P_EPS)


def rotation_epoch(p_i: float) -> int:
    """Rounds per rotation epoch: ceil(1/p_i), so the epoch is always finite."""
    return int(math.ceil(1.0 / p_i))


def eepca_threshold(p_i: float, r: int, r_s: int, w: float, in_g: bool) -> float:
    """Election threshold for one node.

    With w == 1 and r_s below one epoch this reduces to the classic rotation
    threshold p/(1 - p*(r mod epoch)).  Larger r_s (whole epochs unelected)
    pulls the bracket toward 1.  Clamped into [0, 1].
    """
    if not in_g:
        return 0.0
    epoch = rotation_epoch(p_i)
    denom = 1.0 - p_i * (r % epoch)
    if denom <= 0:
        return 1.0
    base = p_i / denom
    t = base * (w + (r_s // epoch) * (1.0 - w))
    return min(max(t, 0.0), 1.0)


def eepca_thresholds_all(p: np.ndarray, r: int, r_s: np.ndarray, w: np.ndarray,
                         in_g: np.ndarray) -> np.ndarray:
    epoch = np.ceil(1.0 / p).astype(np.int64)
    denom = 1.0 - p * (r % epoch)
    base = np.where(denom > 0, p / np.where(denom > 0, denom, 1.0), 1.0)
    t = base * (w + (r_s // epoch) * (1.0 - w))
    return np.clip(t, 0.0, 1.0) * in_g


# --- neighbor tables (object form, used by tests and debugging) -------------

@dataclass
class NeighborEntry:
    id: int
    distance: float
    e_known: float
    rda_schedule: tuple[int, int] | None = None
    e_predicted: float | None = None
    ch_id: int | None = None
    d_to_ch: float | None = None


@dataclass
class NeighborTable:
    owner: int
    entries: dict[int, NeighborEntry] = field(default_factory=dict)


def build_neighbor_tables(nodes: list[NodeState], radio: RadioParams,
                          neighbor_radius: float,
                          broadcast_bits: int = 2500) -> dict[int, NeighborTable]:
    """Simulate a local info-broadcast round and build per-node tables.

    Every alive node broadcasts once at neighbor_radius reach (debited to the
    broadcaster); every alive node within range hears it (debited per heard
    broadcast) and estimates the distance from the received signal strength.
    Dead nodes neither appear in tables nor pay anything.
    """
    alive = [n for n in nodes if n.alive and n.e_now > 0]
    tables = {n.id: NeighborTable(owner=n.id) for n in alive}
    e_tran = tx_energy(broadcast_bits, neighbor_radius, radio).joules
    for sender in alive:
        sender.e_now = max(0.0, sender.e_now - e_tran)
    for sender in alive:
        sx, sy = sender.pos
        for hearer in alive:
            if hearer.id == sender.id:
                continue
            hx, hy = hearer.pos
            d_true = math.hypot(sx - hx, sy - hy)
            if d_true > neighbor_radius or d_true == 0.0:
                continue
            d_est = estimate_distance(e_tran, received_power(e_tran, d_true, radio), radio)
            hearer.e_now = max(0.0, hearer.e_now - rx_energy(broadcast_bits, radio))
            sched = (sender.msgs_per_round, sender.msg_len_bits) if sender.is_rda else None
            tables[hearer.id].entries[sender.id] = NeighborEntry(
                id=sender.id, distance=d_est, e_known=sender.e_now,
                rda_schedule=sched, e_predicted=sender.e_predicted_next)
    return tables


def estimated_distance_matrix(x: np.ndarray, y: np.ndarray,
                              radio: RadioParams, broadcast_energy: float) -> np.ndarray:
    """All-pairs distances as nodes would estimate them from broadcast RSS."""
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    d_true = np.hypot(dx, dy)
    est = np.zeros_like(d_true)
    off = d_true > 0
    rec = radio.k_rss * broadcast_energy / d_true[off] ** radio.alpha_pathloss
    est[off] = (radio.k_rss * broadcast_energy / rec) ** (1.0 / radio.alpha_pathloss)
    return est


def cost_per_bit_matrix(d_est: np.ndarray, radio: RadioParams) -> np.ndarray:
    """Static matrix of per-bit neighbor-to-node transmission cost."""
    return tx_energy_per_bit(d_est, radio)
