"""Energy-consumption prediction for regular-data-acquisition nodes.

An RDA node's round consumption is fully determined by its schedule and its
distance to the head, so neighbors can compute its residual energy without
hearing a fresh broadcast.  A node compares its actual residual with the
value neighbors would compute; when the relative error gamma is within
tolerance it suppresses its setup broadcast and lets neighbors use the
computed value instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ContractViolation, NodeState, RadioParams
from .radio import tx_energy


@dataclass(frozen=True)
class PredictionRecord:
    node_id: int
    e_round_start: float
    e_consume_predicted: float
    e_predicted_next: float
    gamma: float
    suppressed: bool


def predict_round_consumption(node: NodeState, d_to_head: float,
                              radio: RadioParams) -> float:
    """Data-send energy of an RDA node for one round: n_j transmissions of
    l_j bits to a head at the given distance."""
    if not node.is_rda:
        raise ContractViolation(f"node {node.id} is not an RDA node")
    return node.msgs_per_round * tx_energy(node.msg_len_bits, d_to_head, radio).joules


def gamma(e_predicted: float, e_actual: float) -> float:
    """Relative prediction error |1 - predicted/actual|."""
    if e_actual <= 0:
        raise ContractViolation("gamma is undefined for a dead node (e_actual <= 0)")
    return abs(1.0 - e_predicted / e_actual)


def should_suppress_broadcast(gamma_value: float, epsilon_tol: float,
                              literal_rule: bool = False) -> bool:
    """Suppress the setup broadcast when the prediction error is tolerable.

    Default rule: suppress iff gamma <= 1 - epsilon_tol, so epsilon_tol = 1
    means zero tolerance (any error forces a broadcast) and lower values
    tolerate larger errors.  literal_rule uses gamma < epsilon_tol instead.
    """
    if literal_rule:
        return gamma_value < epsilon_tol
    return gamma_value <= 1.0 - epsilon_tol
