"""Round-loop orchestration with full energy bookkeeping.

Each round has a setup phase (info broadcasts with optional prediction-based
suppression, head election, cluster formation) and a steady phase of TDMA
frames in which members transmit scheduled data to their head, the head
aggregates and forwards one fused message per data-bearing frame to the base
station.  All energy movements go through debit helpers that log the applied
amounts, clamp at zero, and kill nodes whose energy is exhausted; a blocked
action (message the node cannot afford) is not performed.

A parallel "believed energy" ledger mirrors every debit, with data
transmissions charged at their predicted (noise-free) cost.  This is the
residual-energy value neighbors can compute for an RDA node without hearing
a broadcast; for non-malfunctioning nodes it tracks ground truth exactly.

The steady phase has two equivalent evaluation paths: a vectorized
whole-round path used when every participating node can afford its full
round spend, and a per-frame granular path that handles mid-round deaths.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import eepca
from .baselines import PolicyKind, sep_probabilities
from .model import ScenarioConfig, deploy
from .planner import make_plan
from .radio import rx_energy, tx_energy


@dataclass
class RoundRecord:
    r: int
    head_ids: tuple[int, ...]
    bs_messages: int
    deaths: tuple[int, ...]
    suppressed: tuple[int, ...]
    debits: float
    alive_end: int
    e_total_end: float
    # populated only when the run records full detail
    e_start: Optional[np.ndarray] = None
    e_end: Optional[np.ndarray] = None
    assignment: Optional[np.ndarray] = None
    data_energy: Optional[np.ndarray] = None
    data_energy_predicted: Optional[np.ndarray] = None

    def to_json_dict(self) -> dict:
        d = {
            "r": self.r,
            "heads": list(self.head_ids),
            "bs_messages": self.bs_messages,
            "deaths": list(self.deaths),
            "suppressed": list(self.suppressed),
            "debits": self.debits,
            "alive": self.alive_end,
            "e_total": self.e_total_end,
        }
        if self.e_end is not None:
            d["e_end"] = self.e_end.tolist()
            d["assignment"] = self.assignment.tolist()
        return d


@dataclass
class RunTrace:
    seed: int
    policy: PolicyKind
    config_hash: str
    records: list[RoundRecord] = field(default_factory=list)
    termination: str = "round-limit"  # "all-dead" | "round-limit"
    e_init: Optional[np.ndarray] = None
    e_final: Optional[np.ndarray] = None
    total_debits: float = 0.0

    @property
    def n_rounds(self) -> int:
        return len(self.records)

    def write_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            for rec in self.records:
                fh.write(json.dumps(rec.to_json_dict()) + "\n")


class _Sim:
    """Mutable per-run state; strictly single-threaded and deterministic."""

    def __init__(self, config: ScenarioConfig, policy: PolicyKind, detail: bool):
        self.cfg = config
        self.policy = policy
        self.detail = detail
        radio = config.radio
        nodes = deploy(config)
        n = config.n_nodes
        self.n = n
        self.x = np.array([nd.pos[0] for nd in nodes])
        self.y = np.array([nd.pos[1] for nd in nodes])
        self.e_init = np.array([nd.e_init for nd in nodes])
        self.e = self.e_init.copy()
        self.belief = self.e_init.copy()
        self.alive = self.e > 0.0
        self.is_rda = np.array([nd.is_rda for nd in nodes])
        self.is_malf = np.array([nd.is_malfunctioning for nd in nodes])
        self.r_s = np.zeros(n, dtype=np.int64)
        self.in_g = np.ones(n, dtype=bool)
        self.msg_count = np.zeros(n, dtype=np.int64)
        self.msg_len = np.zeros(n, dtype=np.int64)

        self.rng = np.random.default_rng([config.rng_seed, 1])

        plan = make_plan(config)
        self.plan = plan
        self.p_opt = plan.p_opt
        self.e_ideal = plan.e_consume_avg
        self.nonrda_mean_len = sum(config.nonrda_len_range_bits) / 2.0

        bcast_e = tx_energy(config.broadcast_bits, config.neighbor_radius, radio).joules
        self.bcast_cost = bcast_e
        self.rx_bcast = rx_energy(config.broadcast_bits, radio)
        self.ad_cost = tx_energy(config.broadcast_bits,
                                 config.m_field * math.sqrt(2.0), radio).joules
        # distances as the nodes themselves estimate them from broadcast RSS
        self.d_est = eepca.estimated_distance_matrix(self.x, self.y, radio, bcast_e)
        self.cost_pb = eepca.cost_per_bit_matrix(self.d_est, radio)
        self.neigh = (self.d_est <= config.neighbor_radius) & ~np.eye(n, dtype=bool)
        self.neigh_f = self.neigh.astype(float)
        bx, by = config.bs_xy
        self.d_bs = np.hypot(self.x - bx, self.y - by)
        self.bs_cost = np.array([tx_energy(config.fused_len_bits, d, radio).joules
                                 for d in self.d_bs])
        self.e_da = config.e_da_per_bit
        self.e_elec = radio.e_elec

        if policy is PolicyKind.SEP:
            self.static_p = sep_probabilities(self.e_init, self.p_opt)
        else:
            self.static_p = np.clip(np.full(n, self.p_opt), 1e-12, 1.0 - 1e-12)
        self.unit_w = np.ones(n)
        # the belief ledger only matters where suppression/factors consume it
        self.track_belief = policy is PolicyKind.EEPCA

        self.debits = 0.0

    # --- energy accounting helpers ---------------------------------------

    def _debit_messages(self, idx: np.ndarray, per_msg, per_msg_belief,
                        counts) -> np.ndarray:
        """Debit up to `counts` messages of `per_msg` cost each for nodes idx.

        A node sends whole messages while it can afford them; the first
        unaffordable message drains it to zero (blocked, not delivered).
        Returns the number of delivered messages per node in idx.
        """
        e = self.e[idx]
        per_msg = np.asarray(per_msg, dtype=float)
        if per_msg.ndim == 0:
            if per_msg == 0.0:
                return np.broadcast_to(np.asarray(counts), e.shape).copy()
            afford = np.floor_divide(e, per_msg)
        else:
            afford = np.full(e.shape, np.inf)
            np.floor_divide(e, per_msg, out=afford, where=per_msg > 0)
        delivered = np.minimum(counts, afford)
        failed = delivered < counts
        cost = delivered * per_msg
        applied = np.where(failed, e, cost)
        self.e[idx] = e - applied
        self.debits += float(applied.sum())
        if self.track_belief:
            b_new = np.maximum(self.belief[idx] - delivered * per_msg_belief, 0.0)
            if failed.any():
                b_new[failed] = 0.0
            self.belief[idx] = b_new
        self.alive[idx] = self.e[idx] > 0.0
        return delivered.astype(np.int64)

    def _debit_bulk(self, idx: np.ndarray, amounts: np.ndarray) -> np.ndarray:
        """Debit an aggregate amount (e.g. reception of many messages).

        Returns a mask of nodes that could afford the full amount; the rest
        are drained to zero and die.
        """
        e = self.e[idx]
        ok = e >= amounts
        applied = np.where(ok, amounts, e)
        self.e[idx] = e - applied
        self.debits += float(applied.sum())
        if self.track_belief:
            self.belief[idx] = np.maximum(self.belief[idx] - applied, 0.0)
        self.alive[idx] = self.e[idx] > 0.0
        return ok

    # --- phases -----------------------------------------------------------

    def _setup_broadcasts(self, r: int) -> np.ndarray:
        """Info broadcasts with prediction suppression; returns suppressed mask."""
        cfg = self.cfg
        suppressed = np.zeros(self.n, dtype=bool)
        if (self.policy is PolicyKind.EEPCA and not cfg.disable_suppression and r > 0):
            cand = self.alive & self.is_rda
            if cand.any():
                gam = np.abs(1.0 - self.belief[cand] / self.e[cand])
                if cfg.gamma_rule_literal:
                    ok = gam < cfg.epsilon_tol
                else:
                    ok = gam <= 1.0 - cfg.epsilon_tol
                suppressed[np.flatnonzero(cand)[ok]] = True
        senders = self.alive & ~suppressed
        if self.bcast_cost > 0:
            idx = np.flatnonzero(senders)
            sent = self._debit_messages(idx, self.bcast_cost, self.bcast_cost, 1)
            ok_senders = np.zeros(self.n, dtype=bool)
            ok_senders[idx[sent > 0]] = True
        else:
            ok_senders = senders
        # receptions: each alive node hears each successful neighbor broadcast
        if self.rx_bcast > 0:
            hearers = np.flatnonzero(self.alive)
            heard = (self.neigh_f[hearers] @ ok_senders.astype(float)).astype(np.int64)
            self._debit_messages(hearers, self.rx_bcast, self.rx_bcast, heard)
        # a heard broadcast carries the sender's current energy
        if self.track_belief:
            bsent = ok_senders & self.alive
            self.belief[bsent] = self.e[bsent]
        return suppressed

    def _election(self, r: int) -> np.ndarray:
        cfg = self.cfg
        alive = self.alive
        if self.policy is PolicyKind.EEPCA and not cfg.force_unit_factors:
            neigh_alive = self.neigh & alive[None, :]
            w_e = eepca.energy_factors_all(self.e, self.belief, neigh_alive)
            l_sched = np.where(self.is_rda, self.msg_len, self.nonrda_mean_len)
            e_round = eepca.avg_round_energies_all(l_sched, self.cost_pb,
                                                   neigh_alive, self.e_ideal)
            w_c = eepca.cost_factors_all(self.e_ideal, e_round, cfg.cost_factor_cap)
            w = cfg.alpha * w_e + cfg.beta * w_c
            p = eepca.election_probabilities_all(self.p_opt, w)
        else:  # LEACH, SEP, or EEPCA with factors forced to 1
            p = self.static_p
            w = self.unit_w

        epoch = np.ceil(1.0 / p).astype(np.int64)
        self.in_g |= (r % epoch) == 0
        t = eepca.eepca_thresholds_all(p, r, self.r_s, w, self.in_g)
        u = self.rng.random(self.n)
        elected = alive & (u < t)
        if not elected.any() and alive.any():
            # zero-head repair: draft the alive node with the largest p
            p_masked = np.where(alive, p, -np.inf)
            elected[int(np.argmax(p_masked))] = True
        self.r_s[alive & ~elected] += 1
        self.r_s[elected] = 0
        self.in_g[elected] = False
        return elected

    def _form_clusters(self, heads: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Advertisements, joins; returns (assignment, surviving head mask)."""
        cfg = self.cfg
        assignment = np.full(self.n, -1, dtype=np.int64)
        h_idx = np.flatnonzero(heads)
        if h_idx.size and self.ad_cost > 0:
            sent = self._debit_messages(h_idx, self.ad_cost, self.ad_cost, 1)
            ok_heads_idx = h_idx[sent > 0]
        else:
            ok_heads_idx = h_idx
        ok_heads = np.zeros(self.n, dtype=bool)
        ok_heads[ok_heads_idx] = True
        n_ads = ok_heads_idx.size
        # every alive node hears every successful advertisement but its own
        if n_ads and self.rx_bcast > 0:
            hearers = np.flatnonzero(self.alive)
            counts = n_ads - ok_heads[hearers]
            self._debit_messages(hearers, self.rx_bcast, self.rx_bcast, counts)
        ok_heads &= self.alive
        ok_heads_idx = np.flatnonzero(ok_heads)
        if ok_heads_idx.size == 0:
            return assignment, ok_heads
        members = np.flatnonzero(self.alive & ~ok_heads)
        if members.size:
            # nearest advertisement wins; argmin takes the lowest head id on ties
            d_mh = self.d_est[np.ix_(members, ok_heads_idx)]
            choice = np.argmin(d_mh, axis=1)
            assignment[members] = ok_heads_idx[choice]
            join_cost = (cfg.broadcast_bits
                         * self.cost_pb[members, assignment[members]])
            joined = self._debit_messages(members, join_cost, join_cost, 1)
            assignment[members[joined == 0]] = -1
            members = members[joined > 0]
            if members.size and self.rx_bcast > 0:
                n_join = np.bincount(assignment[members], minlength=self.n)[ok_heads_idx]
                self._debit_messages(ok_heads_idx, self.rx_bcast, self.rx_bcast, n_join)
                if not self.alive[ok_heads_idx].all():
                    ok_heads &= self.alive
                    dead = ~self.alive[assignment[members]]
                    assignment[members[dead]] = -1
        return assignment, ok_heads

    # --- steady phase ------------------------------------------------------

    def _steady(self, assignment: np.ndarray, heads: np.ndarray,
                noise: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
        """TDMA frames; returns (bs message count, actual and predicted
        per-node data-send energy for the round)."""
        cfg = self.cfg
        frames = cfg.frames_per_round
        lo_n, hi_n = cfg.nonrda_len_range_bits
        draws = self.rng.random((frames, self.n))
        l_nr = self.rng.integers(lo_n, hi_n + 1, (frames, self.n))

        f_axis = np.arange(frames)[:, None]
        counts = np.where(self.is_rda[None, :],
                          np.maximum((self.msg_count[None, :] - f_axis + frames - 1)
                                     // frames, 0),
                          (draws < cfg.nonrda_tx_prob_per_frame).astype(np.int64))
        lengths = np.where(self.is_rda[None, :], self.msg_len[None, :], l_nr)

        fast = self._steady_fast(assignment, heads, noise, counts, lengths)
        if fast is not None:
            return fast
        return self._steady_slow(assignment, heads, noise, counts, lengths)

    def _steady_fast(self, assignment, heads, noise, counts, lengths):
        """Whole-round evaluation, valid when no node exhausts mid-round."""
        cfg = self.cfg
        head_alive = heads & self.alive
        safe_assign = np.maximum(assignment, 0)
        member = (assignment >= 0) & self.alive & head_alive[safe_assign]

        cpb_head = self.cost_pb[np.arange(self.n), safe_assign]
        msg_cost_nf = lengths * cpb_head[None, :]          # per message, per frame
        data_nf = (counts * msg_cost_nf).sum(axis=0) * member
        data_act = data_nf * noise

        bits = counts * lengths                            # (frames, n)
        bits_rx = np.zeros((counts.shape[0], self.n))
        member_idx = np.flatnonzero(member)
        for f in range(counts.shape[0]):
            np.add.at(bits_rx[f], assignment[member_idx], bits[f, member_idx])
        total_bits = bits_rx + bits * head_alive[None, :]  # heads sense their own
        rx_spend = bits_rx.sum(axis=0) * self.e_elec * head_alive
        agg_spend = total_bits.sum(axis=0) * self.e_da * head_alive
        bs_frames = ((total_bits > 0) & head_alive[None, :]).sum(axis=0)
        bs_spend = bs_frames * self.bs_cost * head_alive

        spend = data_act + rx_spend + agg_spend + bs_spend
        if not (self.e >= spend).all():
            return None
        self.e -= spend
        self.debits += float(spend.sum())
        if self.track_belief:
            spend_belief = data_nf + rx_spend + agg_spend + bs_spend
            self.belief = np.maximum(self.belief - spend_belief, 0.0)
        self.alive = self.e > 0.0
        return int(bs_frames[head_alive].sum()), data_act, data_nf

    def _steady_slow(self, assignment, heads, noise, counts, lengths):
        """Per-frame granular evaluation handling mid-round deaths."""
        cfg = self.cfg
        bs_msgs = 0
        data_spent = np.zeros(self.n)
        data_pred = np.zeros(self.n)
        for f in range(counts.shape[0]):
            head_alive = heads & self.alive
            safe_assign = np.maximum(assignment, 0)
            bad = (assignment >= 0) & ~head_alive[safe_assign]
            assignment[bad] = -1
            tx_idx = np.flatnonzero((assignment >= 0) & self.alive & (counts[f] > 0))
            bits_rx = np.zeros(self.n)
            if tx_idx.size:
                per_msg_nf = lengths[f, tx_idx] * self.cost_pb[tx_idx, assignment[tx_idx]]
                per_msg = per_msg_nf * noise[tx_idx]
                delivered = self._debit_messages(tx_idx, per_msg, per_msg_nf,
                                                 counts[f, tx_idx])
                data_spent[tx_idx] += delivered * per_msg
                data_pred[tx_idx] += delivered * per_msg_nf
                np.add.at(bits_rx, assignment[tx_idx], delivered * lengths[f, tx_idx])
            h_idx = np.flatnonzero(head_alive & self.alive)
            if h_idx.size == 0:
                continue
            ok = self._debit_bulk(h_idx, bits_rx[h_idx] * self.e_elec)
            h_idx = h_idx[ok]
            if h_idx.size == 0:
                continue
            # heads sense their own data straight into the aggregate
            total_bits = bits_rx[h_idx] + counts[f, h_idx] * lengths[f, h_idx]
            if self.e_da > 0:
                ok = self._debit_bulk(h_idx, total_bits * self.e_da)
                h_idx, total_bits = h_idx[ok], total_bits[ok]
            tx_bs = h_idx[total_bits > 0]
            if tx_bs.size:
                sent = self._debit_messages(tx_bs, self.bs_cost[tx_bs],
                                            self.bs_cost[tx_bs], 1)
                bs_msgs += int(sent.sum())
        return bs_msgs, data_spent, data_pred

    # --- one round ---------------------------------------------------------

    def play_round(self, r: int) -> RoundRecord:
        cfg = self.cfg
        alive_before = self.alive.copy()
        e_start = self.e.copy() if self.detail else None
        self.debits = 0.0

        # per-round RDA schedules (fixed within the round); draws are made for
        # every node so the stream stays aligned across policies
        n1, n2 = cfg.rda_msgs_range
        l1, l2 = cfg.msg_len_range_bits
        nc = self.rng.integers(n1, n2 + 1, self.n)
        lc = self.rng.integers(l1, l2 + 1, self.n)
        self.msg_count[self.is_rda] = nc[self.is_rda]
        self.msg_len[self.is_rda] = lc[self.is_rda]

        suppressed = self._setup_broadcasts(r)
        elected = self._election(r)
        assignment, heads = self._form_clusters(elected)

        lo, hi = cfg.malfunction_noise_range
        noise_draw = self.rng.uniform(lo, hi, self.n)
        noise = np.where(self.is_malf, noise_draw, 1.0)

        if heads.any():
            bs_msgs, data_spent, data_pred = self._steady(assignment, heads, noise)
        else:
            bs_msgs = 0
            data_spent = np.zeros(self.n)
            data_pred = np.zeros(self.n)

        deaths = np.flatnonzero(alive_before & ~self.alive)
        rec = RoundRecord(
            r=r,
            head_ids=tuple(int(i) for i in np.flatnonzero(elected)),
            bs_messages=bs_msgs,
            deaths=tuple(int(i) for i in deaths),
            suppressed=tuple(int(i) for i in np.flatnonzero(suppressed)),
            debits=self.debits,
            alive_end=int(self.alive.sum()),
            e_total_end=float(self.e.sum()),
        )
        if self.detail:
            rec.e_start = e_start
            rec.e_end = self.e.copy()
            rec.assignment = assignment.copy()
            rec.data_energy = data_spent
            rec.data_energy_predicted = data_pred
        return rec


def run(config: ScenarioConfig, policy: PolicyKind | str,
        max_rounds: int = 10000, detail: bool = False) -> RunTrace:
    """Execute one full simulation run; deterministic in (config, policy)."""
    if isinstance(policy, str):
        policy = PolicyKind.parse(policy)
    sim = _Sim(config, policy, detail)
    trace = RunTrace(seed=config.rng_seed, policy=policy,
                     config_hash=config.config_hash(), e_init=sim.e_init.copy())
    total = 0.0
    for r in range(max_rounds):
        if not sim.alive.any():
            break
        rec = sim.play_round(r)
        total += rec.debits
        trace.records.append(rec)
    if not sim.alive.any():
        trace.termination = "all-dead"
    trace.e_final = sim.e.copy()
    trace.total_debits = total
    return trace


def debit(node, joules: float):
    """Single-node debit: clamp at zero, kill on exhaustion, flag blocked actions.

    Returns (node, action_ok).
    """
    if joules < 0:
        raise ValueError("debit amount must be non-negative")
    ok = joules <= node.e_now
    node.e_now = max(0.0, node.e_now - joules)
    node.alive = node.e_now > 0
    return node, ok
