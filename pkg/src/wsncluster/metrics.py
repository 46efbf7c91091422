"""Lifetime, stability and monitoring-quality metrics with multi-seed aggregation.

Death milestones are read off the alive-vs-round curve: first node death,
10% death (the stable period), 50% death and last node death.  Monitoring
quality is the cumulative count of fused messages the base station received.
Milestones that never occur before the round limit are censored.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field
from typing import Optional

from .engine import RunTrace


CENSORED = None  # milestone not reached before the round limit


@dataclass
class MetricsSummary:
    seed: Optional[int] = None
    policy: Optional[str] = None
    fnd_round: Optional[float] = None
    p10_round: Optional[float] = None
    p50_round: Optional[float] = None
    lnd_round: Optional[float] = None
    bs_messages_total: float = 0.0
    cumulative_bs_messages: list[int] = field(default_factory=list)
    alive_curve: list[int] = field(default_factory=list)
    n_rounds: int = 0
    # aggregate-only fields
    n_summaries: int = 0
    censored_counts: dict[str, int] = field(default_factory=dict)
    stddev: dict[str, float] = field(default_factory=dict)

    _MILESTONES = ("fnd_round", "p10_round", "p50_round", "lnd_round")


def summarize(trace: RunTrace) -> MetricsSummary:
    """Per-run metrics from a trace."""
    if not trace.records:
        raise ValueError("cannot summarize an empty trace")
    n = trace.e_init.size
    dead = 0
    fnd = p10 = p50 = lnd = CENSORED
    cum = []
    alive_curve = []
    total = 0
    for rec in trace.records:
        dead += len(rec.deaths)
        total += rec.bs_messages
        cum.append(total)
        alive_curve.append(rec.alive_end)
        if fnd is CENSORED and dead >= 1:
            fnd = rec.r
        if p10 is CENSORED and dead >= math.ceil(0.1 * n):
            p10 = rec.r
        if p50 is CENSORED and dead >= math.ceil(0.5 * n):
            p50 = rec.r
        if lnd is CENSORED and dead >= n:
            lnd = rec.r
    return MetricsSummary(
        seed=trace.seed,
        policy=trace.policy.value,
        fnd_round=fnd,
        p10_round=p10,
        p50_round=p50,
        lnd_round=lnd,
        bs_messages_total=total,
        cumulative_bs_messages=cum,
        alive_curve=alive_curve,
        n_rounds=len(trace.records),
        n_summaries=1,
    )


def aggregate(summaries: list[MetricsSummary]) -> MetricsSummary:
    """Mean and sample stddev across summaries; censored values are excluded
    per milestone with the exclusion count reported."""
    if not summaries:
        raise ValueError("need at least one summary")
    out = MetricsSummary(policy=summaries[0].policy, n_summaries=len(summaries))
    for name in MetricsSummary._MILESTONES:
        values = [getattr(s, name) for s in summaries]
        present = [v for v in values if v is not CENSORED]
        out.censored_counts[name] = len(values) - len(present)
        if not present:
            setattr(out, name, CENSORED)
            continue
        setattr(out, name, statistics.fmean(present))
        out.stddev[name] = statistics.stdev(present) if len(present) > 1 else 0.0
    totals = [s.bs_messages_total for s in summaries]
    out.bs_messages_total = statistics.fmean(totals)
    out.stddev["bs_messages_total"] = statistics.stdev(totals) if len(totals) > 1 else 0.0
    return out


def all_censored(summary: MetricsSummary) -> bool:
    return all(getattr(summary, m) is CENSORED for m in MetricsSummary._MILESTONES)


SUMMARY_COLUMNS = ["policy", "seed", "sweep_var", "sweep_value", "config_hash",
                   "fnd_round", "p10_round", "p50_round", "lnd_round",
                   "bs_messages_total", "n_rounds", "termination"]

CURVE_COLUMNS = ["policy", "seed", "sweep_var", "sweep_value", "round", "alive", "bs_cum"]


def write_summary_csv(path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row.get(k))
                             for k in SUMMARY_COLUMNS})


def write_curves_csv(path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CURVE_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def summary_row(summary: MetricsSummary, trace: RunTrace,
                sweep_var: str = "none", sweep_value="") -> dict:
    return {
        "policy": summary.policy,
        "seed": summary.seed,
        "sweep_var": sweep_var,
        "sweep_value": sweep_value,
        "config_hash": trace.config_hash,
        "fnd_round": summary.fnd_round,
        "p10_round": summary.p10_round,
        "p50_round": summary.p50_round,
        "lnd_round": summary.lnd_round,
        "bs_messages_total": summary.bs_messages_total,
        "n_rounds": summary.n_rounds,
        "termination": trace.termination,
    }


def curve_rows(summary: MetricsSummary, sweep_var: str = "none", sweep_value="") -> list[dict]:
    return [
        {"policy": summary.policy, "seed": summary.seed, "sweep_var": sweep_var,
         "sweep_value": sweep_value, "round": r, "alive": alive, "bs_cum": bs}
        for r, (alive, bs) in enumerate(zip(summary.alive_curve,
                                            summary.cumulative_bs_messages))
    ]
