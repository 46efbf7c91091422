import numpy as np
import pytest

from wsncluster.baselines import PolicyKind
from wsncluster.engine import RoundRecord, RunTrace
from wsncluster.metrics import (CENSORED, MetricsSummary, aggregate,
                                all_censored, curve_rows, summarize,
                                summary_row)


def _trace(death_plan, n=10, bs_per_round=2, seed=0):
    """Hand-built trace: death_plan maps round -> node ids that die there."""
    records = []
    alive = n
    for r in range(max(death_plan, default=-1) + 1 or 1):
        deaths = tuple(death_plan.get(r, ()))
        alive -= len(deaths)
        records.append(RoundRecord(
            r=r, head_ids=(0,), bs_messages=bs_per_round, deaths=deaths,
            suppressed=(), debits=0.01, alive_end=alive, e_total_end=float(alive)))
    return RunTrace(seed=seed, policy=PolicyKind.LEACH, config_hash="x" * 16,
                    records=records, e_init=np.ones(n),
                    termination="all-dead" if alive == 0 else "round-limit")


class TestSummarize:
    def test_milestones_from_hand_built_curve(self):
        # 10 nodes: first death round 3, 10% also round 3, half dead round 6,
        # all dead round 9
        plan = {3: (0,), 6: (1, 2, 3, 4), 9: (5, 6, 7, 8, 9)}
        s = summarize(_trace(plan))
        assert s.fnd_round == 3
        assert s.p10_round == 3
        assert s.p50_round == 6
        assert s.lnd_round == 9

    def test_half_milestone_uses_ceiling(self):
        # 5 nodes: 50% death needs ceil(2.5) = 3 dead
        plan = {1: (0, 1), 4: (2,), 5: (3, 4)}
        s = summarize(_trace(plan, n=5))
        assert s.p10_round == 1
        assert s.p50_round == 4

    def test_censored_when_no_deaths(self):
        s = summarize(_trace({}, n=10))
        assert s.fnd_round is CENSORED
        assert s.lnd_round is CENSORED
        assert all_censored(s)

    def test_bs_accumulation(self):
        s = summarize(_trace({2: (0,)}, bs_per_round=3))
        assert s.bs_messages_total == 9
        assert s.cumulative_bs_messages == [3, 6, 9]
        assert s.alive_curve[-1] == 9

    def test_empty_trace_rejected(self):
        empty = RunTrace(seed=0, policy=PolicyKind.LEACH, config_hash="",
                         e_init=np.ones(3))
        with pytest.raises(ValueError):
            summarize(empty)


class TestAggregate:
    def test_mean_and_sample_stddev(self):
        a = summarize(_trace({2: (0,), 5: tuple(range(1, 10))}))
        b = summarize(_trace({4: (0,), 7: tuple(range(1, 10))}))
        agg = aggregate([a, b])
        assert agg.fnd_round == pytest.approx(3.0)
        assert agg.lnd_round == pytest.approx(6.0)
        assert agg.stddev["fnd_round"] == pytest.approx(np.std([2, 4], ddof=1))
        assert agg.n_summaries == 2

    def test_censored_excluded_with_counts(self):
        dead = summarize(_trace({1: tuple(range(10))}))
        alive = summarize(_trace({}, n=10))
        agg = aggregate([dead, alive])
        assert agg.fnd_round == pytest.approx(1.0)
        assert agg.censored_counts["fnd_round"] == 1

    def test_all_censored_propagates(self):
        agg = aggregate([summarize(_trace({})), summarize(_trace({}))])
        assert agg.fnd_round is CENSORED
        assert agg.censored_counts["fnd_round"] == 2

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])


class TestRows:
    def test_summary_row_fields(self):
        trace = _trace({1: (0,)})
        row = summary_row(summarize(trace), trace, "alpha", 0.7)
        assert row["policy"] == "leach"
        assert row["sweep_var"] == "alpha"
        assert row["fnd_round"] == 1
        assert row["config_hash"] == "x" * 16

    def test_curve_rows_align_with_rounds(self):
        s = summarize(_trace({2: (0,)}))
        rows = curve_rows(s)
        assert len(rows) == s.n_rounds
        assert rows[0]["round"] == 0
        assert rows[-1]["alive"] == 9
