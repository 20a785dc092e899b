from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import make_scenario
from nrbeamsim.errors import ConfigurationError, DomainError
from nrbeamsim.evaluation import (
    KIVIAT_SCALE,
    MetricStat,
    compare,
    estimate_metrics,
    kiviat_normalize,
    merge_stats,
    omega_ia_for,
    omega_tr_for,
    stat_from_samples,
)


class TestMetricStat:
    def test_from_samples(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        st = stat_from_samples(x)
        assert st.mean == 2.5
        assert st.stderr == pytest.approx(x.std(ddof=1) / 2.0)
        assert st.n_samples == 4

    def test_nan_samples_are_dropped(self):
        st = stat_from_samples(np.array([1.0, np.nan, 3.0]))
        assert st.mean == 2.0
        assert st.n_samples == 2

    def test_empty_and_singleton(self):
        assert stat_from_samples(np.array([])).n_samples == 0
        assert math.isnan(stat_from_samples(np.array([])).mean)
        one = stat_from_samples(np.array([7.0]))
        assert (one.mean, one.stderr, one.n_samples) == (7.0, 0.0, 1)

    def test_ci95_symmetric(self):
        st = MetricStat(mean=10.0, stderr=1.0, n_samples=100)
        lo, hi = st.ci95()
        assert (lo, hi) == (10.0 - 1.96, 10.0 + 1.96)


class TestMergeStats:
    def test_matches_pooled_mean(self):
        rng = np.random.default_rng(0)
        x = rng.normal(5.0, 2.0, size=1000)
        whole = stat_from_samples(x)
        parts = [stat_from_samples(x[:300]), stat_from_samples(x[300:])]
        merged = merge_stats(parts)
        assert merged.mean == pytest.approx(whole.mean, rel=1e-12)
        assert merged.n_samples == 1000
        # stderr combines on the same scale, not exactly equal (per-part means)
        assert merged.stderr == pytest.approx(whole.stderr, rel=0.1)

    def test_order_independent(self):
        a = MetricStat(1.0, 0.2, 50)
        b = MetricStat(3.0, 0.1, 150)
        ab = merge_stats([a, b])
        ba = merge_stats([b, a])
        assert ab == ba
        assert ab.mean == pytest.approx(2.5)

    def test_empty_parts_are_skipped(self):
        empty = MetricStat(math.nan, math.nan, 0)
        real = MetricStat(4.0, 0.5, 10)
        assert merge_stats([empty, real]) == real
        assert merge_stats([empty]).n_samples == 0


class TestEstimateMetrics:
    def test_same_seed_reproduces_exactly(self):
        sc = make_scenario(m_gnb=16, m_ue=4, n_ss=8)
        a = estimate_metrics(sc, n_runs=300, seed=5, n_drops=500)
        b = estimate_metrics(sc, n_runs=300, seed=5, n_drops=500)
        assert a == b

    def test_seed_matters(self):
        sc = make_scenario(m_gnb=16, m_ue=4, n_ss=8)
        a = estimate_metrics(sc, n_runs=300, seed=5, n_drops=500)
        b = estimate_metrics(sc, n_runs=300, seed=6, n_drops=500)
        assert a.t_ia.mean != b.t_ia.mean

    def test_nsa_deterministic_legs_have_zero_error(self):
        sc = make_scenario(mode="NSA", lte_latency_ms=10.0)
        rep = estimate_metrics(sc, n_runs=200, seed=1, n_drops=200)
        assert rep.t_br == MetricStat(10.0, 0.0, 200)
        assert rep.t_rlf == MetricStat(10.0, 0.0, 200)

    def test_digital_reporting_leg_is_constant(self):
        sc = make_scenario(m_gnb=16, arch_gnb="digital", m_ue=4, n_ss=8)
        rep = estimate_metrics(sc, n_runs=200, seed=1, n_drops=200)
        assert rep.t_br.stderr == 0.0
        # all blocks sent in one burst: wait (8-8)*4+2 symbols
        assert rep.t_br.mean == pytest.approx(2 * 0.125 / 14)

    def test_report_identity_fields(self):
        sc = make_scenario(m_gnb=8, m_ue=4, n_ss=8, t_ss_ms=40.0)
        rep = estimate_metrics(sc, n_runs=50, seed=2, n_drops=100)
        assert rep.scenario_id == sc.scenario_id
        assert (rep.m_gnb, rep.m_ue) == (8, 4)
        assert (rep.mode, rep.arch_gnb, rep.arch_ue) == ("SA", "analog", "analog")
        assert (rep.n, rep.n_ss, rep.t_ss_ms) == (3, 8, 40.0)
        assert (rep.seed, rep.n_runs) == (2, 50)

    def test_accuracy_is_a_probability(self):
        rep = estimate_metrics(make_scenario(), n_runs=50, seed=3, n_drops=2000)
        assert 0.0 <= rep.accuracy <= 1.0

    def test_rejects_empty_campaign(self):
        with pytest.raises(DomainError):
            estimate_metrics(make_scenario(), n_runs=0)


class TestOverheadViews:
    def test_omega_ia_normalized_grid(self):
        # configured blocks over the burst period, scaled so the densest
        # configuration (64 blocks / 20 ms) sits at 10
        grid = {
            (64, 20.0): 10.0,
            (64, 80.0): 2.5,
            (8, 20.0): 1.25,
            (8, 80.0): 0.3125,
        }
        values = {
            key: omega_ia_for(make_scenario(n_ss=key[0], t_ss_ms=key[1]))
            for key in grid
        }
        top = max(values.values())
        for key, expect in grid.items():
            assert 10.0 * values[key] / top == pytest.approx(expect, rel=1e-12)

    def test_omega_ia_counts_configured_blocks(self):
        # the same n_ss costs the same even when the sweep needs fewer
        a = omega_ia_for(make_scenario(m_gnb=4, m_ue=1, n_ss=64))
        b = omega_ia_for(make_scenario(m_gnb=64, m_ue=1, n_ss=64))
        assert a == b

    def test_omega_tr_ignores_collisions(self):
        # the reserved share does not depend on how bursts overlap it
        clear = omega_tr_for(make_scenario())
        shifted = omega_tr_for(make_scenario(t_ss_ms=80.0))
        assert clear == pytest.approx(shifted, rel=1e-12)

    def test_omega_tr_frozen_default(self):
        # 1 symbol x 50 RB every 5 slots on a 277-RB carrier
        expect = 50 / (5 * 14 * 277)
        assert omega_tr_for(make_scenario()) == pytest.approx(expect, rel=1e-12)


class TestCompare:
    def _two_reports(self):
        sa = estimate_metrics(make_scenario(n_ss=8), n_runs=400, seed=7, n_drops=400)
        nsa = estimate_metrics(
            make_scenario(mode="NSA", lte_latency_ms=0.8, n_ss=8),
            n_runs=400,
            seed=7,
            n_drops=400,
        )
        return sa, nsa

    def test_ranks_best_first(self):
        sa, nsa = self._two_reports()
        rows = {r.metric: r for r in compare([sa, nsa])}
        br = rows["t_br_ms"]
        assert br.scenario_ids[0] == nsa.scenario_id
        assert br.values[0] <= br.values[1]
        acc = rows["accuracy"]
        assert acc.values[0] >= acc.values[1]

    def test_significance_for_deterministic_metric(self):
        sa, nsa = self._two_reports()
        rows = {r.metric: r for r in compare([sa, nsa])}
        assert rows["omega_br"].significant == (True,)
        # identical omega_ia on both: never significant
        assert rows["omega_ia"].significant == (False,)

    def test_needs_two_reports(self):
        sa, _ = self._two_reports()
        with pytest.raises(DomainError):
            compare([sa])


class TestKiviat:
    def _reports(self):
        quick = estimate_metrics(
            make_scenario(m_gnb=4, m_ue=1, n_ss=8), n_runs=200, seed=9, n_drops=200
        )
        slow = estimate_metrics(
            make_scenario(m_gnb=64, m_ue=1, n_ss=8), n_runs=200, seed=9, n_drops=200
        )
        return quick, slow

    def test_axis_maximum_is_the_scale(self):
        quick, slow = self._reports()
        ks = kiviat_normalize([quick, slow])
        for a in range(len(ks.axes)):
            col = [ks.values[i][a] for i in range(2)]
            assert max(col) == pytest.approx(KIVIAT_SCALE)
            assert all(0 <= v <= KIVIAT_SCALE + 1e-12 for v in col)

    def test_delays_invert_to_reactiveness(self):
        quick, slow = self._reports()
        ks = kiviat_normalize([quick, slow], axes=("t_ia_ms",))
        assert ks.axes == ("ia_reactiveness",)
        # the faster scenario scores higher
        assert ks.values[0][0] > ks.values[1][0]
        assert ks.raw[0][0] == pytest.approx(1.0 / quick.t_ia.mean)

    def test_scale_invariance(self):
        quick, slow = self._reports()
        a = kiviat_normalize([quick, slow]).values
        b = kiviat_normalize([slow, quick]).values
        assert a[0] == b[1]
        assert a[1] == b[0]

    def test_unknown_axis_rejected(self):
        quick, slow = self._reports()
        with pytest.raises(DomainError):
            kiviat_normalize([quick, slow], axes=("nonsense",))

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            kiviat_normalize([])
