"""Campaign evaluation: metric estimation, comparison, kiviat scaling.

``estimate_metrics`` runs the Monte Carlo campaigns for one scenario and
collects the deterministic quantities (overheads, power, detection
accuracy at fixed seed) into a single report. Metrics that are
analytically constant (the LTE leg latency in NSA, the digital gNB's
reporting tail) are written down directly rather than averaged, so they
carry zero error and zero spread by construction.

Seeding: one root seed spawns independent substreams per campaign in a
fixed order, so reports are reproducible bit for bit and merging partial
campaigns is order-independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .codebook import power_consumption_w
from .errors import ConfigurationError, DomainError
from .frame import (
    EventKind,
    Timeline,
    build_csi_timeline,
    build_ss_timeline,
    overhead,
)
from .link import misdetection_probability
from .procedures import (
    DeploymentMode,
    Scenario,
    omega_br,
    simulate_ia_batch,
    simulate_rlf_batch,
    simulate_tracking_batch,
    sweep_plan,
)

Z_95 = 1.96


@dataclass(frozen=True)
class MetricStat:
    """Sample mean with its standard error; stderr 0 when deterministic."""

    mean: float
    stderr: float
    n_samples: int

    def ci95(self) -> tuple[float, float]:
        return (self.mean - Z_95 * self.stderr, self.mean + Z_95 * self.stderr)


def stat_from_samples(x: np.ndarray) -> MetricStat:
    x = np.asarray(x, dtype=np.float64)
    x = x[~np.isnan(x)]
    n = int(x.size)
    if n == 0:
        return MetricStat(mean=math.nan, stderr=math.nan, n_samples=0)
    if n == 1:
        return MetricStat(mean=float(x[0]), stderr=0.0, n_samples=1)
    return MetricStat(
        mean=float(x.mean()),
        stderr=float(x.std(ddof=1) / math.sqrt(n)),
        n_samples=n,
    )


def merge_stats(parts: Sequence[MetricStat]) -> MetricStat:
    """Count-weighted merge of partial campaign stats.

    Means combine exactly; the merged stderr treats parts as independent
    (squared errors weighted by squared counts), which is what splitting
    one campaign across workers produces.
    """
    parts = [p for p in parts if p.n_samples > 0]
    if not parts:
        return MetricStat(mean=math.nan, stderr=math.nan, n_samples=0)
    n = sum(p.n_samples for p in parts)
    mean = sum(p.mean * p.n_samples for p in parts) / n
    var = sum((p.stderr * p.n_samples) ** 2 for p in parts) / n**2
    return MetricStat(mean=mean, stderr=math.sqrt(var), n_samples=n)


DELAY_METRICS = ("t_ia_ms", "t_tr_ms", "t_br_ms", "t_rlf_ms")
SCALAR_METRICS = ("omega_ia", "omega_tr", "omega_br", "accuracy", "p_c_w")
ALL_METRICS = DELAY_METRICS + SCALAR_METRICS


@dataclass(frozen=True)
class MetricsReport:
    """Everything measured for one scenario, plus identifying config."""

    scenario_id: str
    mode: str
    m_gnb: int
    m_ue: int
    arch_gnb: str
    arch_ue: str
    n: int
    n_ss: int
    t_ss_ms: float
    t_csi_slots: int
    t_ia: MetricStat
    t_tr: MetricStat
    t_br: MetricStat
    t_rlf: MetricStat
    omega_ia: float
    omega_tr: float
    omega_br: float
    accuracy: float
    p_c_w: float
    seed: int
    n_runs: int
    censored_tracking: int = 0

    def metric_value(self, key: str) -> float:
        if key == "t_ia_ms":
            return self.t_ia.mean
        if key == "t_tr_ms":
            return self.t_tr.mean
        if key == "t_br_ms":
            return self.t_br.mean
        if key == "t_rlf_ms":
            return self.t_rlf.mean
        if key in SCALAR_METRICS:
            return getattr(self, key)
        raise DomainError(f"unknown metric {key!r}")

    def metric_stat(self, key: str) -> Optional[MetricStat]:
        return {
            "t_ia_ms": self.t_ia,
            "t_tr_ms": self.t_tr,
            "t_br_ms": self.t_br,
            "t_rlf_ms": self.t_rlf,
        }.get(key)


def omega_ia_for(sc: Scenario) -> float:
    """SS-block share of the grid over one burst period (configured view)."""
    tl = build_ss_timeline(sc.ss, sc.numerology, horizon_ms=sc.ss.t_ss_ms)
    return overhead(tl, (EventKind.SS_BLOCK,), sc.ss.t_ss_ms, sc.carrier_rb)


def omega_tr_for(sc: Scenario) -> float:
    """CSI-RS share of the grid on the nominal (pre-collision) grid.

    Collisions reallocate an occasion's grid area to the SS burst, they
    do not hand it back to data, so the reserved share is what counts.
    """
    period_ms = sc.csi.t_csi_slots * sc.numerology.slot_ms
    empty_ss = Timeline(
        horizon_symbols=0, symbol_us=sc.numerology.symbol_us, events=()
    )
    tl = build_csi_timeline(
        sc.csi,
        empty_ss,
        sc.numerology,
        horizon_ms=3 * period_ms,
        carrier_rb=sc.carrier_rb,
    )
    return overhead(tl, (EventKind.CSI_RS,), 2 * period_ms, sc.carrier_rb)


def estimate_metrics(
    sc: Scenario,
    n_runs: int = 10_000,
    seed: int = 0,
    n_drops: Optional[int] = None,
    horizon_ms: float = 500.0,
) -> MetricsReport:
    """Run all campaigns for one scenario and assemble the report."""
    if n_runs < 1:
        raise DomainError(f"n_runs={n_runs}: need at least one run")
    root = np.random.SeedSequence(seed)
    ia_ss, tr_ss, rlf_ss, md_ss = root.spawn(4)

    ia = simulate_ia_batch(sc, n_runs, np.random.default_rng(ia_ss))
    t_ia = stat_from_samples(ia.t_total_ms)

    waits, censored = simulate_tracking_batch(
        sc, n_runs, np.random.default_rng(tr_ss), horizon_ms=horizon_ms
    )
    t_tr = stat_from_samples(waits)

    plan = sweep_plan(sc)
    if sc.mode is DeploymentMode.NSA:
        assert sc.lte_latency_ms is not None
        t_br = MetricStat(mean=sc.lte_latency_ms, stderr=0.0, n_samples=n_runs)
        t_rlf = MetricStat(mean=sc.lte_latency_ms, stderr=0.0, n_samples=n_runs)
    else:
        if plan.digital_gnb:
            t_br = MetricStat(
                mean=plan.digital_tail_sym * plan.symbol_ms,
                stderr=0.0,
                n_samples=n_runs,
            )
        else:
            t_br = stat_from_samples(ia.t_br_ms)
        rlf = simulate_rlf_batch(sc, n_runs, np.random.default_rng(rlf_ss))
        t_rlf = stat_from_samples(rlf.t_total_ms)

    acc_drops = n_drops if n_drops is not None else n_runs
    p_md = misdetection_probability(sc.gnb, sc.ue, sc.channel, acc_drops, md_ss)

    return MetricsReport(
        scenario_id=sc.scenario_id,
        mode=sc.mode.value,
        m_gnb=sc.gnb.elements,
        m_ue=sc.ue.elements,
        arch_gnb=sc.gnb.arch.value,
        arch_ue=sc.ue.arch.value,
        n=sc.numerology.n,
        n_ss=sc.ss.n_ss,
        t_ss_ms=sc.ss.t_ss_ms,
        t_csi_slots=sc.csi.t_csi_slots,
        t_ia=t_ia,
        t_tr=t_tr,
        t_br=t_br,
        t_rlf=t_rlf,
        omega_ia=omega_ia_for(sc),
        omega_tr=omega_tr_for(sc),
        omega_br=omega_br(sc),
        accuracy=1.0 - p_md,
        p_c_w=power_consumption_w(sc.gnb, sc.power),
        seed=seed,
        n_runs=n_runs,
        censored_tracking=int(np.count_nonzero(censored)),
    )


@dataclass(frozen=True)
class ComparisonRow:
    """One metric's ranking across scenarios.

    ``scenario_ids`` are sorted best-first (smallest delay/overhead/power,
    highest accuracy). ``significant[i]`` says whether ranks i and i+1
    have non-overlapping 95 percent confidence intervals; deterministic
    metrics are significant whenever the values differ.
    """

    metric: str
    scenario_ids: tuple[str, ...]
    values: tuple[float, ...]
    significant: tuple[bool, ...]


def compare(reports: Sequence[MetricsReport]) -> list[ComparisonRow]:
    """Rank scenarios per metric with a significance flag per adjacent pair."""
    if len(reports) < 2:
        raise DomainError("compare needs at least two reports")
    rows = []
    for key in ALL_METRICS:
        reverse = key == "accuracy"

        def rank_key(r: MetricsReport, key: str = key, reverse: bool = reverse):
            v = r.metric_value(key)
            if math.isnan(v):
                v = math.inf if not reverse else -math.inf
            return (-v if reverse else v, r.scenario_id)

        ordered = sorted(reports, key=rank_key)
        sig = []
        for a, b in zip(ordered, ordered[1:]):
            sa, sb = a.metric_stat(key), b.metric_stat(key)
            va, vb = a.metric_value(key), b.metric_value(key)
            if sa is None or sb is None:
                sig.append(bool(va != vb and not (math.isnan(va) or math.isnan(vb))))
            else:
                lo_a, hi_a = sa.ci95()
                lo_b, hi_b = sb.ci95()
                disjoint = hi_a < lo_b or hi_b < lo_a
                sig.append(bool(disjoint))
        rows.append(
            ComparisonRow(
                metric=key,
                scenario_ids=tuple(r.scenario_id for r in ordered),
                values=tuple(r.metric_value(key) for r in ordered),
                significant=tuple(sig),
            )
        )
    return rows


KIVIAT_SCALE = 10.0

REACTIVENESS_AXES = {
    "t_ia_ms": "ia_reactiveness",
    "t_tr_ms": "tracking_reactiveness",
    "t_br_ms": "reporting_reactiveness",
    "t_rlf_ms": "recovery_reactiveness",
}


@dataclass(frozen=True)
class KiviatSet:
    """Axis-normalized metric values for radar-style comparison.

    Delays enter as reactiveness (1/mean) before scaling; every axis is
    scaled so its best scenario sits at exactly ``KIVIAT_SCALE``.
    """

    axes: tuple[str, ...]
    scenario_ids: tuple[str, ...]
    raw: tuple[tuple[float, ...], ...]
    values: tuple[tuple[float, ...], ...]


def kiviat_normalize(
    reports: Sequence[MetricsReport],
    axes: Iterable[str] = ("t_ia_ms", "t_tr_ms", "omega_ia", "omega_tr"),
) -> KiviatSet:
    """Scale each axis to [0, 10] with the per-axis maximum at 10."""
    reports = list(reports)
    if not reports:
        raise DomainError("kiviat_normalize needs at least one report")
    axes = tuple(axes)
    axis_names = []
    raw_cols = []
    for key in axes:
        if key in REACTIVENESS_AXES:
            col = []
            for r in reports:
                mean = r.metric_value(key)
                if not mean > 0 or math.isnan(mean):
                    raise ConfigurationError(
                        f"kiviat axis {key}: scenario {r.scenario_id} has "
                        f"non-positive mean delay {mean!r}"
                    )
                col.append(1.0 / mean)
            axis_names.append(REACTIVENESS_AXES[key])
        elif key in SCALAR_METRICS:
            col = [r.metric_value(key) for r in reports]
            axis_names.append(key)
        else:
            raise DomainError(f"unknown kiviat axis {key!r}")
        raw_cols.append(col)

    value_cols = []
    for name, col in zip(axis_names, raw_cols):
        top = max(col)
        if not top > 0:
            raise ConfigurationError(f"kiviat axis {name}: all values are zero")
        value_cols.append([KIVIAT_SCALE * v / top for v in col])

    n = len(reports)
    return KiviatSet(
        axes=tuple(axis_names),
        scenario_ids=tuple(r.scenario_id for r in reports),
        raw=tuple(tuple(raw_cols[a][i] for a in range(len(axes))) for i in range(n)),
        values=tuple(
            tuple(value_cols[a][i] for a in range(len(axes))) for i in range(n)
        ),
    )
