"""NR frame structure at OFDM-symbol resolution.

This module provides the timing substrate for everything else: flexible
numerologies (3GPP TS 38.211), synchronization signal (SS) bursts, CSI-RS
occasions and RACH opportunities, all placed on a discrete grid whose unit
is one OFDM symbol in time and one resource block (RB) in frequency.

Conventions
-----------
* Time is counted in OFDM symbols from the start of the first SS burst
  (symbol 0). A slot always carries 14 symbols (normal cyclic prefix).
* Frequency is counted in resource blocks of 12 subcarriers at the
  configured subcarrier spacing.
* An SS block spans 4 consecutive symbols and 240 subcarriers (20 RB).
  All blocks of a burst must fit the first 5 ms of the burst period.
* Timelines are value objects: immutable, sorted, and rebuildable. A
  doubled horizon yields a prefix-identical event list.

Overhead accounting intentionally uses the configured burst (all ``n_ss``
blocks), while procedure timing elsewhere walks only the blocks a given
beam sweep actually needs; see :func:`build_ss_timeline`'s ``sweep``
parameter for the distinction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import ConfigurationError

SYMBOLS_PER_SLOT = 14
SS_BLOCK_SYMBOLS = 4
SS_BLOCK_SUBCARRIERS = 240
SS_BLOCK_RB = SS_BLOCK_SUBCARRIERS // 12
SS_BURST_WINDOW_US = 5000.0
RACH_SYMBOLS = 2
MAX_SS_BLOCKS_PER_BURST = 64
MAX_AGGREGATED_CARRIERS = 16
DEFAULT_CARRIER_BANDWIDTH_HZ = 400e6
SUBCARRIERS_PER_RB = 12
MIN_MMWAVE_NUMEROLOGY = 2
MMWAVE_CARRIER_GHZ = 6.0

SS_PERIODS_MS = (5, 10, 20, 40, 80, 160)
CSI_PERIODS_SLOTS = (5, 10, 20, 40, 80, 160, 320, 640)
CSI_SYMBOL_COUNTS = (1, 2, 4)
CSI_MIN_RB = 50


@dataclass(frozen=True)
class Numerology:
    """One NR numerology: subcarrier spacing and derived symbol timing.

    Attributes:
        n: numerology index, 0..4.
        scs_khz: subcarrier spacing, 15 * 2**n kHz.
        slot_ms: slot duration, 1 / 2**n ms.
        symbol_us: OFDM symbol duration in microseconds (slot / 14).
    """

    n: int
    scs_khz: int
    slot_ms: float
    symbol_us: float

    @property
    def symbol_ms(self) -> float:
        return self.symbol_us / 1000.0

    @property
    def symbols_per_ms(self) -> float:
        return (1 << self.n) * SYMBOLS_PER_SLOT


def make_numerology(n: int) -> Numerology:
    """Build the numerology for index ``n``.

    Args:
        n: numerology index; NR defines 0..4 (15 kHz to 240 kHz).

    Raises:
        ConfigurationError: if ``n`` is not an integer in 0..4.
    """
    if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n <= 4:
        raise ConfigurationError(
            f"numerology n={n!r}: must be an integer in 0..4"
        )
    scs_khz = 15 * (1 << n)
    slot_ms = 1.0 / (1 << n)
    symbol_us = slot_ms * 1000.0 / SYMBOLS_PER_SLOT
    return Numerology(n=n, scs_khz=scs_khz, slot_ms=slot_ms, symbol_us=symbol_us)


def check_mmwave_numerology(num: Numerology, carrier_ghz: float) -> None:
    """Reject numerologies too narrow for a mmWave carrier.

    Carriers above 6 GHz require subcarrier spacing of at least 60 kHz
    (numerology 2) to keep phase noise and Doppler manageable.
    """
    if carrier_ghz > MMWAVE_CARRIER_GHZ and num.n < MIN_MMWAVE_NUMEROLOGY:
        raise ConfigurationError(
            f"numerology n={num.n} is not allowed above {MMWAVE_CARRIER_GHZ:g} GHz: "
            f"carrier {carrier_ghz:g} GHz needs n >= {MIN_MMWAVE_NUMEROLOGY}"
        )


def carrier_resource_blocks(
    num: Numerology, bandwidth_hz: float = DEFAULT_CARRIER_BANDWIDTH_HZ
) -> int:
    """Number of whole resource blocks fitting the carrier bandwidth."""
    if bandwidth_hz <= 0:
        raise ConfigurationError(f"bandwidth_hz={bandwidth_hz:g}: must be positive")
    return int(bandwidth_hz // (SUBCARRIERS_PER_RB * num.scs_khz * 1000.0))


def symbols_in_ms(num: Numerology, duration_ms: float) -> int:
    """Convert a duration to a whole number of OFDM symbols.

    The configured periodicities are all exact multiples of the symbol
    duration, so the conversion must land on an integer.
    """
    exact = duration_ms * num.symbols_per_ms
    rounded = round(exact)
    if abs(exact - rounded) > 1e-6:
        raise ConfigurationError(
            f"duration {duration_ms:g} ms is not a whole number of symbols "
            f"at numerology n={num.n}"
        )
    return int(rounded)


class EventKind(str, Enum):
    SS_BLOCK = "ss_block"
    CSI_RS = "csi_rs"
    RACH = "rach"


class CsiActivation(str, Enum):
    PERIODIC = "periodic"
    SEMI_PERSISTENT = "semi_persistent"
    APERIODIC = "aperiodic"


@dataclass(frozen=True)
class SsBurstConfig:
    """SS burst configuration: ``n_ss`` blocks every ``t_ss_ms``."""

    n_ss: int = 64
    t_ss_ms: float = 20.0

    def __post_init__(self) -> None:
        if not 1 <= self.n_ss <= MAX_SS_BLOCKS_PER_BURST:
            raise ConfigurationError(
                f"ss.n_ss={self.n_ss}: must be in 1..{MAX_SS_BLOCKS_PER_BURST}"
            )
        if self.t_ss_ms not in SS_PERIODS_MS:
            raise ConfigurationError(
                f"ss.t_ss_ms={self.t_ss_ms:g}: must be one of {set(SS_PERIODS_MS)}"
            )

    def check_window(self, num: Numerology) -> None:
        """All blocks must fit the first 5 ms of the burst period."""
        span_us = self.n_ss * SS_BLOCK_SYMBOLS * num.symbol_us
        if span_us > SS_BURST_WINDOW_US:
            raise ConfigurationError(
                f"ss.n_ss={self.n_ss} at numerology n={num.n} spans "
                f"{span_us:g} us, exceeding the {SS_BURST_WINDOW_US:g} us burst window"
            )


@dataclass(frozen=True)
class CsiRsConfig:
    """CSI-RS resource configuration.

    ``delta_t_symbols``/``delta_f_rb`` place the occasion grid relative to
    the SS burst start in time and the carrier edge in frequency. For
    aperiodic activation occasions exist only at injected trigger slots.
    """

    t_csi_slots: int = 5
    n_symbols: int = 1
    bandwidth_rb: int = 50
    delta_t_symbols: int = 0
    delta_f_rb: int = 0
    activation: CsiActivation = CsiActivation.PERIODIC

    def __post_init__(self) -> None:
        if self.t_csi_slots not in CSI_PERIODS_SLOTS:
            raise ConfigurationError(
                f"csi.t_csi_slots={self.t_csi_slots}: must be one of "
                f"{set(CSI_PERIODS_SLOTS)}"
            )
        if self.n_symbols not in CSI_SYMBOL_COUNTS:
            raise ConfigurationError(
                f"csi.n_symbols={self.n_symbols}: must be one of {set(CSI_SYMBOL_COUNTS)}"
            )
        if self.bandwidth_rb < CSI_MIN_RB:
            raise ConfigurationError(
                f"csi.bandwidth_rb={self.bandwidth_rb}: must be at least {CSI_MIN_RB}"
            )
        if self.delta_f_rb < 0:
            raise ConfigurationError(
                f"csi.delta_f_rb={self.delta_f_rb}: must be non-negative"
            )
        period_symbols = self.t_csi_slots * SYMBOLS_PER_SLOT
        if not 0 <= self.delta_t_symbols < period_symbols:
            raise ConfigurationError(
                f"csi.delta_t_symbols={self.delta_t_symbols}: must be in "
                f"0..{period_symbols - 1} for t_csi_slots={self.t_csi_slots}"
            )


@dataclass(frozen=True)
class TimelineEvent:
    """One scheduled transmission on the symbol/RB grid.

    ``gnb_beam``/``ue_beam`` are steering labels; ``None`` means the event
    is not direction-selective on that side (wildcard).
    """

    start_symbol: int
    duration_symbols: int
    kind: EventKind
    gnb_beam: Optional[int] = None
    ue_beam: Optional[int] = None
    rb_start: int = 0
    rb_count: int = SS_BLOCK_RB

    @property
    def end_symbol(self) -> int:
        return self.start_symbol + self.duration_symbols


@dataclass(frozen=True)
class Timeline:
    """Immutable, time-sorted event list over a finite horizon."""

    horizon_symbols: int
    symbol_us: float
    events: tuple[TimelineEvent, ...] = ()
    burst_period_symbols: Optional[int] = None

    def of_kind(self, kind: EventKind) -> tuple[TimelineEvent, ...]:
        return tuple(e for e in self.events if e.kind is kind)


def _spans_overlap(a0: int, a1: int, b0: int, b1: int) -> bool:
    return a0 < b1 and b0 < a1


def build_ss_timeline(
    cfg: SsBurstConfig,
    num: Numerology,
    horizon_ms: float,
    sweep: Optional[Sequence[tuple[Optional[int], Optional[int]]]] = None,
) -> Timeline:
    """Place SS blocks for every burst start inside the horizon.

    Without ``sweep`` each burst carries the full configured ``n_ss``
    blocks with wildcard direction labels; this is the network-side view
    used for overhead accounting. With ``sweep`` (the ordered list of
    (gnb_beam, ue_beam) labels of one full sweep) each burst carries
    ``min(len(sweep), n_ss)`` blocks and block ``i`` of burst ``j`` is
    stamped with sweep slot ``(j * blocks_per_burst + i) % len(sweep)``,
    so a sweep longer than one burst wraps onto the next.

    Args:
        cfg: burst configuration.
        num: numerology the carrier runs at.
        horizon_ms: timeline length; must cover at least one burst period.
        sweep: optional sweep slot labels, one per measurement.

    Returns:
        Timeline with one SS_BLOCK event per transmitted block and
        ``burst_period_symbols`` set.
    """
    cfg.check_window(num)
    t_ss_sym = symbols_in_ms(num, cfg.t_ss_ms)
    horizon_sym = symbols_in_ms(num, horizon_ms)
    if horizon_sym < t_ss_sym:
        raise ConfigurationError(
            f"horizon_ms={horizon_ms:g}: must cover at least one burst period "
            f"({cfg.t_ss_ms:g} ms)"
        )
    if sweep is not None and len(sweep) == 0:
        raise ConfigurationError("sweep must contain at least one slot")

    blocks = cfg.n_ss if sweep is None else min(len(sweep), cfg.n_ss)
    events: list[TimelineEvent] = []
    for j in range(horizon_sym // t_ss_sym):
        burst_start = j * t_ss_sym
        for i in range(blocks):
            if sweep is None:
                g, u = None, None
            else:
                g, u = sweep[(j * blocks + i) % len(sweep)]
            events.append(
                TimelineEvent(
                    start_symbol=burst_start + i * SS_BLOCK_SYMBOLS,
                    duration_symbols=SS_BLOCK_SYMBOLS,
                    kind=EventKind.SS_BLOCK,
                    gnb_beam=g,
                    ue_beam=u,
                    rb_start=0,
                    rb_count=SS_BLOCK_RB,
                )
            )
    return Timeline(
        horizon_symbols=horizon_sym,
        symbol_us=num.symbol_us,
        events=tuple(events),
        burst_period_symbols=t_ss_sym,
    )


def build_csi_timeline(
    cfg: CsiRsConfig,
    ss: Timeline,
    num: Numerology,
    horizon_ms: float,
    carrier_rb: Optional[int] = None,
    trigger_slots: Optional[Iterable[int]] = None,
    sweep: Optional[Sequence[tuple[Optional[int], Optional[int]]]] = None,
) -> Timeline:
    """Place CSI-RS occasions, dropping any that collide with SS blocks.

    Periodic and semi-persistent activation put occasions on the grid
    ``delta_t_symbols + k * t_csi_slots * 14``; aperiodic activation puts
    one occasion at each distinct trigger slot's start. An occasion whose
    symbols and resource blocks both overlap an SS block is dropped (SS
    transmission wins the grid). Direction labels cycle over ``sweep`` by
    nominal occasion index, so a dropped occasion skips its direction's
    turn rather than shifting the pattern.

    Args:
        cfg: CSI-RS resource configuration.
        ss: SS timeline to test collisions against (same numerology).
        num: numerology.
        horizon_ms: timeline length.
        carrier_rb: carrier width in RB; defaults to a 400 MHz carrier.
        trigger_slots: slot indices for aperiodic activation.
        sweep: optional direction labels cycled round-robin.

    Raises:
        ConfigurationError: if the occasion does not fit the carrier.
    """
    if carrier_rb is None:
        carrier_rb = carrier_resource_blocks(num)
    if cfg.delta_f_rb + cfg.bandwidth_rb > carrier_rb:
        raise ConfigurationError(
            f"csi occupies RB {cfg.delta_f_rb}..{cfg.delta_f_rb + cfg.bandwidth_rb}"
            f" but the carrier has only {carrier_rb} RB"
        )
    horizon_sym = symbols_in_ms(num, horizon_ms)

    starts: list[int]
    if cfg.activation is CsiActivation.APERIODIC:
        if trigger_slots is None:
            starts = []
        else:
            slots = sorted(set(int(s) for s in trigger_slots))
            if slots and slots[0] < 0:
                raise ConfigurationError(
                    f"aperiodic trigger slot {slots[0]} is negative"
                )
            starts = [s * SYMBOLS_PER_SLOT for s in slots]
    else:
        period = cfg.t_csi_slots * SYMBOLS_PER_SLOT
        starts = list(range(cfg.delta_t_symbols, horizon_sym, period))

    ss_blocks = ss.of_kind(EventKind.SS_BLOCK)
    events: list[TimelineEvent] = []
    for idx, t in enumerate(starts):
        if t + cfg.n_symbols > horizon_sym:
            continue
        collides = any(
            _spans_overlap(t, t + cfg.n_symbols, b.start_symbol, b.end_symbol)
            and _spans_overlap(
                cfg.delta_f_rb,
                cfg.delta_f_rb + cfg.bandwidth_rb,
                b.rb_start,
                b.rb_start + b.rb_count,
            )
            for b in ss_blocks
        )
        if collides:
            continue
        if sweep is None:
            g, u = None, None
        else:
            g, u = sweep[idx % len(sweep)]
        events.append(
            TimelineEvent(
                start_symbol=t,
                duration_symbols=cfg.n_symbols,
                kind=EventKind.CSI_RS,
                gnb_beam=g,
                ue_beam=u,
                rb_start=cfg.delta_f_rb,
                rb_count=cfg.bandwidth_rb,
            )
        )
    return Timeline(
        horizon_symbols=horizon_sym,
        symbol_us=num.symbol_us,
        events=tuple(events),
        burst_period_symbols=ss.burst_period_symbols,
    )


def build_rach_timeline(
    ss: Timeline,
    gnb_is_directional: bool,
    num: Numerology,
    n_directions: int = 1,
    carrier_rb: Optional[int] = None,
) -> Timeline:
    """Schedule RACH opportunities after each burst's last block.

    A gNB receiving with digital beamforming listens in every direction
    at once, so one wildcard opportunity per burst suffices. A gNB that
    must steer (analog or hybrid) gets one opportunity per distinct
    direction label its burst carried, packed back to back in order of
    first appearance; blocks with wildcard labels fall back to the full
    ``n_directions`` fan.

    Args:
        ss: SS timeline (must carry ``burst_period_symbols``).
        gnb_is_directional: False for digital reception, True otherwise.
        num: numerology.
        n_directions: direction count used for the wildcard fallback.
        carrier_rb: frequency span of each opportunity (defaults to the
            whole carrier).
    """
    if ss.burst_period_symbols is None:
        raise ConfigurationError(
            "rach timeline needs an SS timeline with a burst period"
        )
    if carrier_rb is None:
        carrier_rb = carrier_resource_blocks(num)
    period = ss.burst_period_symbols
    blocks = ss.of_kind(EventKind.SS_BLOCK)

    by_burst: dict[int, list[TimelineEvent]] = {}
    for b in blocks:
        by_burst.setdefault(b.start_symbol // period, []).append(b)

    events: list[TimelineEvent] = []
    for j in sorted(by_burst):
        burst_blocks = by_burst[j]
        tail = max(b.end_symbol for b in burst_blocks)
        if not gnb_is_directional:
            dirs: list[Optional[int]] = [None]
        else:
            seen: list[Optional[int]] = []
            wildcard = False
            for b in sorted(burst_blocks, key=lambda e: e.start_symbol):
                if b.gnb_beam is None:
                    wildcard = True
                elif b.gnb_beam not in seen:
                    seen.append(b.gnb_beam)
            dirs = list(range(n_directions)) if wildcard else seen
        for m, d in enumerate(dirs):
            start = tail + m * RACH_SYMBOLS
            if start + RACH_SYMBOLS > ss.horizon_symbols:
                break
            events.append(
                TimelineEvent(
                    start_symbol=start,
                    duration_symbols=RACH_SYMBOLS,
                    kind=EventKind.RACH,
                    gnb_beam=d,
                    ue_beam=None,
                    rb_start=0,
                    rb_count=carrier_rb,
                )
            )
    return Timeline(
        horizon_symbols=ss.horizon_symbols,
        symbol_us=num.symbol_us,
        events=tuple(events),
        burst_period_symbols=period,
    )


def overhead(
    tl: Timeline,
    kinds: Iterable[EventKind],
    window_ms: float,
    total_rb: int,
) -> float:
    """Fraction of the time-frequency grid spent on the selected kinds.

    Counts symbol*RB area of every event of a kind in ``kinds`` whose
    start falls inside the window, divided by the window's total area.
    Windows are expected to be whole multiples of the relevant period so
    no event straddles the edge.

    Raises:
        ConfigurationError: on an empty window or a carrier narrower than
            the widest counted event.
    """
    if window_ms <= 0:
        raise ConfigurationError(f"window_ms={window_ms:g}: must be positive")
    window_sym = round(window_ms * 1000.0 / tl.symbol_us)
    if window_sym < 1:
        raise ConfigurationError(
            f"window_ms={window_ms:g} is shorter than one symbol"
        )
    kindset = set(kinds)
    area = 0
    for e in tl.events:
        if e.kind in kindset and e.start_symbol < window_sym:
            if e.rb_count > total_rb:
                raise ConfigurationError(
                    f"total_rb={total_rb} is narrower than a counted event "
                    f"({e.rb_count} RB)"
                )
            area += e.duration_symbols * e.rb_count
    return area / (window_sym * total_rb)
