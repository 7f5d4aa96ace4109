"""Deterministic fixed-tick node simulation.

One-minute power/energy ticks with a nested 1 Hz sensing/analytics loop:

    harvest trace -> battery <- node consumption (rate-dependent)
                      |
        sunset event -> next day's minimum rate
        per-minute daytime rate adaptation
        per-second anomaly detection -> transmitted stream

Consumption follows the rate model (sampling every second plus one packet
per interval); the battery integrates the harvest/consumption difference
and clips at full.  The sunset event fires after harvested power has stayed
below 0.1 mW for 10 consecutive minutes following the day's peak.  A battery
that reaches 0 J ends the run with a ``died`` flag rather than an exception.

Runs are pure functions of their SimConfig (including the seed): identical
configs produce bit-identical results.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import battery as battery_mod
from . import eico as eico_mod
from .battery import BatteryModel
from .eico import ControllerState, EicoConfig
from .harvest import IrradianceTrace, SolarCellSpec, integrate_harvest
from .isa import CHANNELS, THRESHOLD_FLOORS, AnomalyThresholds, FidelityMetrics
from .modes import PowerModeTable, node_power

MINUTES_PER_DAY = 1440
DAYLIGHT_THRESHOLD_MW = 0.1
SUNSET_CONSECUTIVE_MINUTES = 10
BATTERY_FULL_EPS_J = 1e-9


@dataclass(frozen=True)
class SimConfig:
    """Everything a run needs; see the presets module for ready-made ones."""

    cell: SolarCellSpec
    battery: BatteryModel
    eico: EicoConfig
    modes: PowerModeTable
    thresholds: AnomalyThresholds
    trace: IrradianceTrace
    signal: object  # provides generate_day(day_index) -> (temp, rh, lux) 1 Hz arrays
    duration_days: int
    seed: int
    initial_soc: float = 0.5
    initial_interval_s: int | None = None
    start_epoch: int = 0
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.duration_days < 1:
            raise ValueError("duration_days must be >= 1")
        if not 0 <= self.initial_soc <= 1:
            raise ValueError("initial_soc must be in [0, 1]")
        if len(self.trace) < self.duration_days * MINUTES_PER_DAY:
            raise ValueError(
                f"trace has {len(self.trace)} samples, need "
                f"{self.duration_days * MINUTES_PER_DAY}"
            )
        if not 0 <= self.eico.e_buf_j < self.battery.capacity_energy_j:
            raise ValueError("e_buf_j must be inside [0, battery capacity energy)")
        if self.initial_interval_s is not None and (
            self.initial_interval_s not in self.eico.ladder.intervals_s
        ):
            raise ValueError(f"initial_interval_s {self.initial_interval_s} not on the ladder")


@dataclass
class DaySummary:
    day: int
    e_harv_j: float
    e_cons_j: float
    e_clipped_j: float
    e_batt_start_j: float
    e_batt_end_j: float
    min_interval_start_s: int
    sunset_min_interval_s: int | None
    sunset_epoch: int | None
    e_batt_at_sunset_j: float | None
    e_harv_at_sunset_j: float | None
    tx_count: int
    anomaly_count: int

    @property
    def balance_residual_j(self) -> float:
        return abs(
            self.e_harv_j
            - self.e_cons_j
            - (self.e_batt_end_j - self.e_batt_start_j)
            - self.e_clipped_j
        )


@dataclass(frozen=True)
class TxRecord:
    epoch: int
    temperature: float
    humidity: float
    lux: float
    reason: str  # "anomaly" | "periodic"


@dataclass
class SimResult:
    """Per-minute log, per-day summaries, transmitted stream, and fidelity."""

    epochs: np.ndarray
    p_harv_mw: np.ndarray
    p_cons_mw: np.ndarray
    e_batt_j: np.ndarray
    interval_s: np.ndarray
    days: list[DaySummary]
    tx: list[TxRecord]
    fidelity: FidelityMetrics
    died: bool
    death_epoch: int | None
    config: SimConfig


class _Moments:
    """Streaming accumulators for a Pearson correlation."""

    __slots__ = ("n", "sx", "sy", "sxx", "syy", "sxy")

    def __init__(self) -> None:
        self.n = 0
        self.sx = self.sy = self.sxx = self.syy = self.sxy = 0.0

    def add(self, x: np.ndarray, y: np.ndarray) -> None:
        self.n += x.size
        self.sx += float(x.sum())
        self.sy += float(y.sum())
        self.sxx += float(np.dot(x, x))
        self.syy += float(np.dot(y, y))
        self.sxy += float(np.dot(x, y))

    def pearson(self) -> float | None:
        if self.n < 2:
            return None
        vx = self.sxx - self.sx * self.sx / self.n
        vy = self.syy - self.sy * self.sy / self.n
        if vx <= 0.0 or vy <= 0.0:
            return None
        cov = self.sxy - self.sx * self.sy / self.n
        return cov / float(np.sqrt(vx * vy))


def run(cfg: SimConfig) -> SimResult:
    """Simulate the node minute by minute for the configured duration."""
    modes = cfg.modes
    ladder = cfg.eico.ladder
    cell = cfg.cell
    capacity = cfg.battery.capacity_energy_j
    e_buf = cfg.eico.e_buf_j

    # precomputed per-minute harvest power (mW) for the whole run
    harvest_gain = cell.area_m2 * cell.cell_efficiency * cell.harvester_efficiency * 1000.0
    n_minutes = cfg.duration_days * MINUTES_PER_DAY
    p_harv_all = cfg.trace.samples[:n_minutes] * harvest_gain

    rung_power = {i: node_power(i, modes) for i in ladder.intervals_s}

    initial_interval = cfg.initial_interval_s
    if initial_interval is None:
        initial_interval = ladder.slowest
    state = ControllerState(
        current_interval_s=initial_interval, min_interval_today_s=initial_interval
    )
    stored = cfg.initial_soc * capacity

    log_epoch = np.zeros(n_minutes, dtype=np.int64)
    log_harv = np.zeros(n_minutes)
    log_cons = np.zeros(n_minutes)
    log_batt = np.zeros(n_minutes)
    log_interval = np.zeros(n_minutes, dtype=np.int64)

    days: list[DaySummary] = []
    tx: list[TxRecord] = []
    moments = {name: _Moments() for name in CHANNELS}
    n_samples_total = 0
    anomaly_total = 0

    # detector state (per-second loop), kept as plain floats for speed
    ref = {name: 0.0 for name in CHANNELS}
    ref_initialized = False
    last_tx_s = 0
    recon = {name: 0.0 for name in CHANNELS}
    th = {name: cfg.thresholds.channel(name) for name in CHANNELS}
    floors = THRESHOLD_FLOORS

    died = False
    death_epoch: int | None = None
    minutes_done = 0

    for day in range(cfg.duration_days):
        day_start_batt = stored
        day_harv = 0.0
        day_cons = 0.0
        day_clip = 0.0
        day_tx = 0
        day_anom = 0
        day_peak = 0.0
        below_count = 0
        sunset_done = False
        sunset_min: int | None = None
        sunset_epoch: int | None = None
        sunset_batt: float | None = None
        sunset_harv: float | None = None
        min_interval_start = state.min_interval_today_s

        temp_day, rh_day, lux_day = cfg.signal.generate_day(day)

        for minute in range(MINUTES_PER_DAY):
            m = day * MINUTES_PER_DAY + minute
            epoch = cfg.start_epoch + m * 60
            p_harv = float(p_harv_all[m])

            battery_full = stored >= capacity - BATTERY_FULL_EPS_J
            if p_harv > DAYLIGHT_THRESHOLD_MW:
                state = eico_mod.daytime_step(p_harv, state, battery_full, cfg.eico, modes)
            interval = state.current_interval_s
            p_cons = rung_power[interval]

            # battery update; same arithmetic as battery.apply_net_power but
            # with explicit clip/deficit accounting for the energy ledger
            raw = stored + (p_harv - p_cons) * 60.0 / 1000.0
            if raw <= 0.0:
                consumed = stored + p_harv * 60.0 / 1000.0
                day_harv += p_harv * 60.0 / 1000.0
                day_cons += consumed
                stored = 0.0
                log_epoch[m] = epoch
                log_harv[m] = p_harv
                log_cons[m] = consumed / 0.06
                log_batt[m] = 0.0
                log_interval[m] = interval
                minutes_done = m + 1
                died = True
                death_epoch = epoch
                break
            clipped = max(0.0, raw - capacity)
            stored = min(raw, capacity)
            day_harv += p_harv * 60.0 / 1000.0
            day_cons += p_cons * 60.0 / 1000.0
            day_clip += clipped

            # --- 1 Hz sensing/analytics for this minute -------------------
            base = minute * 60
            temp = temp_day[base : base + 60]
            rh = rh_day[base : base + 60]
            lux = lux_day[base : base + 60]
            events: list[tuple[int, str]] = []  # (second offset, reason)

            if not ref_initialized:
                ref["temperature"] = float(temp[0])
                ref["humidity"] = float(rh[0])
                ref["lux"] = float(lux[0])
                recon.update(ref)
                ref_initialized = True
                last_tx_s = epoch
                events.append((0, "periodic"))

            scale_t = th["temperature"] * max(abs(ref["temperature"]), floors["temperature"])
            scale_r = th["humidity"] * max(abs(ref["humidity"]), floors["humidity"])
            scale_l = th["lux"] * max(abs(ref["lux"]), floors["lux"])
            quiet = (
                float(np.max(np.abs(temp - ref["temperature"]))) < scale_t
                and float(np.max(np.abs(rh - ref["humidity"]))) < scale_r
                and float(np.max(np.abs(lux - ref["lux"]))) < scale_l
            )
            if quiet:
                # no anomaly possible this minute: only the periodic timer acts
                while True:
                    due = last_tx_s + interval
                    if due < epoch:
                        due = epoch
                    offset = due - epoch
                    if offset > 59:
                        break
                    if not (events and events[-1][0] == offset):
                        events.append((offset, "periodic"))
                    last_tx_s = due
            else:
                start = 1 if (events and events[0][0] == 0) else 0
                for s in range(start, 60):
                    now = epoch + s
                    dt_ = abs(float(temp[s]) - ref["temperature"])
                    dr_ = abs(float(rh[s]) - ref["humidity"])
                    dl_ = abs(float(lux[s]) - ref["lux"])
                    if dt_ >= scale_t or dr_ >= scale_r or dl_ >= scale_l:
                        ref["temperature"] = float(temp[s])
                        ref["humidity"] = float(rh[s])
                        ref["lux"] = float(lux[s])
                        scale_t = th["temperature"] * max(abs(ref["temperature"]), floors["temperature"])
                        scale_r = th["humidity"] * max(abs(ref["humidity"]), floors["humidity"])
                        scale_l = th["lux"] * max(abs(ref["lux"]), floors["lux"])
                        last_tx_s = now
                        events.append((s, "anomaly"))
                    elif now - last_tx_s >= interval:
                        last_tx_s = now
                        events.append((s, "periodic"))

            # reconstruction (receiver knowledge) + correlation accumulators
            recon_t = np.empty(60)
            recon_r = np.empty(60)
            recon_l = np.empty(60)
            cursor = 0
            for offset, reason in events:
                recon_t[cursor:offset] = recon["temperature"]
                recon_r[cursor:offset] = recon["humidity"]
                recon_l[cursor:offset] = recon["lux"]
                recon["temperature"] = float(temp[offset])
                recon["humidity"] = float(rh[offset])
                recon["lux"] = float(lux[offset])
                cursor = offset
                tx.append(
                    TxRecord(
                        epoch=epoch + offset,
                        temperature=recon["temperature"],
                        humidity=recon["humidity"],
                        lux=recon["lux"],
                        reason=reason,
                    )
                )
                if reason == "anomaly":
                    day_anom += 1
            recon_t[cursor:] = recon["temperature"]
            recon_r[cursor:] = recon["humidity"]
            recon_l[cursor:] = recon["lux"]
            day_tx += len(events)
            n_samples_total += 60
            moments["temperature"].add(temp, recon_t)
            moments["humidity"].add(rh, recon_r)
            moments["lux"].add(lux, recon_l)

            log_epoch[m] = epoch
            log_harv[m] = p_harv
            log_cons[m] = p_cons
            log_batt[m] = stored
            log_interval[m] = interval
            minutes_done = m + 1

            # --- sunset detection -----------------------------------------
            if p_harv > day_peak:
                day_peak = p_harv
            if p_harv < DAYLIGHT_THRESHOLD_MW:
                below_count += 1
            else:
                below_count = 0
            if (
                not sunset_done
                and day_peak > DAYLIGHT_THRESHOLD_MW
                and below_count >= SUNSET_CONSECUTIVE_MINUTES
            ):
                sunset_done = True
                sunset_epoch = epoch
                sunset_batt = stored
                sunset_harv = day_harv
                state = eico_mod.apply_sunset(state, stored, day_harv, cfg.eico, epoch)
                sunset_min = state.min_interval_today_s

        anomaly_total += day_anom
        days.append(
            DaySummary(
                day=day,
                e_harv_j=day_harv,
                e_cons_j=day_cons,
                e_clipped_j=day_clip,
                e_batt_start_j=day_start_batt,
                e_batt_end_j=stored,
                min_interval_start_s=min_interval_start,
                sunset_min_interval_s=sunset_min,
                sunset_epoch=sunset_epoch,
                e_batt_at_sunset_j=sunset_batt,
                e_harv_at_sunset_j=sunset_harv,
                tx_count=day_tx,
                anomaly_count=day_anom,
            )
        )
        if died:
            break

    n_tx = len(tx)
    fidelity = FidelityMetrics(
        compression_ratio=n_samples_total / n_tx if n_tx else float("inf"),
        pearson={name: moments[name].pearson() for name in CHANNELS},
        info_loss_fraction=1.0 - n_tx / n_samples_total if n_samples_total else 0.0,
    )
    return SimResult(
        epochs=log_epoch[:minutes_done],
        p_harv_mw=log_harv[:minutes_done],
        p_cons_mw=log_cons[:minutes_done],
        e_batt_j=log_batt[:minutes_done],
        interval_s=log_interval[:minutes_done],
        days=days,
        tx=tx,
        fidelity=fidelity,
        died=died,
        death_epoch=death_epoch,
        config=cfg,
    )


def energy_balance(result: SimResult) -> list[float]:
    """Per-day conservation residual |E_harv − E_cons − ΔE_batt − E_clipped| (J)."""
    return [d.balance_residual_j for d in result.days]


@dataclass(frozen=True)
class PerpetuityEntry:
    day: int
    min_interval_s: int
    e_batt_at_sunset_j: float
    passed: bool
    margin_j: float
    days_survived: int


@dataclass(frozen=True)
class PerpetuityReport:
    entries: list[PerpetuityEntry]
    d_max_days: int

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)


def verify_perpetuity(result: SimResult, cfg: SimConfig) -> PerpetuityReport:
    """Check each sunset decision against a harvester-failure continuation.

    For every sunset in the log, replay D_max harvest-free days starting at
    the decided minimum rate, with the controller still re-deciding at each
    (zero-harvest) sunset.  The battery must stay strictly above the buffer
    level the whole horizon.  Margin is the smallest headroom seen (negative
    when the day fails).
    """
    ladder = cfg.eico.ladder
    e_buf = cfg.eico.e_buf_j
    entries: list[PerpetuityEntry] = []
    for d in result.days:
        if d.sunset_min_interval_s is None or d.e_batt_at_sunset_j is None:
            continue
        e = d.e_batt_at_sunset_j
        interval = d.sunset_min_interval_s
        margin = e - e_buf
        survived = 0
        passed = margin > 0
        if passed:
            for _ in range(cfg.eico.d_max_days):
                e -= ladder.energy_for(interval)
                margin = min(margin, e - e_buf)
                if e <= e_buf:
                    passed = False
                    break
                survived += 1
                interval = eico_mod.sunset_update(e, 0.0, cfg.eico)
        entries.append(
            PerpetuityEntry(
                day=d.day,
                min_interval_s=d.sunset_min_interval_s,
                e_batt_at_sunset_j=d.e_batt_at_sunset_j,
                passed=passed,
                margin_j=margin,
                days_survived=survived,
            )
        )
    return PerpetuityReport(entries=entries, d_max_days=cfg.eico.d_max_days)


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

LOG_CSV_HEADER = ["epoch_s", "p_harv_mw", "p_cons_mw", "e_batt_j", "interval_s"]
DAYS_CSV_HEADER = [
    "day", "e_harv_j", "e_cons_j", "e_clipped_j", "e_batt_start_j", "e_batt_end_j",
    "min_interval_start_s", "sunset_min_interval_s", "e_batt_at_sunset_j",
    "tx_count", "anomaly_count", "balance_residual_j",
]
TX_CSV_HEADER = ["epoch_s", "temp_c", "rh_pct", "lux", "reason"]


def write_log_csv(result: SimResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LOG_CSV_HEADER)
        for i in range(len(result.epochs)):
            writer.writerow(
                [
                    int(result.epochs[i]),
                    f"{result.p_harv_mw[i]:.6f}",
                    f"{result.p_cons_mw[i]:.6f}",
                    f"{result.e_batt_j[i]:.6f}",
                    int(result.interval_s[i]),
                ]
            )


def write_days_csv(result: SimResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DAYS_CSV_HEADER)
        for d in result.days:
            writer.writerow(
                [
                    d.day,
                    f"{d.e_harv_j:.6f}",
                    f"{d.e_cons_j:.6f}",
                    f"{d.e_clipped_j:.6f}",
                    f"{d.e_batt_start_j:.6f}",
                    f"{d.e_batt_end_j:.6f}",
                    d.min_interval_start_s,
                    "" if d.sunset_min_interval_s is None else d.sunset_min_interval_s,
                    "" if d.e_batt_at_sunset_j is None else f"{d.e_batt_at_sunset_j:.6f}",
                    d.tx_count,
                    d.anomaly_count,
                    f"{d.balance_residual_j:.9f}",
                ]
            )


def write_tx_csv(result: SimResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TX_CSV_HEADER)
        for record in result.tx:
            writer.writerow(
                [
                    record.epoch,
                    f"{record.temperature:.2f}",
                    f"{record.humidity:.2f}",
                    f"{record.lux:.2f}",
                    record.reason,
                ]
            )
