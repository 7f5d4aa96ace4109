"""Named, fully-specified scenarios.

Simulation presets pin every input (seed included) so a preset name is a
complete, reproducible experiment:

* ``december-indiana`` — 15 short, cloud-varied winter days; the minimum
  rate wanders across rungs while staying inside the survival budget.
* ``june-indiana`` — 15 long, bright days; the minimum rate sits on the
  2 s rung throughout.
* ``march-clear-day`` — a single cloudless equinox day for studying the
  in-day rate ramp.
* ``buffer-stress`` — a nearly-empty battery; exercises charging priority
  (slowest rung forced when the battery is at or below the buffer).

Stream demos (no energy model, fixed interval):

* ``fig7-anomaly-demo`` — 3 minutes of humidity with one excursion.
* ``sec4c-compression-demo`` — 10 hours with hourly heat/cool events,
  comparing a 1 s device against a 300 s device.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .battery import BatteryModel
from .eico import EicoConfig, RateLadder
from .harvest import DailyInsolation, IrradianceTrace, SolarCellSpec, synthesize_day
from .isa import AnomalyThresholds, StreamResult, run_stream
from .modes import PowerModeTable
from .signals import (
    ConstantSignal,
    DiurnalSignal,
    anomaly_demo_signal,
    compression_demo_signal,
)
from .simkernel import SimConfig

DEFAULT_CELL = SolarCellSpec(area_cm2=30.0, cell_efficiency=0.05, harvester_efficiency=0.6)
DEFAULT_BATTERY = BatteryModel(capacity_mah=230.0, nominal_voltage=3.7)

# 10 % of a 230 mAh / 3.7 V pack
DEFAULT_E_BUF_J = 0.1 * DEFAULT_BATTERY.capacity_energy_j

DECEMBER_INSOLATION = (
    1.90, 1.70, 0.60, 1.50, 1.85, 1.20, 0.50, 1.60,
    1.90, 0.80, 1.40, 1.75, 0.55, 1.30, 1.80,
)
JUNE_INSOLATION = (
    6.10, 6.40, 5.80, 6.20, 6.00, 6.30, 5.90, 6.45,
    6.15, 5.95, 6.25, 6.05, 6.35, 5.85, 6.20,
)

SIM_PRESETS = ("december-indiana", "june-indiana", "march-clear-day", "buffer-stress")
DEMO_PRESETS = ("fig7-anomaly-demo", "sec4c-compression-demo")
PRESET_NAMES = SIM_PRESETS + DEMO_PRESETS


def default_eico(modes: PowerModeTable | None = None) -> EicoConfig:
    return EicoConfig(
        ladder=RateLadder.from_modes(modes or PowerModeTable()),
        d_max_days=14,
        e_buf_j=DEFAULT_E_BUF_J,
    )


def build_daily_trace(
    insolation: tuple[float, ...],
    daylight_hours: float,
    cloud_depth: float,
    seed: int,
    start_epoch: int = 0,
) -> IrradianceTrace:
    """Concatenate synthesized days (one per insolation value) into one trace."""
    chunks = []
    for day, ins in enumerate(insolation):
        trace = synthesize_day(
            DailyInsolation(ins),
            daylight_hours=daylight_hours,
            cloud_seed=seed * 100003 + day,
            cloud_depth=cloud_depth,
        )
        chunks.append(trace.samples)
    return IrradianceTrace(start_epoch=start_epoch, samples=np.concatenate(chunks))


def december_indiana(seed: int = 1212) -> SimConfig:
    modes = PowerModeTable()
    daylight = 9.2
    return SimConfig(
        cell=DEFAULT_CELL,
        battery=DEFAULT_BATTERY,
        eico=default_eico(modes),
        modes=modes,
        thresholds=AnomalyThresholds(),
        trace=build_daily_trace(DECEMBER_INSOLATION, daylight, cloud_depth=0.35, seed=seed),
        signal=DiurnalSignal(
            seed, daylight_hours=daylight,
            temp_mean_c=4.0, temp_amp_c=3.0,
            rh_mean_pct=75.0, rh_amp_pct=10.0, lux_peak=18000.0,
        ),
        duration_days=15,
        seed=seed,
        initial_soc=0.92,
        initial_interval_s=10,
        name="december-indiana",
    )


def june_indiana(seed: int = 606) -> SimConfig:
    modes = PowerModeTable()
    daylight = 14.8
    return SimConfig(
        cell=DEFAULT_CELL,
        battery=DEFAULT_BATTERY,
        eico=default_eico(modes),
        modes=modes,
        thresholds=AnomalyThresholds(),
        trace=build_daily_trace(JUNE_INSOLATION, daylight, cloud_depth=0.15, seed=seed),
        signal=DiurnalSignal(
            seed, daylight_hours=daylight,
            temp_mean_c=24.0, temp_amp_c=6.0,
            rh_mean_pct=60.0, rh_amp_pct=15.0, lux_peak=60000.0,
        ),
        duration_days=15,
        seed=seed,
        initial_soc=0.90,
        initial_interval_s=2,
        name="june-indiana",
    )


def march_clear_day(seed: int = 303) -> SimConfig:
    modes = PowerModeTable()
    daylight = 12.05  # 723 daylight minutes -> a 717-minute night
    return SimConfig(
        cell=DEFAULT_CELL,
        battery=DEFAULT_BATTERY,
        eico=default_eico(modes),
        modes=modes,
        thresholds=AnomalyThresholds(),
        trace=build_daily_trace((3.8,), daylight, cloud_depth=0.0, seed=seed),
        signal=DiurnalSignal(seed, daylight_hours=daylight),
        duration_days=1,
        seed=seed,
        initial_soc=0.50,
        initial_interval_s=5,
        name="march-clear-day",
    )


def buffer_stress(seed: int = 77) -> SimConfig:
    """Battery hovering at the buffer level under negligible harvest."""
    modes = PowerModeTable()
    daylight = 9.2
    return SimConfig(
        cell=DEFAULT_CELL,
        battery=DEFAULT_BATTERY,
        eico=default_eico(modes),
        modes=modes,
        thresholds=AnomalyThresholds(),
        trace=build_daily_trace((0.2, 0.2, 0.2), daylight, cloud_depth=0.0, seed=seed),
        signal=ConstantSignal(),
        duration_days=3,
        seed=seed,
        initial_soc=0.105,
        initial_interval_s=300,
        name="buffer-stress",
    )


def zero_harvest(duration_days: int = 33, initial_soc: float = 1.0) -> SimConfig:
    """Failed harvester from a full battery at the slowest rate."""
    modes = PowerModeTable()
    return SimConfig(
        cell=DEFAULT_CELL,
        battery=DEFAULT_BATTERY,
        eico=default_eico(modes),
        modes=modes,
        thresholds=AnomalyThresholds(),
        trace=IrradianceTrace(start_epoch=0, samples=np.zeros(duration_days * 1440)),
        signal=ConstantSignal(),
        duration_days=duration_days,
        seed=0,
        initial_soc=initial_soc,
        initial_interval_s=300,
        name="zero-harvest",
    )


@dataclass(frozen=True)
class AnomalyDemoResult:
    stream: StreamResult
    compression_ratio: float
    pearson_humidity: float


def run_anomaly_demo() -> AnomalyDemoResult:
    """3-minute humidity excursion through a 60 s device at 5 % thresholds."""
    epochs, temp, rh, lux = anomaly_demo_signal()
    stream = run_stream(epochs, temp, rh, lux, interval_s=60, thresholds=AnomalyThresholds())
    return AnomalyDemoResult(
        stream=stream,
        compression_ratio=stream.fidelity.compression_ratio,
        pearson_humidity=stream.fidelity.pearson["humidity"],
    )


@dataclass(frozen=True)
class CompressionDemoResult:
    fast: StreamResult
    slow: StreamResult
    compression_ratio: float
    pearson_temperature: float
    pearson_humidity: float


def run_compression_demo() -> CompressionDemoResult:
    """Two devices over the same 10-hour event stream: 1 s vs 300 s."""
    epochs, temp, rh, lux = compression_demo_signal()
    thresholds = AnomalyThresholds()
    fast = run_stream(epochs, temp, rh, lux, interval_s=1, thresholds=thresholds)
    slow = run_stream(epochs, temp, rh, lux, interval_s=300, thresholds=thresholds)
    return CompressionDemoResult(
        fast=fast,
        slow=slow,
        compression_ratio=fast.n_tx / slow.n_tx,
        pearson_temperature=slow.fidelity.pearson["temperature"],
        pearson_humidity=slow.fidelity.pearson["humidity"],
    )


_SIM_BUILDERS = {
    "december-indiana": december_indiana,
    "june-indiana": june_indiana,
    "march-clear-day": march_clear_day,
    "buffer-stress": buffer_stress,
}

_DEMO_RUNNERS = {
    "fig7-anomaly-demo": run_anomaly_demo,
    "sec4c-compression-demo": run_compression_demo,
}


def get_sim_preset(name: str, seed: int | None = None) -> SimConfig:
    if name not in _SIM_BUILDERS:
        raise KeyError(f"unknown simulation preset {name!r}; choose from {SIM_PRESETS}")
    builder = _SIM_BUILDERS[name]
    return builder() if seed is None else builder(seed)


def get_demo_runner(name: str):
    if name not in _DEMO_RUNNERS:
        raise KeyError(f"unknown demo preset {name!r}; choose from {DEMO_PRESETS}")
    return _DEMO_RUNNERS[name]
