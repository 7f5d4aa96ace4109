"""Solar energy availability model.

Converts irradiance (W/m²) into harvested electrical power (mW) for a small
solar cell behind a power-management chain, synthesizes per-minute diurnal
irradiance profiles from a daily insolation total, ingests measured traces
from CSV, and integrates per-minute power samples into daily energy (J).

Conventions
-----------
* Irradiance is always W/m², insolation is kWh/m²/day.
* Power samples are milliwatts taken once per minute; energy integration is
  the rectangle rule  E[J] = Σ P[mW] × 60 / 1000.
* Harvested power is linear in irradiance and cell area:

      P[mW] = G[W/m²] × area[m²] × cell_efficiency × harvester_efficiency × 1000

  ``harvester_efficiency`` is a single lumped factor for the whole
  power-management chain (default 0.6).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

CM2_PER_M2 = 1e4
SECONDS_PER_DAY = 86400
J_PER_KWH = 3.6e6
TRACE_STEP_S = 60.0  # power sampling period; fixed at one minute


@dataclass(frozen=True)
class SolarCellSpec:
    """Solar cell geometry and conversion efficiencies.

    Args:
        area_cm2: cell surface area in cm².
        cell_efficiency: optical-to-electrical conversion fraction (0, 1].
        harvester_efficiency: lumped power-management chain fraction (0, 1].
    """

    area_cm2: float
    cell_efficiency: float
    harvester_efficiency: float = 0.6

    def __post_init__(self) -> None:
        if self.area_cm2 <= 0:
            raise ValueError(f"area_cm2 must be > 0, got {self.area_cm2}")
        if not 0 < self.cell_efficiency <= 1:
            raise ValueError(f"cell_efficiency must be in (0, 1], got {self.cell_efficiency}")
        if not 0 < self.harvester_efficiency <= 1:
            raise ValueError(
                f"harvester_efficiency must be in (0, 1], got {self.harvester_efficiency}"
            )

    @property
    def area_m2(self) -> float:
        return self.area_cm2 / CM2_PER_M2


@dataclass(frozen=True)
class IrradianceTrace:
    """Per-minute solar irradiance samples with implicit timestamps.

    Sample i is taken at ``start_epoch + i * step_s``.
    """

    start_epoch: int
    samples: np.ndarray  # W/m², one per minute
    step_s: float = TRACE_STEP_S

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.step_s <= 0:
            raise ValueError(f"step_s must be > 0, got {self.step_s}")
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if len(self.samples) and float(self.samples.min()) < 0:
            raise ValueError("irradiance samples must be non-negative")

    def __len__(self) -> int:
        return len(self.samples)

    def epochs(self) -> np.ndarray:
        return self.start_epoch + np.arange(len(self.samples)) * self.step_s


@dataclass(frozen=True)
class DailyInsolation:
    """Daily solar energy received per unit area (kWh/m²/day)."""

    value: float
    month_label: str = ""

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"insolation must be >= 0, got {self.value}")


def instantaneous_harvest(irradiance_wm2: float, cell: SolarCellSpec) -> float:
    """Harvested electrical power (mW) at a given irradiance.

    Args:
        irradiance_wm2: incident irradiance, W/m² (>= 0).
    """
    if irradiance_wm2 < 0:
        raise ValueError(f"irradiance must be >= 0, got {irradiance_wm2}")
    watts = irradiance_wm2 * cell.area_m2 * cell.cell_efficiency * cell.harvester_efficiency
    return watts * 1000.0


def daily_average_power(ins: DailyInsolation, cell: SolarCellSpec) -> float:
    """24-hour average harvested power (mW) implied by a daily insolation total.

    Multiply the result by 86.4 to express it as J/day.
    """
    wh_per_day = ins.value * 1000.0 * cell.area_m2 * cell.cell_efficiency * cell.harvester_efficiency
    return wh_per_day / 24.0 * 1000.0


def integrate_harvest(power_samples_mw) -> float:
    """Rectangle-rule energy (J) of per-minute power samples (mW).

    E = Σ P × 60 / 1000, the once-per-minute sampling convention used for
    the daily harvested-energy ledger.
    """
    samples = np.asarray(power_samples_mw, dtype=np.float64)
    if len(samples) and float(samples.min()) < 0:
        raise ValueError("power samples must be non-negative")
    return float(samples.sum() * TRACE_STEP_S / 1000.0)


def synthesize_day(
    ins: DailyInsolation,
    daylight_hours: float,
    cloud_seed: int,
    cloud_depth: float,
    start_epoch: int = 0,
) -> IrradianceTrace:
    """Synthesize one day (1440 minutes) of irradiance from a daily total.

    Clear-sky shape is a half sine over ``daylight_hours`` centered at solar
    noon, scaled so the clear-sky integral equals ``ins.value``.  Cloud cover
    is a per-minute multiplicative factor drawn uniformly from
    [1 - cloud_depth, 1] with a PRNG keyed by ``cloud_seed``, so the same
    seed always reproduces the same trace bit for bit.

    Args:
        daylight_hours: length of the daylight window, in (0, 24].
        cloud_depth: maximum fractional attenuation per minute, in [0, 1).
    """
    if not 0 < daylight_hours <= 24:
        raise ValueError(f"daylight_hours must be in (0, 24], got {daylight_hours}")
    if not 0 <= cloud_depth < 1:
        raise ValueError(f"cloud_depth must be in [0, 1), got {cloud_depth}")

    minutes = np.arange(1440, dtype=np.float64)
    t = minutes * TRACE_STEP_S
    daylight_s = daylight_hours * 3600.0
    sunrise = SECONDS_PER_DAY / 2.0 - daylight_s / 2.0
    sunset = SECONDS_PER_DAY / 2.0 + daylight_s / 2.0

    samples = np.zeros(1440, dtype=np.float64)
    up = (t > sunrise) & (t < sunset)
    if ins.value > 0:
        # peak chosen so that the continuous half-sine integral is ins.value
        peak = ins.value * J_PER_KWH * math.pi / (2.0 * daylight_s)
        samples[up] = peak * np.sin(math.pi * (t[up] - sunrise) / daylight_s)

    if cloud_depth > 0:
        rng = np.random.default_rng(cloud_seed)
        factors = rng.uniform(1.0 - cloud_depth, 1.0, size=1440)
        samples = samples * factors

    return IrradianceTrace(start_epoch=start_epoch, samples=samples)


TRACE_CSV_HEADER = ["epoch_s", "irradiance_wm2"]


class TraceFormatError(ValueError):
    """Raised when an irradiance CSV does not match the documented schema."""


def load_trace(path) -> IrradianceTrace:
    """Load an irradiance trace from CSV.

    Schema: header ``epoch_s,irradiance_wm2``, one row per minute, UTF-8,
    LF line endings.  Rows must be minute-spaced and non-negative.
    """
    epochs: list[float] = []
    values: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRACE_CSV_HEADER:
            raise TraceFormatError(
                f"{path}: expected header {','.join(TRACE_CSV_HEADER)!r}, got {header!r}"
            )
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise TraceFormatError(f"{path}: row {row_no}: expected 2 columns, got {len(row)}")
            try:
                epoch = float(row[0])
                irr = float(row[1])
            except ValueError as exc:
                raise TraceFormatError(f"{path}: row {row_no}: {exc}") from exc
            if irr < 0:
                raise TraceFormatError(f"{path}: row {row_no}: negative irradiance {irr}")
            epochs.append(epoch)
            values.append(irr)

    if not values:
        raise TraceFormatError(f"{path}: trace contains no samples")
    steps = np.diff(epochs)
    if len(steps) and not np.allclose(steps, TRACE_STEP_S):
        bad = int(np.argmax(~np.isclose(steps, TRACE_STEP_S)))
        raise TraceFormatError(f"{path}: row {bad + 3}: samples are not minute-spaced")
    return IrradianceTrace(start_epoch=int(epochs[0]), samples=np.asarray(values))


def write_trace(path, trace: IrradianceTrace) -> None:
    """Write a trace in the same CSV schema accepted by load_trace."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_CSV_HEADER)
        for epoch, value in zip(trace.epochs(), trace.samples):
            writer.writerow([int(epoch), f"{value:.6f}"])
