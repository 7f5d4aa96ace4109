"""Synthetic 1 Hz sensor signals driving the analytics path.

Three named generators:

* ``diurnal`` — smooth daily temperature/humidity/light cycles with small
  seeded noise, for multi-day scenarios.
* ``fig7 demo`` — a 3-minute humidity stream with one step excursion.
* ``compression demo`` — a 10-hour stream with hourly heat-pad (1 min) and
  cooling-fan (5 min) events on top of slow drift.

All generators are pure functions of their arguments and the seed; sample
values are quantized to 0.01 like the sensors they stand in for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SECONDS_PER_DAY = 86400


def _quantize(x: np.ndarray) -> np.ndarray:
    return np.round(x, 2)


class DiurnalSignal:
    """Daily sine cycles: warm afternoons, drier air when warm, light that
    follows a half-sine daylight window.  Noise is relative for light (so
    nights stay exactly dark) and absolute for the other channels."""

    def __init__(
        self,
        seed: int,
        daylight_hours: float = 12.0,
        temp_mean_c: float = 10.0,
        temp_amp_c: float = 8.0,
        rh_mean_pct: float = 55.0,
        rh_amp_pct: float = 15.0,
        lux_peak: float = 40000.0,
    ):
        self.seed = seed
        self.daylight_hours = daylight_hours
        self.temp_mean_c = temp_mean_c
        self.temp_amp_c = temp_amp_c
        self.rh_mean_pct = rh_mean_pct
        self.rh_amp_pct = rh_amp_pct
        self.lux_peak = lux_peak

    def generate_day(self, day_index: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-second (temp °C, rh %RH, lux) arrays for one day, length 86400."""
        t = np.arange(SECONDS_PER_DAY, dtype=np.float64)
        rng = np.random.default_rng([self.seed, 1001, day_index])

        # thermal peak mid-afternoon (15:00), trough pre-dawn
        phase = np.sin(2.0 * math.pi * (t - 9.0 * 3600.0) / SECONDS_PER_DAY)
        temp = self.temp_mean_c + self.temp_amp_c * phase + rng.normal(0.0, 0.02, t.size)
        rh = self.rh_mean_pct - self.rh_amp_pct * phase + rng.normal(0.0, 0.05, t.size)
        rh = np.clip(rh, 0.0, 100.0)

        daylight_s = self.daylight_hours * 3600.0
        sunrise = SECONDS_PER_DAY / 2.0 - daylight_s / 2.0
        lux = np.zeros(t.size)
        up = (t > sunrise) & (t < sunrise + daylight_s)
        lux[up] = self.lux_peak * np.sin(math.pi * (t[up] - sunrise) / daylight_s)
        lux *= 1.0 + rng.normal(0.0, 0.002, t.size)
        lux = np.maximum(lux, 0.0)

        return _quantize(temp), _quantize(rh), _quantize(lux)


class ConstantSignal:
    """Fixed readings; useful for harvest-only scenarios and tests."""

    def __init__(self, temp_c: float = 20.0, rh_pct: float = 50.0, lux: float = 100.0):
        self.temp_c = temp_c
        self.rh_pct = rh_pct
        self.lux = lux

    def generate_day(self, day_index: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        shape = (SECONDS_PER_DAY,)
        return (
            np.full(shape, self.temp_c),
            np.full(shape, self.rh_pct),
            np.full(shape, self.lux),
        )


def _ramp_hold_decay(
    t: np.ndarray, start_s: float, rise_s: float, hold_s: float, fall_s: float
) -> np.ndarray:
    """Unit envelope: linear rise, flat hold, linear fall.  Zero elsewhere."""
    out = np.zeros(t.size)
    rel = t - start_s
    rising = (rel >= 0) & (rel < rise_s)
    out[rising] = rel[rising] / rise_s
    holding = (rel >= rise_s) & (rel < rise_s + hold_s)
    out[holding] = 1.0
    falling = (rel >= rise_s + hold_s) & (rel < rise_s + hold_s + fall_s)
    out[falling] = 1.0 - (rel[falling] - rise_s - hold_s) / fall_s
    return out


def anomaly_demo_signal() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """180 s at 1 Hz: steady humidity with one excursion between 15 s and
    100 s.  Temperature and light are held constant so only the humidity
    channel drives transmissions.

    Returns (epochs, temp, rh, lux).
    """
    t = np.arange(180, dtype=np.float64)
    rh = np.full(t.size, 40.0)

    surge = _ramp_hold_decay(t, start_s=15.0, rise_s=25.0, hold_s=45.0, fall_s=15.0)
    rh = rh + 15.0 * surge
    # wobble on the plateau so the excursion is not a clean square step
    plateau = (t >= 40.0) & (t < 85.0)
    rh[plateau] += 3.2 * np.sin(2.0 * math.pi * (t[plateau] - 40.0) / 18.0)
    # sub-threshold breathing outside the excursion
    quiet = (t < 15.0) | (t >= 100.0)
    rh[quiet] += 0.25 * np.sin(2.0 * math.pi * t[quiet] / 40.0)

    temp = np.full(t.size, 22.0)
    lux = np.full(t.size, 300.0)
    return t, _quantize(temp), _quantize(rh), _quantize(lux)


def compression_demo_signal(
    hours: int = 10,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Hourly heat-pad and cooling-fan events over ``hours`` hours at 1 Hz.

    Each hour a heating pad runs for 1 minute (temperature spike) and a
    cooling fan for 5 minutes (temperature and humidity dip).  Between
    events the channels drift slowly and stay inside the 5 % threshold.

    Returns (epochs, temp, rh, lux).
    """
    n = hours * 3600
    t = np.arange(n, dtype=np.float64)

    temp = 23.0 + 0.9 * np.sin(2.0 * math.pi * t / (hours * 3600.0))
    rh = 45.0 - 1.2 * np.sin(2.0 * math.pi * t / (hours * 3600.0))

    for hour in range(hours):
        base = hour * 3600.0
        # heating pad: on 1 min at :15, sharp rise then a slow cool-down tail
        heat = _ramp_hold_decay(t, base + 15.0 * 60.0, rise_s=45.0, hold_s=15.0, fall_s=150.0)
        temp = temp + 10.0 * heat
        # cooling fan: on 5 min at :40, chills the air and the sensor board
        fan = _ramp_hold_decay(t, base + 40.0 * 60.0, rise_s=90.0, hold_s=210.0, fall_s=120.0)
        temp = temp - 4.5 * fan
        rh = rh - 9.0 * fan

    lux = np.full(t.size, 500.0)
    return t, _quantize(temp), _quantize(np.clip(rh, 0.0, 100.0)), _quantize(lux)
