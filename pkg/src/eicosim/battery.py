"""Battery storage model: terminal voltage <-> stored energy via a chemistry
lookup table, plus net-power state transitions with clamping at empty/full.

The state-of-charge curve is a monotone (voltage -> SoC fraction) table;
stored energy is SoC × capacity_energy with
capacity_energy = capacity[Ah] × nominal_voltage × 3600.  No rate dependence
or coulombic losses are modelled; discharge currents in this system stay
well under 0.2C where the flat-curve approximation is standard.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

# Single-cell Li-ion shape at a gentle (0.1C) discharge: 3.0 V empty,
# 4.2 V full, characteristic plateau around 3.7 V.
DEFAULT_SOC_CURVE: tuple[tuple[float, float], ...] = (
    (3.00, 0.00),
    (3.30, 0.05),
    (3.45, 0.10),
    (3.55, 0.20),
    (3.62, 0.35),
    (3.68, 0.50),
    (3.74, 0.65),
    (3.82, 0.80),
    (3.92, 0.90),
    (4.06, 0.97),
    (4.20, 1.00),
)


@dataclass(frozen=True)
class BatteryModel:
    """Capacity plus a monotone voltage->SoC lookup table."""

    capacity_mah: float
    nominal_voltage: float
    soc_curve: tuple[tuple[float, float], ...] = DEFAULT_SOC_CURVE

    def __post_init__(self) -> None:
        if self.capacity_mah <= 0:
            raise ValueError(f"capacity_mah must be > 0, got {self.capacity_mah}")
        if self.nominal_voltage <= 0:
            raise ValueError(f"nominal_voltage must be > 0, got {self.nominal_voltage}")
        curve = tuple((float(v), float(s)) for v, s in self.soc_curve)
        if len(curve) < 2:
            raise ValueError("soc_curve needs at least 2 points")
        volts = [v for v, _ in curve]
        socs = [s for _, s in curve]
        if any(b <= a for a, b in zip(volts, volts[1:])):
            raise ValueError("soc_curve voltages must be strictly increasing")
        if any(b <= a for a, b in zip(socs, socs[1:])):
            raise ValueError("soc_curve SoC values must be strictly increasing")
        if socs[0] != 0.0 or socs[-1] != 1.0:
            raise ValueError("soc_curve must span SoC 0 at v_empty to SoC 1 at v_full")
        object.__setattr__(self, "soc_curve", curve)

    @property
    def v_empty(self) -> float:
        return self.soc_curve[0][0]

    @property
    def v_full(self) -> float:
        return self.soc_curve[-1][0]

    @property
    def capacity_energy_j(self) -> float:
        return self.capacity_mah / 1000.0 * self.nominal_voltage * 3600.0


@dataclass(frozen=True)
class BatteryState:
    """Stored energy (J) and the consistent terminal voltage (V)."""

    stored_energy_j: float
    voltage: float


def energy_from_voltage(v: float, model: BatteryModel) -> float:
    """Stored energy (J) for a terminal voltage, by piecewise-linear lookup.

    Raises ValueError outside [v_empty, v_full].
    """
    if not model.v_empty <= v <= model.v_full:
        raise ValueError(
            f"voltage {v} outside curve range [{model.v_empty}, {model.v_full}]"
        )
    volts = [p[0] for p in model.soc_curve]
    socs = [p[1] for p in model.soc_curve]
    soc = float(np.interp(v, volts, socs))
    return soc * model.capacity_energy_j


def voltage_from_energy(e: float, model: BatteryModel) -> float:
    """Terminal voltage (V) for a stored energy, by inverse curve lookup."""
    cap = model.capacity_energy_j
    if not 0 <= e <= cap * (1 + 1e-12):
        raise ValueError(f"energy {e} outside [0, {cap}]")
    soc = min(e / cap, 1.0)
    volts = [p[0] for p in model.soc_curve]
    socs = [p[1] for p in model.soc_curve]
    return float(np.interp(soc, socs, volts))


def state_from_voltage(v: float, model: BatteryModel) -> BatteryState:
    return BatteryState(stored_energy_j=energy_from_voltage(v, model), voltage=v)


def state_from_energy(e: float, model: BatteryModel) -> BatteryState:
    return BatteryState(stored_energy_j=e, voltage=voltage_from_energy(e, model))


def state_from_soc(soc: float, model: BatteryModel) -> BatteryState:
    if not 0 <= soc <= 1:
        raise ValueError(f"soc must be in [0, 1], got {soc}")
    return state_from_energy(soc * model.capacity_energy_j, model)


def apply_net_power(
    state: BatteryState, net_power_mw: float, dt_s: float, model: BatteryModel
) -> BatteryState:
    """Advance the battery by dt seconds of net charging (+) or draining (-).

    Energy is clamped to [0, capacity_energy]: surplus once full is wasted,
    and the battery cannot go below empty.
    """
    if dt_s <= 0:
        raise ValueError(f"dt_s must be > 0, got {dt_s}")
    raw = state.stored_energy_j + net_power_mw * dt_s / 1000.0
    clamped = min(max(raw, 0.0), model.capacity_energy_j)
    return state_from_energy(clamped, model)


CURVE_CSV_HEADER = ["voltage_v", "soc_fraction"]


def load_curve_csv(path) -> tuple[tuple[float, float], ...]:
    """Load a SoC curve override from CSV (header ``voltage_v,soc_fraction``)."""
    points: list[tuple[float, float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CURVE_CSV_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(CURVE_CSV_HEADER)!r}, got {header!r}"
            )
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                points.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}: row {row_no}: {exc}") from exc
    return tuple(points)
