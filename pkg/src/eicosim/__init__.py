"""Energy-harvesting long-range sensor node simulator.

Library layout:

* :mod:`eicosim.harvest` — irradiance to harvested power, diurnal synthesis
* :mod:`eicosim.battery` — voltage/energy lookup and state transitions
* :mod:`eicosim.modes` — node power modes and the rate-dependent power model
* :mod:`eicosim.eico` — the adaptive transmission-rate controller
* :mod:`eicosim.isa` — anomaly detection, calibration, fidelity metrics
* :mod:`eicosim.radio` — packet codec and communication-energy analysis
* :mod:`eicosim.simkernel` — the deterministic minute-tick simulator
* :mod:`eicosim.presets` — named, fully-pinned scenarios
* :mod:`eicosim.cli` — the ``eico-sim`` command-line tool
"""

__version__ = "0.1.0"

from .battery import BatteryModel, BatteryState
from .eico import ControllerState, EicoConfig, RateLadder
from .harvest import DailyInsolation, IrradianceTrace, SolarCellSpec
from .isa import AnomalyThresholds, SensorSample, TxDecision
from .modes import PowerModeTable
from .radio import LinkParams, TxPacket
from .simkernel import SimConfig, SimResult

__all__ = [
    "AnomalyThresholds",
    "BatteryModel",
    "BatteryState",
    "ControllerState",
    "DailyInsolation",
    "EicoConfig",
    "IrradianceTrace",
    "LinkParams",
    "PowerModeTable",
    "RateLadder",
    "SensorSample",
    "SimConfig",
    "SimResult",
    "SolarCellSpec",
    "TxPacket",
    "__version__",
]
