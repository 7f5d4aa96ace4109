"""Energy-aware transmission-rate controller.

Two coupled loops govern the rate:

* Once per day, at the sunset event, the *minimum* rate for the next 24 h is
  chosen from the available-energy budget

      E_avail = (E_batt − E_buf) / D_max + E_harv

  by matching it against the rate ladder's daily energy costs.  A battery at
  or below the buffer level forces the slowest rung (charging priority).

* Once per minute while the sun is up, the instantaneous rate is adapted to
  the harvested power: step one rung faster when harvest comfortably exceeds
  the current rung's consumption (``up_ratio``), one rung slower when it no
  longer covers it (``down_ratio``), and jump straight to the fastest rung
  the harvest can pay for once the battery is full.  The instantaneous rate
  is never slower than the day's minimum rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .modes import PowerModeTable, daily_energy, node_power

DEFAULT_LADDER_INTERVALS = (1, 2, 5, 10, 20, 30, 60, 120, 180, 300)


@dataclass(frozen=True)
class RateLadder:
    """The discrete transmission intervals and their daily energy costs.

    ``intervals_s`` runs fastest (1 s) to slowest (300 s); ``daily_energy_j``
    is aligned with it and strictly decreasing.
    """

    intervals_s: tuple[int, ...]
    daily_energy_j: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.intervals_s) != 10:
            raise ValueError(f"ladder must have exactly 10 rungs, got {len(self.intervals_s)}")
        if self.intervals_s[0] != 1 or self.intervals_s[-1] != 300:
            raise ValueError("ladder must span 1 s to 300 s")
        if any(b <= a for a, b in zip(self.intervals_s, self.intervals_s[1:])):
            raise ValueError("intervals must be strictly increasing")
        if len(self.daily_energy_j) != len(self.intervals_s):
            raise ValueError("daily_energy_j must align with intervals_s")
        if any(b >= a for a, b in zip(self.daily_energy_j, self.daily_energy_j[1:])):
            raise ValueError("daily energy must be strictly decreasing with interval")

    @classmethod
    def from_modes(
        cls, modes: PowerModeTable, intervals_s=DEFAULT_LADDER_INTERVALS
    ) -> "RateLadder":
        """Build the ladder from the node's power-mode table."""
        intervals = tuple(int(i) for i in intervals_s)
        return cls(
            intervals_s=intervals,
            daily_energy_j=tuple(daily_energy(i, modes) for i in intervals),
        )

    @property
    def fastest(self) -> int:
        return self.intervals_s[0]

    @property
    def slowest(self) -> int:
        return self.intervals_s[-1]

    def rung_index(self, interval_s: int) -> int:
        return self.intervals_s.index(interval_s)

    def energy_for(self, interval_s: int) -> float:
        return self.daily_energy_j[self.rung_index(interval_s)]


def default_ladder(modes: PowerModeTable | None = None) -> RateLadder:
    return RateLadder.from_modes(modes or PowerModeTable())


@dataclass(frozen=True)
class EicoConfig:
    """Controller tuning.

    ``up_ratio`` and ``down_ratio`` bound the daytime hysteresis band: rates
    speed up when harvest >= up_ratio × rung power and slow down when harvest
    < down_ratio × rung power.  down_ratio defaults to 1.0 (slow down only
    when harvest no longer covers the current rung); anything much larger
    re-triggers a down-step right after an up-step because adjacent rung
    powers are up to 2.3x apart.  ``charge_fraction`` documents the design
    target that 1 − 1/up_ratio of available power goes to charging.
    """

    ladder: RateLadder
    d_max_days: int = 14
    e_buf_j: float = 0.0
    charge_fraction: float = 0.6
    up_ratio: float = 2.5
    down_ratio: float = 1.0

    def __post_init__(self) -> None:
        if self.d_max_days < 1:
            raise ValueError(f"d_max_days must be >= 1, got {self.d_max_days}")
        if self.e_buf_j < 0:
            raise ValueError(f"e_buf_j must be >= 0, got {self.e_buf_j}")
        if not 0 < self.charge_fraction < 1:
            raise ValueError(f"charge_fraction must be in (0, 1), got {self.charge_fraction}")
        if not self.up_ratio > self.down_ratio >= 1.0:
            raise ValueError("need up_ratio > down_ratio >= 1")


@dataclass(frozen=True)
class ControllerState:
    """Per-node controller state between steps."""

    current_interval_s: int
    min_interval_today_s: int
    battery_full_mode: bool = False
    last_sunset_epoch: float | None = None


def available_energy(e_batt_j: float, cfg: EicoConfig, e_harv_j: float) -> float:
    """Daily energy budget: battery headroom spread over D_max plus yesterday's
    harvest.  Negative when the battery sits below the buffer level."""
    if e_batt_j < 0 or e_harv_j < 0:
        raise ValueError("energies must be >= 0")
    return (e_batt_j - cfg.e_buf_j) / cfg.d_max_days + e_harv_j


def select_min_rate(e_avail_j: float, ladder: RateLadder) -> int:
    """Pick the interval whose daily cost best matches the budget without
    exceeding it.

    Among rungs whose daily energy is <= e_avail, take the closest match
    (i.e. the fastest affordable rung).  If no rung is affordable, fall back
    to the slowest interval.
    """
    admissible = [
        (interval, cost)
        for interval, cost in zip(ladder.intervals_s, ladder.daily_energy_j)
        if cost <= e_avail_j
    ]
    if not admissible:
        return ladder.slowest
    best = min(admissible, key=lambda pair: (abs(pair[1] - e_avail_j), -pair[0]))
    return best[0]


def sunset_update(e_batt_j: float, e_harv_today_j: float, cfg: EicoConfig) -> int:
    """Choose the minimum interval for the coming day at the sunset event.

    A battery at or below the buffer forces the slowest interval regardless
    of how much was harvested: charging takes priority.
    """
    if e_batt_j <= cfg.e_buf_j:
        return cfg.ladder.slowest
    e_avail = available_energy(e_batt_j, cfg, e_harv_today_j)
    return select_min_rate(e_avail, cfg.ladder)


def apply_sunset(
    state: ControllerState, e_batt_j: float, e_harv_today_j: float,
    cfg: EicoConfig, epoch: float,
) -> ControllerState:
    """Run sunset_update and reset the controller to the new minimum rate."""
    interval = sunset_update(e_batt_j, e_harv_today_j, cfg)
    return replace(
        state,
        current_interval_s=interval,
        min_interval_today_s=interval,
        last_sunset_epoch=epoch,
    )


def daytime_step(
    p_harv_mw: float,
    state: ControllerState,
    battery_full: bool,
    cfg: EicoConfig,
    modes: PowerModeTable,
) -> ControllerState:
    """One per-minute rate adaptation while harvest power is present.

    At most one rung of change per call, except the battery-full jump which
    goes directly to the fastest rung the harvest can pay for.  The result
    never exceeds the day's minimum rate (slower bound).
    """
    ladder = cfg.ladder
    if p_harv_mw <= 0:
        return replace(state, battery_full_mode=battery_full)

    rung = ladder.rung_index(state.current_interval_s)
    min_rung = ladder.rung_index(state.min_interval_today_s)

    if battery_full:
        # burn what the harvester provides: fastest rung it can pay for
        target = min_rung
        for idx, interval in enumerate(ladder.intervals_s):
            if node_power(interval, modes) <= p_harv_mw:
                target = min(idx, min_rung)
                break
        return replace(state, current_interval_s=ladder.intervals_s[target],
                       battery_full_mode=True)

    rung_power = node_power(state.current_interval_s, modes)
    if p_harv_mw >= cfg.up_ratio * rung_power and rung > 0:
        rung -= 1
    elif p_harv_mw < cfg.down_ratio * rung_power and rung < min_rung:
        rung += 1
    return replace(state, current_interval_s=ladder.intervals_s[rung],
                   battery_full_mode=False)
