"""Command-line front end.

Subcommands: ``simulate``, ``calibrate``, ``linkbudget``, ``packet``,
``tradeoff``.  Exit codes: 0 success, 1 configuration/usage error, 2 node
died during a simulation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import presets, simkernel
from .battery import BatteryModel, load_curve_csv
from .eico import DEFAULT_LADDER_INTERVALS, EicoConfig, RateLadder
from .harvest import SolarCellSpec, load_trace
from .isa import AnomalyThresholds, calibrate_thresholds, load_history_csv
from .modes import PowerModeTable
from .radio import (
    DutyCycleParams,
    LinkParams,
    SensorSample,
    decode,
    describe_layout,
    duty_cycle_energy,
    encode,
    fspl_db,
    info_loss_fraction,
    landauer_limit,
    min_tx_energy_per_bit,
    min_tx_power_w,
)
from .signals import ConstantSignal, DiurnalSignal

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NODE_DIED = 2


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

def build_sim_config(raw: dict, seed_override: int | None = None) -> simkernel.SimConfig:
    """Assemble a SimConfig from a scenario dictionary (see README schema)."""
    try:
        seed = int(seed_override if seed_override is not None else raw.get("seed", 0))
        modes = PowerModeTable(**raw.get("modes", {}))
        cell_raw = raw.get("cell", {})
        cell = SolarCellSpec(
            area_cm2=cell_raw.get("area_cm2", 30.0),
            cell_efficiency=cell_raw.get("cell_efficiency", 0.05),
            harvester_efficiency=cell_raw.get("harvester_efficiency", 0.6),
        )
        batt_raw = raw.get("battery", {})
        curve = (
            load_curve_csv(batt_raw["curve_csv"])
            if "curve_csv" in batt_raw
            else BatteryModel.__dataclass_fields__["soc_curve"].default
        )
        battery = BatteryModel(
            capacity_mah=batt_raw.get("capacity_mah", 230.0),
            nominal_voltage=batt_raw.get("nominal_voltage", 3.7),
            soc_curve=curve,
        )
        eico_raw = dict(raw.get("eico", {}))
        intervals = eico_raw.pop("ladder_intervals_s", DEFAULT_LADDER_INTERVALS)
        eico_cfg = EicoConfig(
            ladder=RateLadder.from_modes(modes, intervals),
            d_max_days=eico_raw.pop("d_max", 14),
            e_buf_j=eico_raw.pop("e_buf_j", 0.1 * battery.capacity_energy_j),
            charge_fraction=eico_raw.pop("charge_fraction", 0.6),
            up_ratio=eico_raw.pop("up_ratio", 2.5),
            down_ratio=eico_raw.pop("down_ratio", 1.0),
        )
        if eico_raw:
            raise ConfigError(f"unknown eico keys: {sorted(eico_raw)}")
        thresholds = AnomalyThresholds(**raw.get("thresholds", {}))

        duration = int(raw["duration_days"])
        daylight = float(raw.get("daylight_hours", 12.0))
        if "trace_csv" in raw:
            trace = load_trace(raw["trace_csv"])
        else:
            insolation = tuple(float(v) for v in raw["insolation_kwh_m2"])
            if len(insolation) != duration:
                raise ConfigError(
                    f"insolation list has {len(insolation)} entries for {duration} days"
                )
            trace = presets.build_daily_trace(
                insolation, daylight, float(raw.get("cloud_depth", 0.0)), seed,
                start_epoch=int(raw.get("start_epoch", 0)),
            )

        signal_name = raw.get("sensor_signal", "diurnal")
        signal_params = raw.get("signal_params", {})
        if signal_name == "diurnal":
            signal = DiurnalSignal(seed, daylight_hours=daylight, **signal_params)
        elif signal_name == "constant":
            signal = ConstantSignal(**signal_params)
        else:
            raise ConfigError(f"unknown sensor_signal {signal_name!r}")

        return simkernel.SimConfig(
            cell=cell,
            battery=battery,
            eico=eico_cfg,
            modes=modes,
            thresholds=thresholds,
            trace=trace,
            signal=signal,
            duration_days=duration,
            seed=seed,
            initial_soc=float(raw.get("initial_soc", 0.5)),
            initial_interval_s=raw.get("initial_interval_s"),
            start_epoch=int(raw.get("start_epoch", 0)),
            name=raw.get("name", "scenario"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def resolve_scenario(spec: str, seed: int | None, config_path: str | None):
    """Return ("sim", SimConfig) or ("demo", runner) for a preset name or file."""
    overrides = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            overrides = json.load(fh)
    if spec in presets.DEMO_PRESETS:
        return "demo", presets.get_demo_runner(spec)
    if spec in presets.SIM_PRESETS:
        cfg = presets.get_sim_preset(spec, seed)
        if overrides:
            raise ConfigError("--config overrides apply to scenario files, not presets")
        return "sim", cfg
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"{spec!r} is neither a preset ({presets.PRESET_NAMES}) nor a file")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    raw.update(overrides)
    return "sim", build_sim_config(raw, seed)


# ---------------------------------------------------------------------------
# Subcommand payloads (pure; main() does the printing and exit codes)
# ---------------------------------------------------------------------------

def simulate_to_dir(cfg: simkernel.SimConfig, out_dir: Path) -> simkernel.SimResult:
    out_dir.mkdir(parents=True, exist_ok=True)
    result = simkernel.run(cfg)
    simkernel.write_log_csv(result, out_dir / "log.csv")
    simkernel.write_days_csv(result, out_dir / "days.csv")
    simkernel.write_tx_csv(result, out_dir / "tx.csv")
    report = simkernel.verify_perpetuity(result, cfg)
    (out_dir / "summary.txt").write_text(format_summary(result, report), encoding="utf-8")
    return result


def format_summary(result: simkernel.SimResult, report) -> str:
    lines = [f"scenario: {result.config.name}", f"seed: {result.config.seed}"]
    if result.died:
        lines.append(f"NODE DIED at epoch {result.death_epoch}")
    lines.append("day  e_harv_j  e_cons_j  min_rate_s  sunset_rate_s  tx  anomalies")
    for d in result.days:
        sunset = "-" if d.sunset_min_interval_s is None else str(d.sunset_min_interval_s)
        lines.append(
            f"{d.day:>3}  {d.e_harv_j:>8.1f}  {d.e_cons_j:>8.1f}  "
            f"{d.min_interval_start_s:>10}  {sunset:>13}  {d.tx_count:>3}  {d.anomaly_count}"
        )
    f = result.fidelity
    lines.append(f"transmissions: {len(result.tx)}")
    lines.append(f"compression ratio: {f.compression_ratio:.3f}")
    lines.append(f"info loss fraction: {f.info_loss_fraction:.6f}")
    for name, r in f.pearson.items():
        lines.append(f"pearson[{name}]: {'undefined' if r is None else f'{r:.4f}'}")
    lines.append(f"perpetuity horizon: {report.d_max_days} days")
    for e in report.entries:
        lines.append(
            f"perpetuity day {e.day}: rate {e.min_interval_s} s, "
            f"battery {e.e_batt_at_sunset_j:.1f} J -> "
            f"{'pass' if e.passed else 'FAIL'} (margin {e.margin_j:.1f} J)"
        )
    lines.append(f"perpetuity: {'all pass' if report.all_pass else 'FAILURES'}")
    return "\n".join(lines) + "\n"


def format_demo(name: str, outcome) -> str:
    lines = [f"demo: {name}"]
    if isinstance(outcome, presets.AnomalyDemoResult):
        s = outcome.stream
        lines.append(f"samples: {s.n_samples}")
        lines.append(f"transmitted: {s.n_tx} ({s.anomaly_count} anomaly, {s.periodic_count} periodic)")
        lines.append(f"compression ratio: {outcome.compression_ratio:.3f}")
        lines.append(f"pearson[humidity]: {outcome.pearson_humidity:.4f}")
    else:
        lines.append(f"fast device (1 s): {outcome.fast.n_tx} transmissions")
        lines.append(f"slow device (300 s): {outcome.slow.n_tx} transmissions "
                     f"({outcome.slow.anomaly_count} anomaly)")
        lines.append(f"compression ratio: {outcome.compression_ratio:.3f}")
        lines.append(f"pearson[temperature]: {outcome.pearson_temperature:.4f}")
        lines.append(f"pearson[humidity]: {outcome.pearson_humidity:.4f}")
    return "\n".join(lines) + "\n"


def linkbudget_payload(p: LinkParams, temperature_k: float = 298.0) -> dict:
    loss = fspl_db(p)
    tx_w = min_tx_power_w(p)
    per_bit = min_tx_energy_per_bit(p)
    landauer = landauer_limit(temperature_k)
    return {
        "fspl_db": loss,
        "fspl_quoted_db": round(loss),
        "required_tx_dbm": p.rx_sensitivity_dbm + round(loss),
        "required_tx_w": tx_w,
        "energy_per_bit_j": per_bit,
        "landauer_j_per_bit": landauer,
        "ratio_vs_landauer": per_bit / landauer,
    }


def format_linkbudget(p: LinkParams, payload: dict) -> str:
    return "\n".join(
        [
            f"frequency: {p.frequency_hz / 1e6:.1f} MHz, distance: {p.distance_m:.1f} m, "
            f"path exponent: {p.path_exponent}",
            f"antenna gains: {p.tx_gain_db} dB / {p.rx_gain_db} dB, "
            f"rx sensitivity: {p.rx_sensitivity_dbm} dBm, rate: {p.data_rate_bps} bps",
            f"path loss (net of gains): {payload['fspl_db']:.2f} dB "
            f"(quoted {payload['fspl_quoted_db']} dB)",
            f"required tx power: {payload['required_tx_dbm']:.1f} dBm = "
            f"{payload['required_tx_w']:.4e} W",
            f"communication energy: {payload['energy_per_bit_j']:.4e} J/bit",
            f"thermodynamic floor (at {298.0:.0f} K): {payload['landauer_j_per_bit']:.4e} J/bit",
            f"communication / floor: {payload['ratio_vs_landauer']:.3e}",
        ]
    ) + "\n"


def tradeoff_rows(intervals: list[float], params: DutyCycleParams | None = None) -> list[dict]:
    """Energy and information loss per interval, with the 1 s baseline ratio."""
    base = params or DutyCycleParams()
    baseline = duty_cycle_energy(DutyCycleParams(**{**base.__dict__, "interval_s": 1.0}))
    rows = []
    for interval in intervals:
        energy = duty_cycle_energy(DutyCycleParams(**{**base.__dict__, "interval_s": interval}))
        rows.append(
            {
                "interval_s": interval,
                "energy_j": energy,
                "energy_ratio_vs_1s": baseline / energy,
                "info_loss": info_loss_fraction(interval),
            }
        )
    return rows


def format_tradeoff_csv(rows: list[dict]) -> str:
    lines = ["interval_s,energy_j,energy_ratio_vs_1s,info_loss"]
    for row in rows:
        lines.append(
            f"{row['interval_s']:g},{row['energy_j']:.6f},"
            f"{row['energy_ratio_vs_1s']:.6f},{row['info_loss']:.6f}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argparse wiring
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eico-sim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override scenario seed")
    common.add_argument("--out", type=str, default=None, help="output directory or file")
    common.add_argument("--config", type=str, default=None, help="JSON overrides for scenario files")

    p_sim = sub.add_parser("simulate", parents=[common], help="run a scenario or preset")
    p_sim.add_argument("--scenario", required=True,
                       help=f"preset name {presets.PRESET_NAMES} or scenario JSON path")

    p_cal = sub.add_parser("calibrate", parents=[common], help="derive thresholds from history CSV")
    p_cal.add_argument("--history", required=True, help="CSV: epoch_s,temp_c,rh_pct,lux")

    p_link = sub.add_parser("linkbudget", parents=[common], help="path-loss / energy-per-bit table")
    p_link.add_argument("--frequency-hz", type=float, default=916e6)
    p_link.add_argument("--distance-m", type=float, default=10.0)
    p_link.add_argument("--path-exponent", type=float, default=2.0)
    p_link.add_argument("--tx-gain-db", type=float, default=2.0)
    p_link.add_argument("--rx-gain-db", type=float, default=2.0)
    p_link.add_argument("--rx-sensitivity-dbm", type=float, default=-120.0)
    p_link.add_argument("--data-rate-bps", type=float, default=5000.0)

    p_pkt = sub.add_parser("packet", parents=[common], help="encode/decode the 22-byte packet")
    p_pkt.add_argument("action", choices=["encode", "decode", "describe"], nargs="?",
                       default="describe")
    p_pkt.add_argument("hex", nargs="?", help="22-byte hex string for decode")
    p_pkt.add_argument("--describe", action="store_true", help="print the normative layout")
    p_pkt.add_argument("--temp-c", type=float, default=0.0)
    p_pkt.add_argument("--rh-pct", type=float, default=0.0)
    p_pkt.add_argument("--lux", type=float, default=0.0)
    p_pkt.add_argument("--epoch-s", type=int, default=0)
    p_pkt.add_argument("--address", type=int, default=0)
    p_pkt.add_argument("--rung", type=int, default=0)
    p_pkt.add_argument("--anomaly", action="store_true")
    p_pkt.add_argument("--avail-power-uw", type=int, default=0)

    p_trade = sub.add_parser("tradeoff", parents=[common],
                             help="duty-cycle energy and info loss vs interval")
    p_trade.add_argument("--intervals", type=str, default="1,2,5,10,20,50,100,200,300",
                         help="comma-separated intervals in seconds")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            kind, payload = resolve_scenario(args.scenario, args.seed, args.config)
            out_dir = Path(args.out) if args.out else Path(f"out-{args.scenario}".replace("/", "_"))
            if kind == "demo":
                outcome = payload()
                out_dir.mkdir(parents=True, exist_ok=True)
                text = format_demo(args.scenario, outcome)
                (out_dir / "summary.txt").write_text(text, encoding="utf-8")
                print(text, end="")
                return EXIT_OK
            result = simulate_to_dir(payload, out_dir)
            report = simkernel.verify_perpetuity(result, payload)
            print(format_summary(result, report), end="")
            return EXIT_NODE_DIED if result.died else EXIT_OK

        if args.command == "calibrate":
            history = load_history_csv(args.history)
            thresholds = calibrate_thresholds(history)
            payload = {
                "temperature": thresholds.temperature,
                "humidity": thresholds.humidity,
                "lux": thresholds.lux,
                "degenerate_channels": list(thresholds.degenerate_channels),
            }
            text = json.dumps(payload, indent=2)
            print(text)
            if args.out:
                Path(args.out).write_text(text + "\n", encoding="utf-8")
            return EXIT_OK

        if args.command == "linkbudget":
            params = LinkParams(
                frequency_hz=args.frequency_hz,
                distance_m=args.distance_m,
                path_exponent=args.path_exponent,
                tx_gain_db=args.tx_gain_db,
                rx_gain_db=args.rx_gain_db,
                rx_sensitivity_dbm=args.rx_sensitivity_dbm,
                data_rate_bps=args.data_rate_bps,
            )
            print(format_linkbudget(params, linkbudget_payload(params)), end="")
            return EXIT_OK

        if args.command == "packet":
            if args.describe or args.action == "describe":
                print(describe_layout())
                return EXIT_OK
            if args.action == "encode":
                sample = SensorSample(
                    epoch=args.epoch_s, temperature=args.temp_c,
                    humidity=args.rh_pct, lux=args.lux,
                )
                wire = encode(sample, args.address, args.anomaly, args.rung,
                              args.avail_power_uw)
                print(wire.hex())
                return EXIT_OK
            if not args.hex:
                raise ConfigError("decode requires a hex string argument")
            packet = decode(bytes.fromhex(args.hex))
            print(json.dumps(
                {
                    "node_address": packet.node_address,
                    "anomaly": packet.anomaly,
                    "rung_index": packet.rung_index,
                    "epoch_s": packet.sample.epoch,
                    "temp_c": packet.sample.temperature,
                    "rh_pct": packet.sample.humidity,
                    "lux": packet.sample.lux,
                    "avail_power_uw": packet.avail_power_uw,
                },
                indent=2,
            ))
            return EXIT_OK

        if args.command == "tradeoff":
            intervals = [float(v) for v in args.intervals.split(",") if v]
            text = format_tradeoff_csv(tradeoff_rows(intervals))
            print(text, end="")
            if args.out:
                Path(args.out).write_text(text, encoding="utf-8")
            return EXIT_OK

        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
