"""Sub-GHz radio toolbox: the 22-byte packet codec and the analytical
communication-energy calculators (thermodynamic floor, path loss, duty-cycle
energy, and per-mode average energy).

Packet layout (normative, big-endian)
-------------------------------------
====== ====== ==================================================
offset  size  field
====== ====== ==================================================
0       2     sync word, 0xD391
2       1     payload length, always 16
3       2     node address
5       1     flags: bit0 anomaly(1)/periodic(0), bits1-4 rate
              ladder rung index (0 = fastest), bits5-7 reserved 0
6       2     temperature, signed, 0.01 °C per LSB
8       2     relative humidity, unsigned, 0.01 %RH per LSB
10      2     illuminance: 4-bit exponent E (bits 15-12) and
              12-bit mantissa M; value = M × 0.01 × 2^E lux
12      4     sample epoch, seconds
16      4     available power, µW
20      2     CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF)
              over bytes 0..19
====== ====== ==================================================

Header is bytes 0..5, payload bytes 6..21, total 22 bytes.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

from .isa import SensorSample

SYNC_WORD = 0xD391
PACKET_LEN = 22
PAYLOAD_LEN = 16
CRC_SPAN = 20  # CRC covers bytes 0..19
MAX_RUNG_INDEX = 9

BOLTZMANN_J_PER_K = 1.380649e-23
SPEED_OF_LIGHT_M_S = 2.99792458e8


class PacketError(ValueError):
    """Base class for packet encode/decode failures."""


class PacketLengthError(PacketError):
    pass


class BadSyncError(PacketError):
    pass


class CrcMismatchError(PacketError):
    pass


class FieldRangeError(PacketError):
    pass


def crc16_ccitt_false(data: bytes) -> int:
    """CRC-16/CCITT-FALSE: polynomial 0x1021, initial value 0xFFFF."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ 0x1021) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
    return crc


@dataclass(frozen=True)
class TxPacket:
    """Decoded logical packet contents."""

    node_address: int
    anomaly: bool
    rung_index: int
    sample: SensorSample
    avail_power_uw: int


def _encode_lux(lux: float) -> int:
    """Pack lux into the 4-bit-exponent / 12-bit-mantissa field."""
    if lux < 0:
        raise FieldRangeError(f"lux must be >= 0, got {lux}")
    centi = round(lux * 100.0)
    exponent = 0
    while centi >> exponent > 0xFFF:
        exponent += 1
    if exponent > 0xF:
        raise FieldRangeError(f"lux {lux} exceeds encodable range")
    mantissa = centi >> exponent
    return (exponent << 12) | mantissa


def _decode_lux(raw: int) -> float:
    mantissa = raw & 0xFFF
    exponent = raw >> 12
    return (mantissa << exponent) / 100.0


def encode(
    sample: SensorSample,
    node_address: int,
    anomaly: bool,
    rung_index: int,
    avail_power_uw: int,
) -> bytes:
    """Serialize a reading into the 22-byte wire form."""
    if not 0 <= node_address <= 0xFFFF:
        raise FieldRangeError(f"node_address must fit 16 bits, got {node_address}")
    if not 0 <= rung_index <= MAX_RUNG_INDEX:
        raise FieldRangeError(f"rung_index must be in [0, {MAX_RUNG_INDEX}], got {rung_index}")
    if not 0 <= avail_power_uw <= 0xFFFFFFFF:
        raise FieldRangeError(f"avail_power_uw must fit 32 bits, got {avail_power_uw}")
    if not 0 <= sample.epoch <= 0xFFFFFFFF:
        raise FieldRangeError(f"epoch must fit 32 bits, got {sample.epoch}")

    temp_centi = round(sample.temperature * 100.0)
    if not -0x8000 <= temp_centi <= 0x7FFF:
        raise FieldRangeError(f"temperature {sample.temperature} outside ±327.67 °C")
    rh_centi = round(sample.humidity * 100.0)
    if not 0 <= rh_centi <= 0xFFFF:
        raise FieldRangeError(f"humidity {sample.humidity} not encodable")

    flags = (1 if anomaly else 0) | (rung_index << 1)
    head = struct.pack(">HBHB", SYNC_WORD, PAYLOAD_LEN, node_address, flags)
    body = struct.pack(
        ">hHHII",
        temp_centi,
        rh_centi,
        _encode_lux(sample.lux),
        int(sample.epoch),
        avail_power_uw,
    )
    crc = crc16_ccitt_false(head + body)
    return head + body + struct.pack(">H", crc)


def decode(data: bytes) -> TxPacket:
    """Parse and validate a 22-byte packet.

    Raises PacketLengthError, CrcMismatchError, BadSyncError, or
    FieldRangeError (all PacketError subclasses), in that check order.
    """
    if len(data) != PACKET_LEN:
        raise PacketLengthError(f"expected {PACKET_LEN} bytes, got {len(data)}")
    (crc_stored,) = struct.unpack(">H", data[CRC_SPAN:])
    crc_actual = crc16_ccitt_false(data[:CRC_SPAN])
    if crc_stored != crc_actual:
        raise CrcMismatchError(f"CRC mismatch: stored {crc_stored:#06x}, computed {crc_actual:#06x}")
    sync, length, address, flags = struct.unpack(">HBHB", data[:6])
    if sync != SYNC_WORD:
        raise BadSyncError(f"bad sync word {sync:#06x}")
    if length != PAYLOAD_LEN:
        raise FieldRangeError(f"bad payload length {length}, expected {PAYLOAD_LEN}")
    if flags & 0xE0:
        raise FieldRangeError(f"reserved flag bits set: {flags:#04x}")
    rung = (flags >> 1) & 0xF
    if rung > MAX_RUNG_INDEX:
        raise FieldRangeError(f"rung index {rung} out of range")
    temp_centi, rh_centi, lux_raw, epoch, power = struct.unpack(">hHHII", data[6:CRC_SPAN])
    sample = SensorSample(
        epoch=epoch,
        temperature=temp_centi / 100.0,
        humidity=rh_centi / 100.0,
        lux=_decode_lux(lux_raw),
    )
    return TxPacket(
        node_address=address,
        anomaly=bool(flags & 1),
        rung_index=rung,
        sample=sample,
        avail_power_uw=power,
    )


LAYOUT_ROWS: tuple[tuple[int, int, str], ...] = (
    (0, 2, "sync word 0xD391"),
    (2, 1, "payload length (16)"),
    (3, 2, "node address"),
    (5, 1, "flags: bit0 anomaly, bits1-4 rung index, bits5-7 reserved"),
    (6, 2, "temperature, signed, 0.01 °C/LSB"),
    (8, 2, "humidity, unsigned, 0.01 %RH/LSB"),
    (10, 2, "lux, 4-bit exponent + 12-bit mantissa, M*0.01*2^E"),
    (12, 4, "sample epoch, s"),
    (16, 4, "available power, µW"),
    (20, 2, "CRC-16/CCITT-FALSE over bytes 0..19"),
)


def describe_layout() -> str:
    """Human-readable normative layout table."""
    lines = [f"total {PACKET_LEN} bytes: 6-byte header + {PAYLOAD_LEN}-byte payload",
             "offset  size  field"]
    for offset, size, label in LAYOUT_ROWS:
        lines.append(f"{offset:>6}  {size:>4}  {label}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Analytical energy calculators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkParams:
    """Point-to-point link description for the path-loss budget."""

    frequency_hz: float
    distance_m: float
    path_exponent: float = 2.0
    tx_gain_db: float = 2.0
    rx_gain_db: float = 2.0
    rx_sensitivity_dbm: float = -120.0
    data_rate_bps: float = 5000.0

    def __post_init__(self) -> None:
        if self.frequency_hz <= 0:
            raise ValueError("frequency must be > 0")
        if self.distance_m <= 0:
            raise ValueError("distance must be > 0")
        if self.data_rate_bps <= 0:
            raise ValueError("data rate must be > 0")


def landauer_limit(temperature_k: float) -> float:
    """Thermodynamic minimum energy per irreversibly-switched bit: kT·ln2 (J/bit)."""
    if temperature_k <= 0:
        raise ValueError(f"temperature must be > 0 K, got {temperature_k}")
    return BOLTZMANN_J_PER_K * temperature_k * math.log(2)


def fspl_db(p: LinkParams) -> float:
    """Path loss (dB) net of antenna gains: 10·n·log10(4πd/λ) − G_tx − G_rx."""
    wavelength = SPEED_OF_LIGHT_M_S / p.frequency_hz
    loss = 10.0 * p.path_exponent * math.log10(4.0 * math.pi * p.distance_m / wavelength)
    return loss - p.tx_gain_db - p.rx_gain_db


def min_tx_power_w(p: LinkParams) -> float:
    """Minimum transmit power (W) to clear the receiver's sensitivity.

    The path loss is quoted to the nearest whole dB before being added to
    the sensitivity, the usual convention when stating a link budget.
    """
    required_dbm = p.rx_sensitivity_dbm + round(fspl_db(p))
    return 10.0 ** (required_dbm / 10.0) / 1000.0


def min_tx_energy_per_bit(p: LinkParams) -> float:
    """Minimum communication energy (J/bit): min transmit power / data rate."""
    return min_tx_power_w(p) / p.data_rate_bps


@dataclass(frozen=True)
class DutyCycleParams:
    """Inputs to the duty-cycled communication energy model.

    Defaults describe a 22-byte packet at 625 baud from a 3.7 V node with a
    35 mA radio, 0.1 mA sense/compute floor, and 5 ms on/off transients,
    evaluated over a one-day horizon.
    """

    bits_per_packet: float = 176.0
    baud: float = 625.0
    i_com_ma: float = 35.0
    i_cmp_lkg_ma: float = 0.1
    t_tran_s: float = 5e-3
    supply_v: float = 3.7
    horizon_s: float = 86400.0
    interval_s: float = 1.0

    def __post_init__(self) -> None:
        for name in ("bits_per_packet", "baud", "i_com_ma", "supply_v",
                     "horizon_s", "interval_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.i_cmp_lkg_ma < 0 or self.t_tran_s < 0:
            raise ValueError("i_cmp_lkg_ma and t_tran_s must be >= 0")
        if self.interval_s > self.horizon_s:
            raise ValueError("interval_s must not exceed horizon_s")


def duty_cycle_energy(p: DutyCycleParams) -> float:
    """Energy (J) spent over the horizon transmitting every ``interval_s``.

    E = (T_com·I_com + T_off·I_cmp_lkg + 2·T_tran·I_com·n/N) × V, with
    T_com = bits × n / (baud × N) and T_off = n − T_com.
    """
    n = p.horizon_s
    interval = p.interval_s
    t_com = p.bits_per_packet * n / (p.baud * interval)
    t_off = n - t_com
    milliamp_seconds = (
        t_com * p.i_com_ma
        + t_off * p.i_cmp_lkg_ma
        + 2.0 * p.t_tran_s * p.i_com_ma * n / interval
    )
    return milliamp_seconds * p.supply_v / 1000.0


def info_loss_fraction(interval_s: float) -> float:
    """Fraction of 1 Hz samples lost when reporting every ``interval_s``: 1 − 1/N."""
    if interval_s < 1:
        raise ValueError(f"interval must be >= 1 s, got {interval_s}")
    return 1.0 - 1.0 / interval_s


def average_mode_energy(
    t_comm_s: float,
    t_comp_s: float,
    t_off_s: float,
    i_comm_ma: float,
    i_comp_ma: float,
    i_off_ma: float,
    supply_v: float,
) -> float:
    """Energy (J) of one duty cycle: V × Σ(time × current) over the three modes."""
    if min(t_comm_s, t_comp_s, t_off_s) < 0:
        raise ValueError("mode times must be >= 0")
    milliamp_seconds = t_comm_s * i_comm_ma + t_comp_s * i_comp_ma + t_off_s * i_off_ma
    return milliamp_seconds * supply_v / 1000.0
