"""In-sensor analytics: threshold anomaly detection with temporal
compression, offline threshold calibration, zero-order-hold stream
reconstruction, and compression/fidelity metrics.

A reading is an anomaly when any channel moves by at least the channel's
relative threshold from the value captured at the *previous* anomaly.  Each
relative comparison uses an absolute per-channel floor so that values near
zero (e.g. temperature crossing 0 °C) do not make the percentage rule
degenerate.  Between anomalies, a periodic timer guarantees one transmission
per transmission interval; any transmission (anomaly or periodic) resets
that timer.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

CHANNELS = ("temperature", "humidity", "lux")

# Absolute floors for the relative-threshold scale, per channel.  Keeps the
# threshold meaningful when the reference value sits near zero.
THRESHOLD_FLOORS = {"temperature": 0.2, "humidity": 0.5, "lux": 1.0}

DEFAULT_THRESHOLD = 0.05
THRESHOLD_CLAMP = (0.01, 0.20)
MIN_CALIBRATION_SAMPLES = 1000


@dataclass(frozen=True)
class SensorSample:
    """One quantized environmental reading."""

    epoch: float
    temperature: float  # °C, 0.01 resolution
    humidity: float     # %RH, 0.01 resolution
    lux: float

    def __post_init__(self) -> None:
        if not 0 <= self.humidity <= 100:
            raise ValueError(f"humidity must be in [0, 100], got {self.humidity}")
        if self.lux < 0:
            raise ValueError(f"lux must be >= 0, got {self.lux}")

    def channel(self, name: str) -> float:
        return getattr(self, name)


@dataclass(frozen=True)
class AnomalyThresholds:
    """Per-channel relative thresholds (fraction of the last anomaly value)."""

    temperature: float = DEFAULT_THRESHOLD
    humidity: float = DEFAULT_THRESHOLD
    lux: float = DEFAULT_THRESHOLD
    degenerate_channels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in CHANNELS:
            x = getattr(self, name)
            if not 0 < x < 1:
                raise ValueError(f"threshold for {name} must be in (0, 1), got {x}")

    def channel(self, name: str) -> float:
        return getattr(self, name)


@dataclass(frozen=True)
class TxDecision:
    """Outcome of one detector step."""

    transmit: bool
    reason: str | None = None  # "anomaly" | "periodic" | None
    channel_triggering: str | None = None

    def __post_init__(self) -> None:
        if self.reason == "anomaly" and not self.transmit:
            raise ValueError("anomaly decisions must transmit")


def _scale(reference: float, floor: float) -> float:
    return max(abs(reference), floor)


def detect(
    sample: SensorSample, last_anomaly: SensorSample, th: AnomalyThresholds
) -> TxDecision:
    """Check one sample against the last anomaly reference.

    Anomaly iff, for any channel, |value − reference| >= x × max(|reference|,
    floor).  The boundary is inclusive.  On an anomaly the caller is expected
    to advance the reference to this sample.
    """
    for name in CHANNELS:
        delta = abs(sample.channel(name) - last_anomaly.channel(name))
        threshold = th.channel(name) * _scale(last_anomaly.channel(name), THRESHOLD_FLOORS[name])
        if delta >= threshold:
            return TxDecision(transmit=True, reason="anomaly", channel_triggering=name)
    return TxDecision(transmit=False)


def periodic_due(now_s: float, last_tx_s: float, interval_s: float) -> bool:
    """True when the periodic transmission timer has elapsed."""
    if interval_s < 1:
        raise ValueError(f"interval must be >= 1 s, got {interval_s}")
    return now_s - last_tx_s >= interval_s


class Detector:
    """Stateful per-node detector: anomaly reference plus periodic timer.

    The first sample of a run initializes the reference and is always
    transmitted.
    """

    def __init__(self, thresholds: AnomalyThresholds):
        self.thresholds = thresholds
        self.last_anomaly: SensorSample | None = None
        self.last_tx_s: float | None = None

    def step(self, sample: SensorSample, interval_s: float) -> TxDecision:
        if self.last_anomaly is None:
            self.last_anomaly = sample
            self.last_tx_s = sample.epoch
            return TxDecision(transmit=True, reason="periodic")
        decision = detect(sample, self.last_anomaly, self.thresholds)
        if decision.transmit:
            self.last_anomaly = sample
            self.last_tx_s = sample.epoch
            return decision
        if periodic_due(sample.epoch, self.last_tx_s, interval_s):
            self.last_tx_s = sample.epoch
            return TxDecision(transmit=True, reason="periodic")
        return TxDecision(transmit=False)


# ---------------------------------------------------------------------------
# Threshold calibration
# ---------------------------------------------------------------------------

def _kmeans_1d_two(values: np.ndarray, max_iter: int = 100, tol: float = 1e-9):
    """Lloyd's algorithm for k=2 on 1-D data, deterministic min/max init.

    Returns the two centroids, sorted ascending.
    """
    lo = float(values.min())
    hi = float(values.max())
    c0, c1 = lo, hi
    for _ in range(max_iter):
        midpoint = (c0 + c1) / 2.0
        low = values[values <= midpoint]
        high = values[values > midpoint]
        if len(low) == 0 or len(high) == 0:
            break
        n0 = float(low.mean())
        n1 = float(high.mean())
        shift = max(abs(n0 - c0), abs(n1 - c1))
        c0, c1 = n0, n1
        if shift < tol:
            break
    return c0, c1


def relative_changes(values: np.ndarray, floor: float) -> np.ndarray:
    """Absolute successive relative changes |Δ| / max(|prev|, floor)."""
    values = np.asarray(values, dtype=np.float64)
    prev = values[:-1]
    deltas = np.abs(np.diff(values))
    return deltas / np.maximum(np.abs(prev), floor)


def calibrate_thresholds(history: list[SensorSample], k: int = 2) -> AnomalyThresholds:
    """Derive per-channel thresholds from a long sample history.

    Per channel the successive relative changes are split into a "small
    change" and a "large change" cluster with 1-D k-means (deterministic
    min/max init); the threshold is the midpoint of the two centroids,
    clamped to [0.01, 0.20].  Channels with no usable spread fall back to the
    0.05 default and are listed in ``degenerate_channels``.
    """
    if k != 2:
        raise ValueError(f"only k=2 clustering is supported, got k={k}")
    if len(history) < MIN_CALIBRATION_SAMPLES:
        raise ValueError(
            f"need at least {MIN_CALIBRATION_SAMPLES} samples, got {len(history)}"
        )
    thresholds: dict[str, float] = {}
    degenerate: list[str] = []
    for name in CHANNELS:
        series = np.array([s.channel(name) for s in history], dtype=np.float64)
        changes = relative_changes(series, THRESHOLD_FLOORS[name])
        if float(changes.max() - changes.min()) < 1e-12:
            thresholds[name] = DEFAULT_THRESHOLD
            degenerate.append(name)
            continue
        c0, c1 = _kmeans_1d_two(changes)
        midpoint = (c0 + c1) / 2.0
        thresholds[name] = min(max(midpoint, THRESHOLD_CLAMP[0]), THRESHOLD_CLAMP[1])
    return AnomalyThresholds(degenerate_channels=tuple(degenerate), **thresholds)


HISTORY_CSV_HEADER = ["epoch_s", "temp_c", "rh_pct", "lux"]


def load_history_csv(path) -> list[SensorSample]:
    """Load a calibration history (header ``epoch_s,temp_c,rh_pct,lux``)."""
    samples: list[SensorSample] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != HISTORY_CSV_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(HISTORY_CSV_HEADER)!r}, got {header!r}"
            )
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                samples.append(
                    SensorSample(
                        epoch=float(row[0]),
                        temperature=float(row[1]),
                        humidity=float(row[2]),
                        lux=float(row[3]),
                    )
                )
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}: row {row_no}: {exc}") from exc
    return samples


# ---------------------------------------------------------------------------
# Reconstruction and fidelity
# ---------------------------------------------------------------------------

def reconstruct_zoh(
    transmitted: list[SensorSample], timeline_epochs
) -> list[SensorSample]:
    """Zero-order-hold reconstruction of a transmitted stream.

    Each timeline epoch takes the most recent transmitted sample at or before
    it; epochs before the first transmission take the first sample (the
    receiver's best knowledge).
    """
    if not transmitted:
        raise ValueError("transmitted stream must be non-empty")
    tx_epochs = np.array([s.epoch for s in transmitted], dtype=np.float64)
    timeline = np.asarray(timeline_epochs, dtype=np.float64)
    idx = np.searchsorted(tx_epochs, timeline, side="right") - 1
    idx = np.clip(idx, 0, len(transmitted) - 1)
    out: list[SensorSample] = []
    for t, i in zip(timeline, idx):
        src = transmitted[int(i)]
        out.append(replace(src, epoch=float(t)))
    return out


def pearson_r(x, y) -> float | None:
    """Pearson product-moment correlation; None when either side has zero
    variance (r is undefined there, not zero)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y):
        raise ValueError("series lengths differ")
    if len(x) < 2:
        raise ValueError("need at least 2 points")
    xd = x - x.mean()
    yd = y - y.mean()
    sx = float(np.dot(xd, xd))
    sy = float(np.dot(yd, yd))
    if sx == 0.0 or sy == 0.0:
        return None
    return float(np.dot(xd, yd) / np.sqrt(sx * sy))


@dataclass(frozen=True)
class FidelityMetrics:
    compression_ratio: float
    pearson: dict[str, float | None]
    info_loss_fraction: float


@dataclass(frozen=True)
class StreamResult:
    """Outcome of replaying a recorded 1 Hz stream through one device."""

    n_samples: int
    n_tx: int
    anomaly_count: int
    periodic_count: int
    transmitted: list[SensorSample]
    fidelity: FidelityMetrics


def run_stream(
    epochs: np.ndarray,
    temperature: np.ndarray,
    humidity: np.ndarray,
    lux: np.ndarray,
    interval_s: float,
    thresholds: AnomalyThresholds,
) -> StreamResult:
    """Replay a 1 Hz stream through a fixed-interval device.

    Every sample passes through the anomaly detector; non-anomalous samples
    are transmitted only when the periodic timer elapses.  Fidelity is
    measured between the original stream and its zero-order-hold
    reconstruction from the transmitted points.
    """
    n = len(epochs)
    if not (len(temperature) == len(humidity) == len(lux) == n):
        raise ValueError("all channels must have the same length")
    detector = Detector(thresholds)
    transmitted: list[SensorSample] = []
    anomalies = 0
    periodics = 0
    for i in range(n):
        sample = SensorSample(
            epoch=float(epochs[i]),
            temperature=float(temperature[i]),
            humidity=float(humidity[i]),
            lux=float(lux[i]),
        )
        decision = detector.step(sample, interval_s)
        if decision.transmit:
            transmitted.append(sample)
            if decision.reason == "anomaly":
                anomalies += 1
            else:
                periodics += 1

    recon = reconstruct_zoh(transmitted, epochs)
    original = {
        "temperature": np.asarray(temperature, dtype=np.float64),
        "humidity": np.asarray(humidity, dtype=np.float64),
        "lux": np.asarray(lux, dtype=np.float64),
    }
    reconstructed = {
        name: np.array([s.channel(name) for s in recon]) for name in CHANNELS
    }
    fidelity = fidelity_metrics(original, reconstructed, len(transmitted))
    return StreamResult(
        n_samples=n,
        n_tx=len(transmitted),
        anomaly_count=anomalies,
        periodic_count=periodics,
        transmitted=transmitted,
        fidelity=fidelity,
    )


def fidelity_metrics(
    original: dict[str, np.ndarray],
    reconstructed: dict[str, np.ndarray],
    n_tx: int,
) -> FidelityMetrics:
    """Compression ratio, per-channel correlation, and information loss.

    ``original`` and ``reconstructed`` map channel names to equal-length
    series sampled on the same timeline.
    """
    if n_tx <= 0:
        raise ValueError("n_tx must be > 0")
    lengths = {len(v) for v in original.values()} | {len(v) for v in reconstructed.values()}
    if len(lengths) != 1:
        raise ValueError("all series must have the same length")
    n = lengths.pop()
    if n < 2:
        raise ValueError("need at least 2 points")
    correlations = {
        name: pearson_r(original[name], reconstructed[name]) for name in original
    }
    return FidelityMetrics(
        compression_ratio=n / n_tx,
        pearson=correlations,
        info_loss_fraction=1.0 - n_tx / n,
    )
