"""PPG signal processing: beat detection and heart-rate-variability metrics.

Pipeline: detrend (subtract a centered 1 s moving mean), adaptive-threshold
peak detection (mean + 0.5*std per 10 s window, 0.3 s minimum inter-peak
gap), normal-to-normal intervals from successive peak times, then time- and
frequency-domain features. The frequency bands come from a periodogram of
the interval series resampled at 4 Hz: LF 0.04-0.15 Hz, HF 0.15-0.4 Hz.

Interval physiology bounds: successive intervals outside 300-2000 ms are
treated as artifacts (e.g. recording gaps between fixture windows) and
dropped before feature extraction.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np
from scipy.signal import periodogram

from ..errors import AgentError

DETREND_WINDOW_S = 1.0
THRESHOLD_WINDOW_S = 10.0
THRESHOLD_STD_FACTOR = 0.5
MIN_PEAK_GAP_S = 0.3
RESAMPLE_HZ = 4.0
LF_BAND = (0.04, 0.15)
HF_BAND = (0.15, 0.40)
NN_MIN_MS = 300.0
NN_MAX_MS = 2000.0
MIN_DURATION_S = 10.0


class PpgError(AgentError):
    pass


class TooShort(PpgError):
    pass


class NoPeaks(PpgError):
    pass


@dataclass(frozen=True)
class HrvFeatures:
    mean_hr: float   # beats per minute
    sdnn: float      # ms, population std of NN intervals
    rmssd: float     # ms, root mean square of successive differences
    pnn50: float     # fraction of successive differences > 50 ms
    mean_nn: float   # ms
    lf: float        # band power 0.04-0.15 Hz
    hf: float        # band power 0.15-0.40 Hz
    lf_hf: float     # lf/hf, 0 when hf vanishes

    def payload(self) -> dict[str, float]:
        return asdict(self)


def _moving_mean(x: np.ndarray, window: int) -> np.ndarray:
    # centered window, clipped at the edges so the mean stays unbiased
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(x)))
    idx = np.arange(len(x))
    lo = np.clip(idx - half, 0, len(x))
    hi = np.clip(idx + half + 1, 0, len(x))
    return (csum[hi] - csum[lo]) / (hi - lo)


def detrend(x: np.ndarray, fs: float, window_s: float = DETREND_WINDOW_S) -> np.ndarray:
    window = max(1, int(round(window_s * fs)))
    return x - _moving_mean(x, window)


def _window_thresholds(x: np.ndarray, fs: float) -> np.ndarray:
    """Per-sample adaptive threshold from non-overlapping 10 s windows."""
    size = max(1, int(round(THRESHOLD_WINDOW_S * fs)))
    thresholds = np.empty_like(x)
    for start in range(0, len(x), size):
        chunk = x[start:start + size]
        thresholds[start:start + len(chunk)] = chunk.mean() + THRESHOLD_STD_FACTOR * chunk.std()
    return thresholds


def detect_peaks(x: np.ndarray, fs: float) -> np.ndarray:
    """Indices of pulse peaks: local maxima above the adaptive threshold,
    at least MIN_PEAK_GAP_S apart (the taller peak wins inside a gap)."""
    if len(x) < 3:
        return np.array([], dtype=int)
    thresholds = _window_thresholds(x, fs)
    interior = np.arange(1, len(x) - 1)
    is_peak = (x[interior] > x[interior - 1]) & (x[interior] >= x[interior + 1])
    candidates = interior[is_peak & (x[interior] > thresholds[interior])]
    min_gap = MIN_PEAK_GAP_S * fs
    kept: list[int] = []
    for idx in candidates:
        if kept and idx - kept[-1] < min_gap:
            if x[idx] > x[kept[-1]]:
                kept[-1] = int(idx)
        else:
            kept.append(int(idx))
    return np.array(kept, dtype=int)


def time_domain_features(nn_ms: Sequence[float]) -> dict[str, float]:
    """Time-domain HRV metrics over an NN interval list (milliseconds)."""
    nn = np.asarray(nn_ms, dtype=float)
    if nn.size == 0:
        raise NoPeaks("no NN intervals to analyze")
    mean_nn = float(nn.mean())
    sdnn = float(nn.std())
    if nn.size > 1:
        deltas = np.diff(nn)
        rmssd = float(np.sqrt(np.mean(deltas**2)))
        pnn50 = float(np.mean(np.abs(deltas) > 50.0))
    else:
        rmssd = 0.0
        pnn50 = 0.0
    return {
        "mean_nn": mean_nn,
        "sdnn": sdnn,
        "rmssd": rmssd,
        "pnn50": pnn50,
        "mean_hr": 60000.0 / mean_nn,
    }


def _band_power(freqs: np.ndarray, power: np.ndarray, band: tuple[float, float]) -> float:
    mask = (freqs >= band[0]) & (freqs < band[1])
    if not mask.any() or len(freqs) < 2:
        return 0.0
    df = freqs[1] - freqs[0]
    return float(power[mask].sum() * df)


def _segment_band_powers(nn_ms: np.ndarray, nn_times_ms: np.ndarray) -> tuple[float, float] | None:
    t0, t1 = nn_times_ms[0], nn_times_ms[-1]
    step_ms = 1000.0 / RESAMPLE_HZ
    n_samples = int((t1 - t0) / step_ms) + 1
    if n_samples < 16:
        return None
    grid = t0 + step_ms * np.arange(n_samples)
    resampled = np.interp(grid, nn_times_ms, nn_ms)
    freqs, power = periodogram(resampled, fs=RESAMPLE_HZ, detrend="constant")
    return _band_power(freqs, power, LF_BAND), _band_power(freqs, power, HF_BAND)


def frequency_features(nn_ms: np.ndarray, nn_times_ms: np.ndarray) -> dict[str, float]:
    """LF/HF band power from the NN series resampled at 4 Hz.

    Recordings with gaps (multi-day fixtures) are split into contiguous
    segments at the gaps; band powers are duration-weighted means over the
    segments, which reduces to a single periodogram for contiguous data.
    """
    if nn_ms.size < 4:
        return {"lf": 0.0, "hf": 0.0, "lf_hf": 0.0}
    breaks = np.where(np.diff(nn_times_ms) > NN_MAX_MS)[0]
    lf_sum = hf_sum = weight = 0.0
    for segment in np.split(np.arange(nn_ms.size), breaks + 1):
        if segment.size < 4:
            continue
        times = nn_times_ms[segment]
        duration = float(times[-1] - times[0])
        if duration <= 0:
            continue
        powers = _segment_band_powers(nn_ms[segment], times)
        if powers is None:
            continue
        lf_sum += powers[0] * duration
        hf_sum += powers[1] * duration
        weight += duration
    if weight == 0.0:
        return {"lf": 0.0, "hf": 0.0, "lf_hf": 0.0}
    lf = lf_sum / weight
    hf = hf_sum / weight
    return {"lf": lf, "hf": hf, "lf_hf": lf / hf if hf > 0 else 0.0}


def analyze_ppg_series(samples: list[dict[str, Any]]) -> HrvFeatures:
    """Full pipeline over a PPG sample series (``date`` epoch ms, ``ppg``)."""
    if len(samples) < 2:
        raise TooShort("need at least two ppg samples")
    t = np.asarray([s["date"] for s in samples], dtype=float)
    x = np.asarray([s["ppg"] for s in samples], dtype=float)
    duration_s = (t[-1] - t[0]) / 1000.0
    if duration_s < MIN_DURATION_S:
        raise TooShort(f"need at least {MIN_DURATION_S:.0f} s of ppg data, got {duration_s:.1f} s")
    # median step is robust to recording gaps between daily windows
    fs = 1000.0 / float(np.median(np.diff(t)))
    peaks = detect_peaks(detrend(x, fs), fs)
    if peaks.size < 3:
        raise NoPeaks(f"found only {peaks.size} pulse peaks")
    peak_times = t[peaks]
    nn = np.diff(peak_times)
    keep = (nn >= NN_MIN_MS) & (nn <= NN_MAX_MS)
    nn = nn[keep]
    nn_times = peak_times[1:][keep]
    if nn.size < 2:
        raise NoPeaks("too few physiological NN intervals after artifact filtering")
    features = time_domain_features(nn)
    features.update(frequency_features(nn, nn_times))
    return HrvFeatures(**features)
