#!/usr/bin/env python3
"""Generate the synthetic patient corpus checked into data/.

Seeded from (patient, day) indices only, so reruns are byte-identical.
Layout: data/par_N/{sleep,activity,ppg}.csv

  sleep     Aug 2020, one row per night
  activity  full year 2020 (leap year), one row per day
  ppg       Aug 2020, one 60 s window per day at 20 Hz

Each patient-day carries a latent stress drive in [0, 1] that shapes the
beat intervals: higher stress means faster, steadier beats with a higher
LF/HF balance. The stress classifier's calibration constants are derived
from this corpus (scripts/calibrate_stress.py).
"""

from __future__ import annotations

import argparse
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import numpy as np

PATIENTS = [f"par_{i}" for i in range(1, 6)]
AUG_DAYS = [date(2020, 8, d) for d in range(1, 32)]
YEAR_2020 = [date(2020, 1, 1) + timedelta(days=i) for i in range(366)]

PPG_FS = 20.0          # Hz
PPG_WINDOW_S = 60.0    # one window per day
PPG_START_HOUR = 10    # window start, UTC

PULSE_SIGMA_S = 0.09
BASE_SEED = 20200801


def _rng(patient_index: int, day_index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(BASE_SEED + patient_index * 101_159 + day_index * 257 + stream)


def stress_drive(patient_index: int, day_index: int) -> float:
    rng = _rng(patient_index, day_index, stream=7)
    wave = 0.35 * np.sin(2 * np.pi * day_index / 31.0 + patient_index)
    return float(np.clip(0.5 + wave + rng.normal(0.0, 0.12), 0.02, 0.98))


def synth_beats(patient_index: int, day_index: int) -> np.ndarray:
    """Beat times (seconds from window start) for one patient-day."""
    s = stress_drive(patient_index, day_index)
    rng = _rng(patient_index, day_index, stream=11)
    mean_rr = 920.0 - 260.0 * s          # ms
    jitter = 0.5 * (62.0 - 42.0 * s)     # ms
    a_lf = 18.0 + 18.0 * s
    a_hf = 5.0 + 40.0 * (1.0 - s)
    beats = []
    t = 0.4
    while t < PPG_WINDOW_S + 2.0:
        beats.append(t)
        rr = (
            mean_rr
            + a_lf * np.sin(2 * np.pi * 0.095 * t)
            + a_hf * np.sin(2 * np.pi * 0.25 * t)
            + rng.normal(0.0, jitter)
        )
        t += float(np.clip(rr, 450.0, 1400.0)) / 1000.0
    return np.asarray(beats)


def synth_ppg_window(patient_index: int, day_index: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(offsets_s, ppg, hr) sampled at PPG_FS over one window."""
    rng = _rng(patient_index, day_index, stream=13)
    beats = synth_beats(patient_index, day_index)
    ts = np.arange(0.0, PPG_WINDOW_S, 1.0 / PPG_FS)
    ppg = 0.25 * np.sin(2 * np.pi * 0.05 * ts + rng.uniform(0, 2 * np.pi))
    for tb in beats:
        lo = np.searchsorted(ts, tb - 5 * PULSE_SIGMA_S)
        hi = np.searchsorted(ts, tb + 5 * PULSE_SIGMA_S)
        ppg[lo:hi] += np.exp(-((ts[lo:hi] - tb) / PULSE_SIGMA_S) ** 2)
    ppg += rng.normal(0.0, 0.02, size=ts.shape)
    inst_hr = 60.0 / np.diff(beats)
    hr = np.interp(ts, beats[1:], inst_hr)
    return ts, ppg, hr


def write_ppg(path: Path, patient_index: int) -> None:
    lines = ["date,ppg,hr"]
    for day_index, day in enumerate(AUG_DAYS):
        start = datetime(day.year, day.month, day.day, PPG_START_HOUR, tzinfo=timezone.utc)
        base_ms = int(start.timestamp() * 1000)
        ts, ppg, hr = synth_ppg_window(patient_index, day_index)
        for offset, value, rate in zip(ts, ppg, hr):
            lines.append(f"{base_ms + int(round(offset * 1000))},{value:.4f},{rate:.1f}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_sleep(path: Path, patient_index: int) -> None:
    rng = _rng(patient_index, 0, stream=17)
    base_total = rng.uniform(390.0, 460.0)
    base_rem_frac = rng.uniform(0.17, 0.22)
    lines = ["date,total_sleep_min,rem_min,deep_min,light_min,efficiency"]
    for day_index, day in enumerate(AUG_DAYS):
        day_rng = _rng(patient_index, day_index, stream=19)
        total = max(240.0, base_total + day_rng.normal(0.0, 24.0))
        rem = base_rem_frac * total + day_rng.normal(0.0, 6.0)
        if patient_index == 4:  # par_5 carries a clear upward REM trend for the demos
            rem += 0.9 * day_index
        deep = total * day_rng.uniform(0.14, 0.19)
        light = total * day_rng.uniform(0.48, 0.56)
        rem = float(np.clip(rem, 30.0, total - deep - 30.0))
        if rem + deep + light > 0.97 * total:
            light = 0.97 * total - rem - deep
        efficiency = float(np.clip(day_rng.normal(0.89, 0.04), 0.72, 0.98))
        lines.append(
            f"{day.isoformat()},{int(round(total))},{int(round(rem))},"
            f"{int(round(deep))},{int(round(light))},{efficiency:.2f}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_activity(path: Path, patient_index: int) -> None:
    lines = ["date,steps,active_min"]
    for day_index, day in enumerate(YEAR_2020):
        day_rng = _rng(patient_index, day_index, stream=23)
        seasonal = np.sin(2 * np.pi * day_index / 366.0 + patient_index)
        steps = int(np.clip(day_rng.normal(8000 + 2200 * seasonal, 2400), 500, 26000))
        active = int(np.clip(day_rng.normal(55 + 18 * seasonal, 16), 5, 200))
        lines.append(f"{day.isoformat()},{steps},{active}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data", help="output corpus directory")
    args = parser.parse_args()
    out = Path(args.out)
    for patient_index, patient in enumerate(PATIENTS):
        patient_dir = out / patient
        patient_dir.mkdir(parents=True, exist_ok=True)
        write_sleep(patient_dir / "sleep.csv", patient_index)
        write_activity(patient_dir / "activity.csv", patient_index)
        write_ppg(patient_dir / "ppg.csv", patient_index)
        print(f"wrote {patient_dir}")


if __name__ == "__main__":
    main()
