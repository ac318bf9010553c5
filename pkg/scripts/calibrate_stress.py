#!/usr/bin/env python3
"""Derive the stress classifier's normalization constants from the corpus.

Runs the HRV pipeline over every patient-day window in data/, then prints
the z-normalization constants (mean/std of rmssd, sdnn, lf_hf) and the
score quantile boundaries (20/40/60/80%) to freeze into
careagent/health/stress.py.
"""

from __future__ import annotations

import argparse
from datetime import date, timedelta

import numpy as np

from careagent.health.ppg import analyze_ppg_series
from careagent.health.records import HealthDataset
from careagent.health.stress import WEIGHTS


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="data")
    args = parser.parse_args()
    dataset = HealthDataset(args.data)
    days = [date(2020, 8, 1) + timedelta(days=i) for i in range(31)]
    rows = []
    for patient in dataset.patients():
        for day in days:
            samples = dataset.ppg(patient, day.isoformat(), "")
            features = analyze_ppg_series(samples)
            rows.append((features.rmssd, features.sdnn, features.lf_hf))
    table = np.asarray(rows)
    names = ("rmssd", "sdnn", "lf_hf")
    norms = {}
    print(f"corpus windows: {len(rows)}")
    print("NORMS = {")
    for column, name in enumerate(names):
        mean = float(table[:, column].mean())
        std = float(table[:, column].std())
        norms[name] = (mean, std)
        print(f'    "{name}": ({mean:.6g}, {std:.6g}),')
    print("}")
    zs = {name: (table[:, i] - norms[name][0]) / norms[name][1] for i, name in enumerate(names)}
    scores = sum(WEIGHTS[name] * zs[name] for name in names)
    bins = np.quantile(scores, [0.2, 0.4, 0.6, 0.8])
    print("LEVEL_BINS = (" + ", ".join(f"{b:.6g}" for b in bins) + ")")
    print(f"score range: [{scores.min():.3f}, {scores.max():.3f}]")


if __name__ == "__main__":
    main()
