"""Deterministic rule-based stress scoring over HRV features.

The score is a fixed weighted sum of z-scored features: lower rmssd/sdnn
and a higher lf/hf ratio both push the score (and the stress level) up.
The z-normalization constants and bin boundaries below were computed once
over the bundled per-day fixture corpus (scripts/calibrate_stress.py) and
are frozen here so classification stays reproducible.
"""

from __future__ import annotations

from typing import Any

from ..errors import AgentError

REQUIRED_FEATURES = ("rmssd", "sdnn", "lf_hf", "hf")

WEIGHTS = {"rmssd": -1.0, "sdnn": -0.5, "lf_hf": 1.0}

# feature -> (corpus mean, corpus std), from scripts/calibrate_stress.py
NORMS = {
    "rmssd": (53.1868, 10.1049),
    "sdnn": (40.2656, 5.55626),
    "lf_hf": (1.38063, 1.2439),
}

# score quantiles (20/40/60/80%) over the fixture corpus
LEVEL_BINS = (-1.99793, -0.831828, 0.70606, 1.8835)

LEVEL_LABELS = ("very calm", "calm", "moderate", "elevated", "high")


class StressError(AgentError):
    pass


class MissingFeature(StressError):
    def __init__(self, name: str, reason: str = "absent"):
        super().__init__(f"cannot score stress: feature {name!r} {reason}")
        self.name = name


def _zscores(features: dict[str, Any]) -> dict[str, float]:
    zs = {}
    for name, (mean, std) in NORMS.items():
        zs[name] = (float(features[name]) - mean) / std
    return zs


def classify_stress(features: dict[str, Any]) -> dict[str, Any]:
    """Map HRV features to a stress level 0..4 plus a one-line rationale."""
    for name in REQUIRED_FEATURES:
        if name not in features:
            raise MissingFeature(name)
    if float(features["hf"]) <= 0.0:
        raise MissingFeature("lf_hf", reason="undefined because hf power is zero")
    zs = _zscores(features)
    score = sum(WEIGHTS[name] * zs[name] for name in WEIGHTS)
    level = 0
    for boundary in LEVEL_BINS:
        if score >= boundary:
            level += 1
    dominant = max(WEIGHTS, key=lambda name: abs(WEIGHTS[name] * zs[name]))
    contribution = WEIGHTS[dominant] * zs[dominant]
    tendency = "raises" if contribution > 0 else "lowers"
    rationale = (
        f"stress level {level} ({LEVEL_LABELS[level]}); dominant factor: {dominant} "
        f"of {float(features[dominant]):.2f} {tendency} the score (z={zs[dominant]:+.2f})"
    )
    return {"level": level, "rationale": rationale}
