"""Patient record retrieval and basic statistics over the fixture corpus.

Dataset layout: ``<data_dir>/<patient_id>/<signal>.csv`` with a header row.
Signals: ``sleep`` (one row per night), ``activity`` (one row per day), and
``ppg`` (epoch-millisecond samples). Patient ids look like ``par_5``.
"""

from __future__ import annotations

import csv
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Any

from ..errors import AgentError

_DAY_MS = 86_400_000

_SIGNAL_FIELDS: dict[str, dict[str, type]] = {
    "sleep": {
        "date": str,
        "total_sleep_min": int,
        "rem_min": int,
        "deep_min": int,
        "light_min": int,
        "efficiency": float,
    },
    "activity": {"date": str, "steps": int, "active_min": int},
    "ppg": {"date": int, "ppg": float, "hr": float},
}


class HealthDataError(AgentError):
    pass


class UnknownPatient(HealthDataError):
    def __init__(self, patient_id: str):
        super().__init__(f"no records for patient {patient_id!r}")
        self.patient_id = patient_id


class BadDate(HealthDataError):
    pass


class EmptyInput(HealthDataError):
    pass


class UnknownMode(HealthDataError):
    def __init__(self, mode: str):
        super().__init__(f"unknown analysis mode {mode!r}; expected average, sum, or trend")
        self.mode = mode


def parse_day(text: str) -> date:
    try:
        return datetime.strptime(text, "%Y-%m-%d").date()
    except (ValueError, TypeError) as exc:
        raise BadDate(f"dates must use the %Y-%m-%d format, got {text!r}") from exc


def parse_range(start: str, end: str) -> tuple[date, date]:
    """Inclusive day range; an empty end means the single start day."""
    first = parse_day(start)
    last = first if end == "" else parse_day(end)
    if last < first:
        raise BadDate(f"end date {end!r} is before start date {start!r}")
    return first, last


class HealthDataset:
    """Read-only view over the per-patient CSV corpus."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)

    def patients(self) -> list[str]:
        if not self.data_dir.is_dir():
            return []
        return sorted(p.name for p in self.data_dir.iterdir() if p.is_dir())

    def _load(self, patient_id: str, signal: str) -> list[dict[str, Any]]:
        patient_dir = self.data_dir / patient_id
        if not patient_dir.is_dir():
            raise UnknownPatient(patient_id)
        path = patient_dir / f"{signal}.csv"
        if not path.is_file():
            raise UnknownPatient(patient_id)
        fields = _SIGNAL_FIELDS[signal]
        rows: list[dict[str, Any]] = []
        with path.open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                rows.append({name: cast(row[name]) for name, cast in fields.items()})
        return rows

    def sleep(self, patient_id: str, start: str, end: str) -> list[dict[str, Any]]:
        first, last = parse_range(start, end)
        rows = self._load(patient_id, "sleep")
        return [r for r in rows if first <= parse_day(r["date"]) <= last]

    def activity(self, patient_id: str, start: str, end: str) -> list[dict[str, Any]]:
        first, last = parse_range(start, end)
        rows = self._load(patient_id, "activity")
        return [r for r in rows if first <= parse_day(r["date"]) <= last]

    def ppg(self, patient_id: str, start: str, end: str) -> list[dict[str, Any]]:
        first, last = parse_range(start, end)
        first_ms = int(datetime(first.year, first.month, first.day, tzinfo=timezone.utc).timestamp() * 1000)
        last_ms = int(datetime(last.year, last.month, last.day, tzinfo=timezone.utc).timestamp() * 1000) + _DAY_MS
        rows = self._load(patient_id, "ppg")
        selected = [r for r in rows if first_ms <= r["date"] < last_ms]
        if not selected:
            raise EmptyInput(
                f"no ppg samples for {patient_id} between {first.isoformat()} and {last.isoformat()}"
            )
        return selected


def _numeric_fields(records: list[dict[str, Any]]) -> list[str]:
    sample = records[0]
    return [k for k, v in sample.items() if isinstance(v, (int, float)) and not isinstance(v, bool)]


def _trend_slope(xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    denominator = sum((x - mean_x) ** 2 for x in xs)
    if denominator == 0.0:
        return 0.0
    return sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / denominator

FLAT_SLOPE_EPS = 1e-9


def analyze_records(records: list[dict[str, Any]], mode: str) -> dict[str, Any]:
    """Per-field statistics over a record list.

    average: arithmetic mean per numeric field. sum: per-field totals.
    trend: least-squares slope per day with a sign label (increasing /
    decreasing / flat).
    """
    if mode not in ("average", "sum", "trend"):
        raise UnknownMode(str(mode))
    if not records and mode in ("average", "trend"):
        raise EmptyInput(f"mode {mode!r} needs at least one record")
    fields = _numeric_fields(records) if records else []
    statistics: dict[str, Any] = {}
    if mode == "average":
        for name in fields:
            statistics[name] = sum(r[name] for r in records) / len(records)
    elif mode == "sum":
        for name in fields:
            statistics[name] = sum(r[name] for r in records)
    else:
        if "date" in records[0]:
            origin = parse_day(records[0]["date"]).toordinal()
            xs = [float(parse_day(r["date"]).toordinal() - origin) for r in records]
        else:
            xs = [float(i) for i in range(len(records))]
        for name in fields:
            slope = _trend_slope(xs, [float(r[name]) for r in records])
            if slope > FLAT_SLOPE_EPS:
                direction = "increasing"
            elif slope < -FLAT_SLOPE_EPS:
                direction = "decreasing"
            else:
                direction = "flat"
            statistics[name] = {"slope_per_day": slope, "direction": direction}
    return {"mode": mode, "count": len(records), "statistics": statistics}
