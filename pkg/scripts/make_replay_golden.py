#!/usr/bin/env python3
"""Capture the golden replay transcripts from a verified scripted run.

Run only after the engine's behavior has been reviewed; the transcripts
freeze prompts, plans, answer, and task usage for regression replays.
"""

from __future__ import annotations

import json
from pathlib import Path

from careagent.config import EngineConfig
from careagent.replay import capture_transcript

REPO = Path(__file__).resolve().parent.parent


def main() -> None:
    out_dir = REPO / "fixtures" / "replay"
    out_dir.mkdir(parents=True, exist_ok=True)

    sleep = capture_transcript(
        REPO / "fixtures" / "llm" / "sleep_advice.json",
        "How to improve my sleep?",
        EngineConfig(
            backend="scripted",
            fixture_path="unset",
            enabled_tasks=["google_search", "extract_text"],
            data_dir=str(REPO / "data"),
            fixtures_dir=str(REPO / "fixtures"),
            phrase_dictionary=str(REPO / "fixtures" / "phrases_es_en.tsv"),
        ),
    )
    sleep["config"] = {
        "enabled_tasks": ["google_search", "extract_text"],
        "data_dir": str(REPO / "data"),
        "fixtures_dir": str(REPO / "fixtures"),
        "phrase_dictionary": str(REPO / "fixtures" / "phrases_es_en.tsv"),
    }
    path = out_dir / "sleep_golden.json"
    path.write_text(json.dumps(sleep, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")

    stress = capture_transcript(
        REPO / "fixtures" / "llm" / "stress_chain.json",
        "What is the stress level of Patient 5 during August 2020?",
        EngineConfig(
            backend="scripted",
            fixture_path="unset",
            data_dir=str(REPO / "data"),
            fixtures_dir=str(REPO / "fixtures"),
            phrase_dictionary=str(REPO / "fixtures" / "phrases_es_en.tsv"),
        ),
    )
    stress["config"] = {
        "data_dir": str(REPO / "data"),
        "fixtures_dir": str(REPO / "fixtures"),
        "phrase_dictionary": str(REPO / "fixtures" / "phrases_es_en.tsv"),
    }
    path = out_dir / "stress_golden.json"
    path.write_text(json.dumps(stress, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
