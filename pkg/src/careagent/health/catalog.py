"""Demo task catalog: specs plus executable bodies over the fixture corpus.

The google_search / extract_text / affect_ppg_get descriptions are part of
the engine's pinned prompt surface (golden-tested); edit with care.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from ..tasks import TaskBody, TaskRegistry, TaskSpec
from .ppg import analyze_ppg_series
from .records import HealthDataset, analyze_records, HealthDataError
from .stress import classify_stress
from .web import (
    DEFAULT_TEXT_BUDGET,
    FetchClient,
    FixtureFetchClient,
    SearchClient,
    StubSearchClient,
    WebTaskError,
    extract_page_text,
)

_GET_INPUTS = [
    "user ID in string. It can be referred to as user, patient, individual, etc. "
    "Start with 'par_' followed by a number (e.g., 'par_1').",
    "start date of the sleep data in a string with the following format: `%Y-%m-%d.`",
    "end date of the sleep data in a string with the following format: `%Y-%m-%d.` "
    "If there is no end date, the value should be an empty string (i.e., '')",
]

TASK_SPECS: dict[str, TaskSpec] = {
    "google_search": TaskSpec(
        name="google_search",
        chat_name="GoogleSearch",
        description=(
            "Uses google to search the internet for the requested query "
            "and returns the url of the top website."
        ),
        inputs=["It should be a search query."],
        outputs=[
            "It returns a json object containing key: **url**. "
            "For example: {'url': 'http://google.com'}"
        ],
        output_type=False,
    ),
    "extract_text": TaskSpec(
        name="extract_text",
        chat_name="ExtractText",
        description="Extract all the text on the current webpage",
        inputs=[
            "url to extract the text from. It requires links which is gathered "
            "from other tools. Never provide urls on your own."
        ],
        outputs=["An string containing the text of the scraped webpage."],
        output_type=False,
    ),
    "affect_sleep_get": TaskSpec(
        name="affect_sleep_get",
        chat_name="SleepGet",
        description=(
            "Returns the sleep data for a specific patient over a date or a period "
            "(if two dates are provided). This will return the detailed raw data "
            "and store it in the Data Pipe."
        ),
        inputs=_GET_INPUTS,
        outputs=[
            "returns an array of JSON objects which contains the following keys:"
            "\n\n**date**: the night's calendar date."
            "\n\n**total_sleep_min**: total sleep duration in minutes."
            "\n\n**rem_min**: REM sleep duration in minutes."
            "\n\n**deep_min**: deep sleep duration in minutes."
            "\n\n**light_min**: light sleep duration in minutes."
            "\n\n**efficiency**: sleep efficiency as a fraction between 0 and 1."
        ],
        output_type=True,
    ),
    "affect_activity_get": TaskSpec(
        name="affect_activity_get",
        chat_name="ActivityGet",
        description=(
            "Returns the physical activity data for a specific patient over a date "
            "or a period (if two dates are provided). This will return the detailed "
            "raw data and store it in the Data Pipe."
        ),
        inputs=_GET_INPUTS,
        outputs=[
            "returns an array of JSON objects which contains the following keys:"
            "\n\n**date**: the calendar date."
            "\n\n**steps**: the step count for that day."
            "\n\n**active_min**: active minutes for that day."
        ],
        output_type=True,
    ),
    "affect_analysis": TaskSpec(
        name="affect_analysis",
        chat_name="AffectAnalysis",
        description=(
            "Performs basic statistical analysis over a list of health records, "
            "such as computing averages, totals, or trends. Use this to summarize "
            "data returned by the sleep or activity tasks."
        ),
        inputs=[
            "datapipe key to the list of records gathered from other tasks. "
            "Only put the variable as the input.",
            "analysis mode in string. It should be one of: 'average', 'sum', or 'trend'.",
        ],
        outputs=[
            "It returns a json object with keys: **mode**, **count**, and "
            "**statistics** mapping each numeric field to the computed value."
        ],
        output_type=False,
    ),
    "affect_ppg_get": TaskSpec(
        name="affect_ppg_get",
        chat_name="PpgGet",
        description=(
            "Returns the ppg data for a specific patient over a date or a period "
            "(if two dates are provided). This will return the detailed raw data "
            "and store it in the Data Pipe."
        ),
        inputs=_GET_INPUTS,
        outputs=[
            "returns an array of JSON objects which contains the following keys:"
            "\n\n**date (in milliseconds)**: epoch format"
            "\n\n**ppg**: is the ppg value."
            "\n\n**hr (in beats per minute)**: is the heart rate of the patient."
        ],
        output_type=True,
    ),
    "affect_ppg_analysis": TaskSpec(
        name="affect_ppg_analysis",
        chat_name="PpgAnalysis",
        description=(
            "Performs ppg signal processing on raw ppg data to extract heart rate "
            "variability metrics such as rmssd, sdnn, and frequency band powers."
        ),
        inputs=[
            "datapipe key to the ppg data gathered from the affect_ppg_get task. "
            "Only put the variable as the input."
        ],
        outputs=[
            "It returns a json object containing keys: **mean_hr**, **sdnn**, "
            "**rmssd**, **pnn50**, **mean_nn**, **lf**, **hf**, and **lf_hf**."
        ],
        output_type=True,
    ),
    "affect_stress_analysis": TaskSpec(
        name="affect_stress_analysis",
        chat_name="StressAnalysis",
        description=(
            "Estimates the stress level from heart rate variability metrics. "
            "The level ranges from 0 (very calm) to 4 (high stress)."
        ),
        inputs=[
            "datapipe key to the heart rate variability metrics gathered from the "
            "affect_ppg_analysis task. Only put the variable as the input."
        ],
        outputs=[
            "It returns a json object containing keys: **level** (an integer stress "
            "level from 0 to 4) and **rationale** (a short explanation)."
        ],
        output_type=False,
    ),
}


def _require_list(value: Any, what: str) -> list:
    if not isinstance(value, list):
        raise HealthDataError(f"{what} input must be a list of records, got {type(value).__name__}")
    return value


def _require_dict(value: Any, what: str) -> dict:
    if not isinstance(value, dict):
        raise HealthDataError(f"{what} input must be a json object, got {type(value).__name__}")
    return value


def builtin_bodies(
    dataset: HealthDataset,
    search_client: SearchClient,
    fetch_client: FetchClient,
    text_budget: int = DEFAULT_TEXT_BUDGET,
) -> dict[str, TaskBody]:
    def google_search(args: list[Any]) -> dict[str, str]:
        query = str(args[0])
        if not query.strip():
            raise WebTaskError("search query must be non-empty")
        return {"url": search_client.search(query)}

    def extract_text(args: list[Any]) -> str:
        url = str(args[0])
        if not url.strip():
            raise WebTaskError("url must be non-empty")
        return extract_page_text(url, fetch_client, budget=text_budget)

    def sleep_get(args: list[Any]) -> list[dict]:
        return dataset.sleep(str(args[0]), str(args[1]), str(args[2]))

    def activity_get(args: list[Any]) -> list[dict]:
        return dataset.activity(str(args[0]), str(args[1]), str(args[2]))

    def ppg_get(args: list[Any]) -> list[dict]:
        return dataset.ppg(str(args[0]), str(args[1]), str(args[2]))

    def analysis(args: list[Any]) -> dict:
        records = _require_list(args[0], "records")
        return analyze_records(records, str(args[1]))

    def ppg_analysis(args: list[Any]) -> dict:
        samples = _require_list(args[0], "ppg data")
        return analyze_ppg_series(samples).payload()

    def stress_analysis(args: list[Any]) -> dict:
        features = _require_dict(args[0], "hrv metrics")
        return classify_stress(features)

    return {
        "google_search": google_search,
        "extract_text": extract_text,
        "affect_sleep_get": sleep_get,
        "affect_activity_get": activity_get,
        "affect_analysis": analysis,
        "affect_ppg_get": ppg_get,
        "affect_ppg_analysis": ppg_analysis,
        "affect_stress_analysis": stress_analysis,
    }


def build_demo_registry(
    data_dir: str | Path,
    fixtures_dir: str | Path,
    search_client: SearchClient | None = None,
    fetch_client: FetchClient | None = None,
    enabled: list[str] | None = None,
    text_budget: int = DEFAULT_TEXT_BUDGET,
) -> TaskRegistry:
    """Registry with the demo task library bound to the fixture corpus."""
    fixtures_dir = Path(fixtures_dir)
    dataset = HealthDataset(data_dir)
    if search_client is None:
        search_client = StubSearchClient(fixtures_dir / "search.map")
    if fetch_client is None:
        fetch_client = FixtureFetchClient(fixtures_dir / "www")
    bodies = builtin_bodies(dataset, search_client, fetch_client, text_budget)
    registry = TaskRegistry()
    for name in enabled if enabled is not None else list(TASK_SPECS):
        spec = TASK_SPECS.get(name)
        if spec is None:
            raise HealthDataError(f"unknown task name {name!r} in enabled task list")
        registry.register(spec, bodies[name])
    return registry
