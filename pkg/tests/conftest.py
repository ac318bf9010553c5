from pathlib import Path

import pytest

from careagent.config import EngineConfig
from careagent.datapipe import DataPipe
from careagent.health import build_demo_registry
from careagent.health.catalog import TASK_SPECS

REPO = Path(__file__).resolve().parent.parent
DATA_DIR = REPO / "data"
FIXTURES_DIR = REPO / "fixtures"
GOLDENS = Path(__file__).resolve().parent / "goldens"

SLEEP_URL = "https://www.mayoclinic.org/healthy-lifestyle/adult-health/in-depth/sleep/art-20048379"

# canonical generated-plan samples: web search chain and the stress chain
SLEEP_PLAN_CODE = """# Step 1: Use google_search to find the top websites with tips to improve sleep.

search_query = "tips to improve sleep"
search_result = self.execute_task('google_search', [search_query])

# Step 2: Use extract_text to extract the relevant information about improving sleep from the webpage.
url = search_result['url']

sleep_tips_text = self.execute_task('extract_text', [url])"""

STRESS_PLAN_CODE = """# Step 1: Get PPG data for patient 5 for the entire month of August 2020

ppg_data_result = self.execute_task('affect_ppg_get', ['par_5', '2020-08-01', '2020-08-31'])

# Step 2: Analyze the HRV parameters from the obtained PPG data

hrv_analysis_result = self.execute_task('affect_ppg_analysis', [ppg_data_result])

# Step 3: Estimate the stress level for patient 5 during August 2020 using the HRV analysis results

stress_level_result = self.execute_task('affect_stress_analysis', [hrv_analysis_result])"""


@pytest.fixture()
def pipe() -> DataPipe:
    return DataPipe()


@pytest.fixture(scope="session")
def full_registry():
    return build_demo_registry(DATA_DIR, FIXTURES_DIR)


@pytest.fixture(scope="session")
def web_registry():
    return build_demo_registry(DATA_DIR, FIXTURES_DIR, enabled=["google_search", "extract_text"])


def sleep_config(**overrides) -> EngineConfig:
    values = dict(
        backend="scripted",
        fixture_path=str(FIXTURES_DIR / "llm" / "sleep_advice.json"),
        enabled_tasks=["google_search", "extract_text"],
        data_dir=str(DATA_DIR),
        fixtures_dir=str(FIXTURES_DIR),
        phrase_dictionary=str(FIXTURES_DIR / "phrases_es_en.tsv"),
    )
    values.update(overrides)
    return EngineConfig(**values)


def stress_config(**overrides) -> EngineConfig:
    values = dict(
        backend="scripted",
        fixture_path=str(FIXTURES_DIR / "llm" / "stress_chain.json"),
        data_dir=str(DATA_DIR),
        fixtures_dir=str(FIXTURES_DIR),
        phrase_dictionary=str(FIXTURES_DIR / "phrases_es_en.tsv"),
    )
    values.update(overrides)
    return EngineConfig(**values)


def golden(name: str) -> str:
    return (GOLDENS / name).read_text(encoding="utf-8")


def all_task_specs():
    return list(TASK_SPECS.values())
