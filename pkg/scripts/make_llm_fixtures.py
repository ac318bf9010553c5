#!/usr/bin/env python3
"""Author the scripted LLM fixture files under fixtures/llm/.

Each fixture is a JSON array of {match_kind, match_value, response}
records; the first matching entry wins, so more specific matchers come
first. Responses are the canned planner and responder texts the replay
suites assert against.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "llm"

SLEEP_URL = "https://www.mayoclinic.org/healthy-lifestyle/adult-health/in-depth/sleep/art-20048379"

SLEEP_STAGE1 = """Strategy 1: Search the internet for current guidance.
Use the "google_search" tool with a query about tips to improve sleep to find the top website, then use the "extract_text" tool on the returned url to gather the advice from that page.
Pros: up to date, grounded in a reputable page. Cons: needs two tool calls.

Strategy 2: Extract text directly from a known sleep page.
Pros: one tool call. Cons: the "extract_text" tool requires links gathered from other tools, so this violates the tool constraints.

Strategy 3: Answer from general knowledge without tools.
Pros: fastest. Cons: not grounded in any gathered source, so accuracy cannot be checked.

Decision:

I will go with Strategy 1 as it provides the most recent and relevant information available on the internet, which is crucial for improving sleep.

Now, let's proceed with the detailed tool executions for Strategy 1:

1. Use the "google_search" tool to find the top websites with tips to improve sleep.

2. Once we have the top website, we can use the "extract_text" tool to extract the relevant information about improving sleep from the webpage.

Let's start with step 1."""

SLEEP_STAGE2 = """Here is the Python code for the selected strategy:

```python
# Step 1: Use google_search to find the top websites with tips to improve sleep.

search_query = "tips to improve sleep"
search_result = self.execute_task('google_search', [search_query])

# Step 2: Use extract_text to extract the relevant information about improving sleep from the webpage.
url = search_result['url']

sleep_tips_text = self.execute_task('extract_text', [url])
```"""

SLEEP_FINISH = (
    "Final Answer: The gathered Mayo Clinic page already lists the six steps "
    "needed to answer the question."
)

SLEEP_ANSWER = (
    "Improving your sleep usually comes down to six consistent habits, based on "
    "the Mayo Clinic guidance that was gathered. Stick to a sleep schedule, going "
    "to bed and getting up at the same time every day, including weekends. Pay "
    "attention to what you eat and drink, avoiding nicotine, caffeine and alcohol "
    "close to bedtime. Create a restful environment that is cool, dark and quiet. "
    "Limit daytime naps to no more than one hour. Include physical activity in "
    "your daily routine. Finally, manage worries before bedtime, for example with "
    "meditation. If sleepless nights keep recurring, contact your health care "
    f"provider. You can read the full guidance at {SLEEP_URL}."
)

STRESS_STAGE1 = """Strategy 1: Retrieve the raw PPG recordings and estimate stress from them.
Use affect_ppg_get for Patient 5 over August 2020, extract heart rate variability metrics with affect_ppg_analysis, then estimate the stress level with affect_stress_analysis.
Pros: grounded in the patient's own physiological data. Cons: three tool calls.

Strategy 2: Use only the sleep records as a proxy for stress.
Pros: fewer steps. Cons: sleep data does not measure stress directly.

Strategy 3: Search the internet for typical stress levels.
Pros: simple. Cons: not personalized to Patient 5 at all.

Decision:

The best strategy provides both detailed PPG analysis and an estimation of the stress level, which offers a comprehensive view of the patient's health status.

Execution:

1. Use affect_ppg_get tool to retrieve the PPG data for Patient 5 during August 2020.

2. Analyze the PPG data with affect_ppg_analysis tool to obtain the heart rate variability metrics.

3. Use affect_stress_analysis to estimate the stress level based on the obtained metrics."""

STRESS_STAGE2 = """```python
# Step 1: Get PPG data for patient 5 for the entire month of August 2020

ppg_data_result = self.execute_task('affect_ppg_get', ['par_5', '2020-08-01', '2020-08-31'])

# Step 2: Analyze the HRV parameters from the obtained PPG data

hrv_analysis_result = self.execute_task('affect_ppg_analysis', [ppg_data_result])

# Step 3: Estimate the stress level for patient 5 during August 2020 using the HRV analysis results

stress_level_result = self.execute_task('affect_stress_analysis', [hrv_analysis_result])
```"""

STRESS_FINISH = (
    "Final Answer: The stress level for August 2020 has been estimated from the "
    "PPG recordings."
)

# the level digit below is pinned by the deterministic fixture corpus
STRESS_ANSWER = (
    "Based on the analysis of Patient 5's photoplethysmography recordings for "
    "August 2020, the estimated stress level is 0 out of 4, which corresponds to "
    "a very calm state. The heart rate variability extracted from the recordings "
    "shows high overall variability, which points to a relaxed autonomic balance "
    "over the month."
)

TASKS_FINISH = (
    "Final Answer: The session's previous actions already name the tasks that "
    "were used."
)

TASKS_ANSWER = (
    "The tasks used were PpgGet, PpgAnalysis, and StressAnalysis: the PPG "
    "recordings were retrieved first, heart rate variability metrics were "
    "extracted from them, and the stress level was estimated from those metrics."
)

REACT_SEARCH = """Thought: I should search the internet for current sleep guidance first.
Action: google_search
Action Input: ['tips to improve sleep']"""

REACT_EXTRACT = f"""Thought: I found a promising page and should read its text.
Action: extract_text
Action Input: ['{SLEEP_URL}']"""

REACT_FINISH = (
    "Thought: I now know the final answer\n"
    "Final Answer: Follow the gathered Mayo Clinic guidance: stick to a sleep "
    "schedule, watch what you eat and drink, keep a restful environment, limit "
    "naps, stay physically active, and manage worries before bedtime."
)


def entry(value: str, response: str, kind: str = "substring") -> dict:
    return {"match_kind": kind, "match_value": value, "response": response}


FIXTURES = {
    "sleep_advice.json": [
        entry("PreviousActions: ------", SLEEP_FINISH),
        entry("suggest three creative strategies", SLEEP_STAGE1),
        entry("skilled Python programmer", SLEEP_STAGE2),
        entry("===========Thinker:", SLEEP_ANSWER),
    ],
    "stress_chain.json": [
        entry("USER: Name the tasks used", TASKS_FINISH),
        entry("User: Name the tasks used", TASKS_ANSWER),
        entry("PreviousActions: ------", STRESS_FINISH),
        entry("suggest three creative strategies", STRESS_STAGE1),
        entry("skilled Python programmer", STRESS_STAGE2),
        entry("===========Thinker:", STRESS_ANSWER),
    ],
    "react_sleep.json": [
        entry("Observation: Sleep tips: 6 steps", REACT_FINISH),
        entry("Observation: {'url':", REACT_EXTRACT),
        entry("Use the following format", REACT_SEARCH),
        entry("===========Thinker:", SLEEP_ANSWER),
    ],
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, entries in FIXTURES.items():
        path = OUT / name
        path.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(entries)} entries)")


if __name__ == "__main__":
    main()
