// Server payloads captured from a scripted engine run; shapes match the
// live HTTP API. The stress-chain turn used three tasks in order.

export const fixtures = {
  "respond_stress": {
    "session_id": "326800fd-553b-4a85-8cd3-00ce875a21c2",
    "answer": "Based on the analysis of Patient 5's photoplethysmography recordings for August 2020, the estimated stress level is 0 out of 4, which corresponds to a very calm state. The heart rate variability extracted from the recordings shows high overall variability, which points to a relaxed autonomic balance over the month.",
    "turn_id": 1,
    "tasks_used": [
      "PpgGet",
      "PpgAnalysis",
      "StressAnalysis"
    ],
    "language": "en",
    "error": null
  },
  "respond_followup": {
    "session_id": "326800fd-553b-4a85-8cd3-00ce875a21c2",
    "answer": "The tasks used were PpgGet, PpgAnalysis, and StressAnalysis: the PPG recordings were retrieved first, heart rate variability metrics were extracted from them, and the stress level was estimated from those metrics.",
    "turn_id": 2,
    "tasks_used": [],
    "language": "en",
    "error": null
  },
  "trace_stress": {
    "records": [
      {
        "task_name": "affect_ppg_get",
        "rendered_inputs": [
          "par_5",
          "2020-08-01",
          "2020-08-31"
        ],
        "rendered_output": "datapipe:e3e70682-c209-4cac-a29f-6fbed82c07cd",
        "step_index": 0,
        "duration": 0.08932,
        "failed": false
      },
      {
        "task_name": "affect_ppg_analysis",
        "rendered_inputs": [
          "datapipe:e3e70682-c209-4cac-a29f-6fbed82c07cd"
        ],
        "rendered_output": "datapipe:f728b4fa-4248-4e3a-8a5d-2f346baa9455",
        "step_index": 1,
        "duration": 0.017965,
        "failed": false
      },
      {
        "task_name": "affect_stress_analysis",
        "rendered_inputs": [
          "datapipe:f728b4fa-4248-4e3a-8a5d-2f346baa9455"
        ],
        "rendered_output": "{'level': 0, 'rationale': 'stress level 0 (very calm); dominant factor: sdnn of 79.70 lowers the score (z=+7.10)'}",
        "step_index": 2,
        "duration": 1.9e-05,
        "failed": false
      }
    ],
    "tasks_used": [
      "PpgGet",
      "PpgAnalysis",
      "StressAnalysis"
    ],
    "language": "en",
    "query": "What is the stress level of Patient 5 during August 2020?",
    "answer": "Based on the analysis of Patient 5's photoplethysmography recordings for August 2020, the estimated stress level is 0 out of 4, which corresponds to a very calm state. The heart rate variability extracted from the recordings shows high overall variability, which points to a relaxed autonomic balance over the month."
  },
  "history": {
    "session_id": "326800fd-553b-4a85-8cd3-00ce875a21c2",
    "turns": [
      {
        "turn_id": 1,
        "query": "What is the stress level of Patient 5 during August 2020?",
        "answer": "Based on the analysis of Patient 5's photoplethysmography recordings for August 2020, the estimated stress level is 0 out of 4, which corresponds to a very calm state. The heart rate variability extracted from the recordings shows high overall variability, which points to a relaxed autonomic balance over the month.",
        "tasks_used": [
          "PpgGet",
          "PpgAnalysis",
          "StressAnalysis"
        ],
        "language": "en"
      },
      {
        "turn_id": 2,
        "query": "Name the tasks used",
        "answer": "The tasks used were PpgGet, PpgAnalysis, and StressAnalysis: the PPG recordings were retrieved first, heart rate variability metrics were extracted from them, and the stress level was estimated from those metrics.",
        "tasks_used": [],
        "language": "en"
      }
    ]
  },
  "config": {
    "languages": [
      "en",
      "es"
    ],
    "strategy": "tot",
    "lang_mode": "translate",
    "max_iterations": 3
  }
} as const;
