"""Health task standard library: record retrieval, statistics, the
PPG -> HRV -> stress chain, and internet search/extraction, all runnable
offline against the bundled synthetic fixture corpus."""

from .catalog import build_demo_registry, builtin_bodies
from .ppg import HrvFeatures, analyze_ppg_series, detect_peaks, time_domain_features
from .records import HealthDataset
from .stress import classify_stress
from .web import FixtureFetchClient, HttpFetchClient, StubSearchClient

__all__ = [
    "HealthDataset",
    "HrvFeatures",
    "analyze_ppg_series",
    "detect_peaks",
    "time_domain_features",
    "classify_stress",
    "StubSearchClient",
    "FixtureFetchClient",
    "HttpFetchClient",
    "build_demo_registry",
    "builtin_bodies",
]
