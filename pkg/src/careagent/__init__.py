"""Conversational health agent engine.

Answers user queries by planning a sequence of registered tasks with an
LLM, executing them with intermediate results held in a keyed data pipe,
and synthesizing a grounded final response. Ships with a deterministic
scripted LLM backend, a health task library over synthetic fixtures, and
an HTTP chat service.
"""

__version__ = "0.1.0"

from .config import EngineConfig, load_config
from .datapipe import DataPipe
from .engine import Engine
from .tasks import TaskRegistry, TaskSpec

__all__ = [
    "DataPipe",
    "Engine",
    "EngineConfig",
    "TaskRegistry",
    "TaskSpec",
    "load_config",
    "__version__",
]
