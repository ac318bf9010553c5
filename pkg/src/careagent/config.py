"""Engine configuration: file loading, defaults, and validation.

Config files are YAML (or JSON) mirroring the EngineConfig fields; the
backend credentials can be overridden through CAREAGENT_API_KEY and
CAREAGENT_BASE_URL so secrets stay out of checked-in files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from .errors import AgentError

ENV_API_KEY = "CAREAGENT_API_KEY"
ENV_BASE_URL = "CAREAGENT_BASE_URL"


class ConfigError(AgentError):
    pass


@dataclass
class LlmParams:
    model: str = "scripted"
    temperature: float = 0.0
    max_tokens: int = 2048


@dataclass
class EngineConfig:
    strategy: str = "tot"            # tot | react
    max_iterations: int = 3
    lang_mode: str = "translate"     # retain | translate
    enabled_tasks: list[str] | None = None
    planner_llm: LlmParams = field(default_factory=lambda: LlmParams(temperature=0.0))
    responder_llm: LlmParams = field(default_factory=lambda: LlmParams(temperature=0.7))
    backend: str = "scripted"        # scripted | remote
    fixture_path: str | None = None
    remote_base_url: str | None = None
    remote_api_key: str = ""
    response_prefix: str = ""
    data_dir: str = "data"
    fixtures_dir: str = "fixtures"
    persist_dir: str | None = None
    languages: list[str] = field(default_factory=lambda: ["en", "es"])
    phrase_dictionary: str | None = None
    translation_endpoint: str | None = None
    api_token: str | None = None
    text_budget: int = 8000
    host: str = "127.0.0.1"
    port: int = 8080

    def validate(self) -> None:
        if self.strategy not in ("tot", "react"):
            raise ConfigError(f"strategy must be 'tot' or 'react', got {self.strategy!r}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if self.lang_mode not in ("retain", "translate"):
            raise ConfigError(f"lang_mode must be 'retain' or 'translate', got {self.lang_mode!r}")
        if self.backend not in ("scripted", "remote"):
            raise ConfigError(f"backend must be 'scripted' or 'remote', got {self.backend!r}")
        if self.backend == "scripted" and not self.fixture_path:
            raise ConfigError("scripted backend needs fixture_path")
        if self.backend == "remote" and not self.remote_base_url:
            raise ConfigError("remote backend needs remote_base_url")
        if "en" not in self.languages:
            raise ConfigError("languages must include 'en'")

    def resolve_paths(self, base_dir: str | Path) -> None:
        """Make relative paths absolute against the config file's directory."""
        base = Path(base_dir)
        for name in ("data_dir", "fixtures_dir", "persist_dir", "fixture_path", "phrase_dictionary"):
            value = getattr(self, name)
            if value is not None and not Path(value).is_absolute():
                setattr(self, name, str((base / value).resolve()))


def _llm_params(raw: Any, default_temperature: float) -> LlmParams:
    if raw is None:
        return LlmParams(temperature=default_temperature)
    return LlmParams(
        model=raw.get("model", "scripted"),
        temperature=raw.get("temperature", default_temperature),
        max_tokens=raw.get("max_tokens", 2048),
    )


def load_config(path: str | Path) -> EngineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    text = path.read_text(encoding="utf-8")
    raw = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    config = config_from_dict(raw)
    config.resolve_paths(path.parent)
    config.validate()
    return config


def config_from_dict(raw: dict[str, Any]) -> EngineConfig:
    known = {f.name for f in fields(EngineConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    values = dict(raw)
    values["planner_llm"] = _llm_params(raw.get("planner_llm"), 0.0)
    values["responder_llm"] = _llm_params(raw.get("responder_llm"), 0.7)
    config = EngineConfig(**values)
    if os.environ.get(ENV_API_KEY):
        config.remote_api_key = os.environ[ENV_API_KEY]
    if os.environ.get(ENV_BASE_URL):
        config.remote_base_url = os.environ[ENV_BASE_URL]
    return config
