"""Service configuration: defaults, optional YAML file, environment overrides.

Precedence is defaults < file < environment, so a deployment can pin the data
directory or backend without touching the config file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from ..generation import (
    ENV_BACKEND_TOKEN,
    ENV_BACKEND_URL,
    ENV_MODEL_REF,
    CompletionBackend,
    GenerationConfig,
    HttpBackend,
    MockBackend,
)
from ..screenplay import DEFAULT_LAYOUT, LayoutConfig

__all__ = ["ServiceConfig", "load_config", "make_backend"]

ENV_DATA_DIR = "KUROSAWA_DATA_DIR"
ENV_LISTEN = "KUROSAWA_LISTEN"
ENV_BACKEND_KIND = "KUROSAWA_BACKEND"
ENV_CORS_ORIGIN = "KUROSAWA_CORS_ORIGIN"


@dataclass(frozen=True)
class ServiceConfig:
    listen_address: str = "127.0.0.1:8787"
    data_dir: Path = Path("kurosawa-data")
    backend_kind: str = "mock"  # "mock" | "live"
    backend_url: str = ""
    backend_token: str = ""
    model_ref: str = ""
    mock_seed: int = 0
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    layout: LayoutConfig = DEFAULT_LAYOUT
    cors_origin: str = "*"

    def __post_init__(self) -> None:
        if self.backend_kind not in ("mock", "live"):
            raise ValueError(f"backend must be 'mock' or 'live', got {self.backend_kind!r}")
        if not isinstance(self.data_dir, Path):
            object.__setattr__(self, "data_dir", Path(self.data_dir))

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])


def _config_from_mapping(doc: dict) -> ServiceConfig:
    known = {
        "listen_address", "data_dir", "backend_kind", "backend_url",
        "backend_token", "model_ref", "mock_seed", "cors_origin",
    }
    unknown = set(doc) - known - {"generation", "layout"}
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    kwargs = {k: doc[k] for k in known if k in doc}
    if "generation" in doc:
        kwargs["generation"] = GenerationConfig(**doc["generation"])
    if "layout" in doc:
        kwargs["layout"] = LayoutConfig(**doc["layout"])
    return ServiceConfig(**kwargs)


def load_config(
    path: str | Path | None = None,
    env: dict[str, str] | None = None,
) -> ServiceConfig:
    """Build the effective config; environment values win over file values."""
    env = env if env is not None else dict(os.environ)
    if path is not None:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(doc, dict):
            raise ValueError("config file must hold a mapping")
        config = _config_from_mapping(doc)
    else:
        config = ServiceConfig()

    overrides: dict = {}
    if env.get(ENV_DATA_DIR):
        overrides["data_dir"] = Path(env[ENV_DATA_DIR])
    if env.get(ENV_LISTEN):
        overrides["listen_address"] = env[ENV_LISTEN]
    if env.get(ENV_BACKEND_KIND):
        overrides["backend_kind"] = env[ENV_BACKEND_KIND]
    if env.get(ENV_BACKEND_URL):
        overrides["backend_url"] = env[ENV_BACKEND_URL]
    if env.get(ENV_BACKEND_TOKEN):
        overrides["backend_token"] = env[ENV_BACKEND_TOKEN]
    if env.get(ENV_MODEL_REF):
        overrides["model_ref"] = env[ENV_MODEL_REF]
    if env.get(ENV_CORS_ORIGIN):
        overrides["cors_origin"] = env[ENV_CORS_ORIGIN]
    if overrides:
        config = replace(config, **overrides)
    return config


def make_backend(config: ServiceConfig) -> CompletionBackend:
    if config.backend_kind == "mock":
        return MockBackend(seed=config.mock_seed)
    return HttpBackend(
        url=config.backend_url,
        token=config.backend_token,
        model_ref=config.model_ref,
    )
