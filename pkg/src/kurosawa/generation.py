"""Generation orchestration over a pluggable completion backend.

The live client talks to an HTTP completion endpoint; the bundled mock is a
pure function of (prompt, seed) over a fixture bank, so every pipeline test
is reproducible.  Model output is post-processed leniently: structural
problems land in a ValidationReport instead of raising.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, runtime_checkable

from .errors import (
    BackendRejectedError,
    BackendTimeoutError,
    BackendUnavailableError,
    ContextOverflowError,
    KurosawaError,
    ValidationReport,
    issue,
)
from .model import PlotActs, Scene, word_count
from .plots import (
    PLOT_WORDS,
    PROMPT_SEPARATOR,
    SCENE_WORDS,
    SHORT_STORYLINE_WORDS,
    STOP_SEQUENCE,
    GenerationProfile,
    build_prompt,
    parse_acts,
    storyline_warnings,
    validate_annotated_plot,
)
from .screenplay import decode_tagged

__all__ = [
    "DEFAULT_CONTEXT_LIMIT",
    "GenerationConfig",
    "GenerationResult",
    "CompletionBackend",
    "HttpBackend",
    "MockBackend",
    "PlotGeneration",
    "SceneGeneration",
    "complete",
    "estimate_tokens",
    "generate_plot",
    "generate_scene",
    "mock_complete",
]

# Sampling defaults; every other reference goes through GenerationConfig.
DEFAULT_TEMPERATURE = 0.7
DEFAULT_TOP_P = 1.0
DEFAULT_FREQUENCY_PENALTY = 0.1
DEFAULT_PRESENCE_PENALTY = 0.1
DEFAULT_MAX_TOKENS = 900

DEFAULT_CONTEXT_LIMIT = 2048

RETRY_ATTEMPTS = 3
RETRY_BASE_DELAY = 0.5

ENV_BACKEND_URL = "KUROSAWA_BACKEND_URL"
ENV_BACKEND_TOKEN = "KUROSAWA_BACKEND_TOKEN"
ENV_MODEL_REF = "KUROSAWA_MODEL_REF"

# test seam: monkeypatch to skip real backoff sleeps
_sleep = time.sleep


@dataclass(frozen=True)
class GenerationConfig:
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P
    frequency_penalty: float = DEFAULT_FREQUENCY_PENALTY
    presence_penalty: float = DEFAULT_PRESENCE_PENALTY
    max_tokens: int = DEFAULT_MAX_TOKENS
    stop: tuple[str, ...] = (STOP_SEQUENCE,)
    model_ref: str = ""

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not 0 < self.top_p <= 1:
            raise ValueError("top_p must be in (0, 1]")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        if not isinstance(self.stop, tuple):
            object.__setattr__(self, "stop", tuple(self.stop))

    def to_dict(self) -> dict:
        return {
            "temperature": self.temperature,
            "top_p": self.top_p,
            "frequency_penalty": self.frequency_penalty,
            "presence_penalty": self.presence_penalty,
            "max_tokens": self.max_tokens,
            "stop": list(self.stop),
            "model_ref": self.model_ref,
        }


@dataclass(frozen=True)
class GenerationResult:
    text: str
    backend_id: str
    elapsed_ms: int
    token_logprobs: tuple[float, ...] | None = None
    truncated: bool = False

    def __post_init__(self) -> None:
        if self.elapsed_ms < 0:
            raise ValueError("elapsed_ms must be non-negative")
        if self.token_logprobs is not None:
            if not isinstance(self.token_logprobs, tuple):
                object.__setattr__(self, "token_logprobs", tuple(self.token_logprobs))
            for lp in self.token_logprobs:
                if lp > 0:
                    raise ValueError(f"log-probability {lp} is positive")

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "backend_id": self.backend_id,
            "elapsed_ms": self.elapsed_ms,
            "token_logprobs": list(self.token_logprobs) if self.token_logprobs else None,
            "truncated": self.truncated,
        }


@runtime_checkable
class CompletionBackend(Protocol):
    """Anything that turns a prompt into raw completion text."""

    identity: str
    supports_logprobs: bool
    context_limit: int

    def complete_raw(self, prompt: str, config: GenerationConfig) -> GenerationResult:
        ...


def estimate_tokens(text: str) -> int:
    """Crude but conservative: four characters per token, rounded up."""
    return math.ceil(len(text) / 4)


def complete(
    backend: CompletionBackend,
    prompt: str,
    config: GenerationConfig | None = None,
) -> GenerationResult:
    """Context-checked, retried, stop-truncated completion call.

    Transport failures (unavailable, timeout) retry with exponential backoff;
    a rejection is final.  Output is cut at the first stop sequence; when no
    stop appears and the completion spans max_tokens the result is flagged
    truncated.
    """
    if not prompt.strip():
        raise ValueError("prompt must be non-empty")
    config = config or GenerationConfig()
    estimated = estimate_tokens(prompt)
    limit = getattr(backend, "context_limit", DEFAULT_CONTEXT_LIMIT)
    if estimated + config.max_tokens > limit:
        raise ContextOverflowError(estimated + config.max_tokens, limit)

    attempt = 0
    while True:
        attempt += 1
        try:
            raw = backend.complete_raw(prompt, config)
            break
        except (BackendUnavailableError, BackendTimeoutError):
            if attempt >= RETRY_ATTEMPTS:
                raise
            _sleep(RETRY_BASE_DELAY * 2 ** (attempt - 1))

    text = raw.text
    cut = min((i for i in (text.find(s) for s in config.stop) if i != -1), default=-1)
    stopped = cut != -1
    if stopped:
        text = text[:cut]
    if raw.token_logprobs is not None:
        completion_tokens = len(raw.token_logprobs)
    else:
        completion_tokens = estimate_tokens(raw.text)
    truncated = not stopped and completion_tokens >= config.max_tokens
    if text == raw.text and truncated == raw.truncated:
        return raw
    return GenerationResult(
        text=text,
        backend_id=raw.backend_id,
        elapsed_ms=raw.elapsed_ms,
        token_logprobs=raw.token_logprobs,
        truncated=truncated,
    )


# ---------------------------------------------------------------------------
# mock backend

MOCK_LOGPROB = math.log(0.25)
_BANK_DIR = Path(__file__).parent / "mock_bank"


@dataclass(frozen=True)
class BankEntry:
    name: str
    kind: str  # "plot" | "scene" | "malformed"
    text: str


def _load_bank(bank_dir: Path) -> tuple[BankEntry, ...]:
    index = json.loads((bank_dir / "index.json").read_text(encoding="utf-8"))
    entries = []
    for item in index["fixtures"]:
        text = (bank_dir / item["file"]).read_text(encoding="utf-8")
        entries.append(BankEntry(name=item["name"], kind=item["kind"], text=text))
    if not entries:
        raise ValueError(f"fixture bank at {bank_dir} is empty")
    return tuple(entries)


class MockBackend:
    """Deterministic fixture-bank backend.

    Selection hashes (prompt, seed); ``pin`` forces a named fixture so tests
    can exercise a specific output shape.  Synthetic log-probabilities are a
    uniform ln(1/4) per whitespace token, so perplexity is exactly 4.
    """

    identity = "mock"
    supports_logprobs = True

    def __init__(
        self,
        seed: int = 0,
        pin: str | None = None,
        bank_dir: str | Path | None = None,
        context_limit: int = DEFAULT_CONTEXT_LIMIT,
    ):
        self.seed = seed
        self.pin = pin
        self.context_limit = context_limit
        self.bank = _load_bank(Path(bank_dir) if bank_dir else _BANK_DIR)

    def fixture_names(self) -> list[str]:
        return [entry.name for entry in self.bank]

    def _select(self, prompt: str) -> BankEntry:
        if self.pin is not None:
            for entry in self.bank:
                if entry.name == self.pin:
                    return entry
            raise KeyError(f"no fixture named {self.pin!r}")
        digest = hashlib.sha256(f"{prompt}\x00{self.seed}".encode()).digest()
        return self.bank[int.from_bytes(digest[:8], "big") % len(self.bank)]

    def complete_raw(self, prompt: str, config: GenerationConfig) -> GenerationResult:
        entry = self._select(prompt)
        n_tokens = max(1, len(entry.text.split()))
        return GenerationResult(
            text=entry.text,
            backend_id=f"{self.identity}:{entry.name}",
            elapsed_ms=0,
            token_logprobs=(MOCK_LOGPROB,) * n_tokens,
        )

    def ping(self) -> bool:
        return True


def mock_complete(prompt: str, seed: int = 0) -> GenerationResult:
    return MockBackend(seed=seed).complete_raw(prompt, GenerationConfig())


# ---------------------------------------------------------------------------
# live backend

class HttpBackend:
    """Thin client for an HTTP completion endpoint.

    Accepts either a flat ``{"text": ..., "token_logprobs": [...]}`` response
    or the conventional ``{"choices": [{"text": ..., "logprobs": {...}}]}``
    shape.  4xx responses are rejections (not retried); 5xx and transport
    errors surface as unavailability, which the orchestrator retries.
    """

    identity = "http"
    supports_logprobs = True

    def __init__(
        self,
        url: str,
        token: str = "",
        model_ref: str = "",
        timeout_s: float = 60.0,
        context_limit: int = DEFAULT_CONTEXT_LIMIT,
    ):
        if not url:
            raise ValueError("backend url must be non-empty")
        self.url = url
        self.token = token
        self.model_ref = model_ref
        self.timeout_s = timeout_s
        self.context_limit = context_limit

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "HttpBackend":
        env = env if env is not None else dict(os.environ)
        url = env.get(ENV_BACKEND_URL, "")
        if not url:
            raise ValueError(f"{ENV_BACKEND_URL} is not set")
        return cls(
            url=url,
            token=env.get(ENV_BACKEND_TOKEN, ""),
            model_ref=env.get(ENV_MODEL_REF, ""),
        )

    def _payload(self, prompt: str, config: GenerationConfig) -> dict:
        return {
            "model": config.model_ref or self.model_ref,
            "prompt": prompt,
            "temperature": config.temperature,
            "top_p": config.top_p,
            "frequency_penalty": config.frequency_penalty,
            "presence_penalty": config.presence_penalty,
            "max_tokens": config.max_tokens,
            "stop": list(config.stop),
            "logprobs": True,
        }

    def complete_raw(self, prompt: str, config: GenerationConfig) -> GenerationResult:
        import requests

        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        started = time.monotonic()
        try:
            response = requests.post(
                self.url,
                json=self._payload(prompt, config),
                headers=headers,
                timeout=self.timeout_s,
            )
        except requests.Timeout as exc:
            raise BackendTimeoutError(f"no response within {self.timeout_s}s") from exc
        except requests.RequestException as exc:
            raise BackendUnavailableError(str(exc)) from exc
        elapsed_ms = int((time.monotonic() - started) * 1000)

        if response.status_code >= 500:
            raise BackendUnavailableError(f"server error {response.status_code}")
        if response.status_code >= 400:
            raise BackendRejectedError(response.status_code, response.text[:500])

        try:
            body = response.json()
        except ValueError as exc:
            raise BackendRejectedError(response.status_code, "non-JSON response") from exc
        text, logprobs = self._extract(body)
        return GenerationResult(
            text=text,
            backend_id=f"{self.identity}:{self.url}",
            elapsed_ms=elapsed_ms,
            token_logprobs=tuple(logprobs) if logprobs is not None else None,
        )

    def ping(self) -> bool:
        import requests

        try:
            requests.head(self.url, timeout=2)
        except requests.RequestException:
            return False
        return True

    @staticmethod
    def _extract(body: dict) -> tuple[str, list[float] | None]:
        if "choices" in body:
            try:
                choice = body["choices"][0]
                text = choice["text"]
            except (IndexError, KeyError, TypeError):
                raise BackendRejectedError(200, "malformed completion payload")
            logprobs = (choice.get("logprobs") or {}).get("token_logprobs")
            return text, logprobs
        if "text" in body:
            return body["text"], body.get("token_logprobs")
        raise BackendRejectedError(200, "response carries no completion text")


# ---------------------------------------------------------------------------
# pipeline entry points

@dataclass
class PlotGeneration:
    raw: GenerationResult
    acts: PlotActs | None
    report: ValidationReport

    def to_dict(self) -> dict:
        return {
            "raw": self.raw.to_dict(),
            "acts": self.acts.to_dict() if self.acts else None,
            "report": self.report.to_dict(),
        }


@dataclass
class SceneGeneration:
    raw: GenerationResult
    scene: Scene | None
    report: ValidationReport

    def to_dict(self) -> dict:
        return {
            "raw": self.raw.to_dict(),
            "scene": self.scene.to_dict() if self.scene else None,
            "report": self.report.to_dict(),
        }


def generate_plot(
    storyline: str,
    genres: list[str],
    profile: GenerationProfile,
    backend: CompletionBackend,
    config: GenerationConfig | None = None,
) -> PlotGeneration:
    """Prompt, complete, and structure a plot; problems become report entries.

    Annotated profiles parse acts leniently; profile O never has acts and
    only the 600-800 word band is checked.
    """
    report = ValidationReport()
    for warning in storyline_warnings(storyline, profile.storyline_kind):
        report.add_warning(warning)
    prompt = build_prompt(storyline, genres, profile)
    raw = complete(backend, prompt, config)

    acts: PlotActs | None = None
    if profile.annotated_output:
        plot_report = validate_annotated_plot(raw.text)
        report.extend(plot_report)
        if plot_report.ok:
            acts = parse_acts(raw.text)
    else:
        count = word_count(raw.text)
        lo, hi = PLOT_WORDS
        if raw.text.strip() and not lo <= count <= hi:
            report.add_warning(issue(
                "LengthOutOfRange",
                f"plot is {count} words, expected {lo}-{hi}",
                count=count, min=lo, max=hi,
            ))
        if not raw.text.strip():
            report.add_error(issue("EmptyOutput", "backend returned no text"))
    if raw.truncated:
        report.add_warning(issue("Truncated", "output hit the max token limit"))
    return PlotGeneration(raw=raw, acts=acts, report=report)


def generate_scene(
    description: str,
    backend: CompletionBackend,
    config: GenerationConfig | None = None,
) -> SceneGeneration:
    """Describe, complete, and decode a tagged scene leniently."""
    if not description.strip():
        raise ValueError("description must be non-empty")
    report = ValidationReport()
    lo, hi = SHORT_STORYLINE_WORDS
    count = word_count(description)
    if not lo <= count <= hi:
        report.add_warning(issue(
            "LengthViolation",
            f"description is {count} words, expected {lo}-{hi}",
            count=count, min=lo, max=hi, what="description",
        ))
    raw = complete(backend, description + PROMPT_SEPARATOR, config)

    scene: Scene | None = None
    try:
        decoded = decode_tagged(raw.text, strict=False)
    except KurosawaError as exc:
        report.add_error(exc.as_issue())
    else:
        scene = decoded.scene
        for warning in decoded.warnings:
            report.add_warning(warning)

    # band check counts scene content, not tag markup
    if scene is not None and scene.elements:
        count = word_count(" ".join(el.text for el in scene.elements))
    else:
        count = word_count(raw.text)
    lo, hi = SCENE_WORDS
    if raw.text.strip() and not lo <= count <= hi:
        report.add_warning(issue(
            "LengthOutOfRange",
            f"scene is {count} words, expected {lo}-{hi}",
            count=count, min=lo, max=hi,
        ))
    if raw.truncated:
        report.add_warning(issue("Truncated", "output hit the max token limit"))
    return SceneGeneration(raw=raw, scene=scene, report=report)
