"""Answer generation backends: deterministic mocks and a remote chat API.

The mocks exist so the whole pipeline can be evaluated without a model:
`oracle` answers correctly exactly when a gold snippet made it into the
context, `positional` only when one sits early enough, and `fixed` always
returns the same letter. All of them are pure functions of their inputs.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

import requests

from ..errors import BackendError, BackendExhaustedError, ConfigError
from .templates import RenderedPrompt

RETRY_DELAYS = (1.0, 4.0, 16.0)
RETRIABLE_STATUSES = {408, 409, 429, 500, 502, 503, 504}


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.0
    max_tokens: int = 1024
    context_token_budget: int = 8192

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ConfigError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise ConfigError(f"max_tokens must be >= 1, got {self.max_tokens}")
        if self.context_token_budget < 1:
            raise ConfigError(
                f"context_token_budget must be >= 1, got {self.context_token_budget}"
            )


@dataclass(frozen=True)
class ItemContext:
    """Per-item facts the deterministic mocks condition on."""

    answer: str
    option_letters: tuple[str, ...]
    gold_snippet_ids: tuple[str, ...] = ()
    included_ids: tuple[str, ...] = ()

    def gold_positions(self) -> list[int]:
        golds = set(self.gold_snippet_ids)
        return [i for i, sid in enumerate(self.included_ids, start=1) if sid in golds]


def answer_json(letter: str, thinking: str) -> str:
    return json.dumps(
        {"step_by_step_thinking": thinking, "answer_choice": letter},
        ensure_ascii=False,
    )


def _wrong_letter(item: ItemContext) -> str:
    for letter in item.option_letters:
        if letter != item.answer:
            return letter
    return item.answer  # single-option degenerate case


class Backend:
    """Interface: `complete` returns the raw completion text."""

    backend_id: str = "backend"
    max_inflight: int = 1

    def complete(self, prompt: RenderedPrompt, params: GenerationParams,
                 item: ItemContext | None = None) -> str:
        raise NotImplementedError


class FixedMockBackend(Backend):
    def __init__(self, letter: str, backend_id: str = "fixed_mock"):
        self.letter = letter
        self.backend_id = backend_id

    def complete(self, prompt, params, item=None) -> str:
        return answer_json(self.letter, "fixed")


class OracleMockBackend(Backend):
    """Correct iff any gold snippet id appears among the included context ids."""

    def __init__(self, backend_id: str = "oracle_mock"):
        self.backend_id = backend_id

    def complete(self, prompt, params, item=None) -> str:
        if item is None:
            raise BackendError("oracle mock needs per-item context")
        if item.gold_positions():
            return answer_json(item.answer, "gold snippet found in context")
        return answer_json(_wrong_letter(item), "gold snippet missing from context")


class PositionalMockBackend(Backend):
    """Correct iff a gold snippet sits within the first `window` positions."""

    def __init__(self, window: int, backend_id: str | None = None):
        if window < 1:
            raise ConfigError(f"positional mock window must be >= 1, got {window}")
        self.window = window
        self.backend_id = backend_id or f"positional_mock({window})"

    def complete(self, prompt, params, item=None) -> str:
        if item is None:
            raise BackendError("positional mock needs per-item context")
        positions = item.gold_positions()
        if positions and min(positions) <= self.window:
            return answer_json(item.answer, f"gold within first {self.window} documents")
        return answer_json(_wrong_letter(item), "gold not early enough in context")


@dataclass
class HttpChatBackend(Backend):
    """Chat-completion HTTP client with exponential-backoff retries.

    Sends ``{"model", "messages", "temperature", "max_tokens"}`` and reads
    ``choices[0].message.content``. The bearer token comes from the
    environment variable named by `auth_env`; secrets never live in config
    files. Optionally appends raw request/response pairs to a JSONL audit
    log.
    """

    endpoint: str
    model: str
    backend_id: str = "http_chat"
    auth_env: str | None = None
    max_inflight: int = 1
    timeout: float = 60.0
    retry_delays: tuple[float, ...] = RETRY_DELAYS
    log_path: str | None = None
    _headers: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._headers = {"Content-Type": "application/json"}
        if self.auth_env:
            token = os.environ.get(self.auth_env)
            if not token:
                raise ConfigError(
                    f"backend {self.backend_id!r} expects a token in ${self.auth_env}"
                )
            self._headers["Authorization"] = f"Bearer {token}"

    def _log(self, payload: dict, response: dict | None, status: int | None) -> None:
        if not self.log_path:
            return
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(
                {"request": payload, "status": status, "response": response},
                ensure_ascii=False,
            ))
            fh.write("\n")

    def complete(self, prompt, params, item=None) -> str:
        payload = {
            "model": self.model,
            "messages": prompt.messages(),
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        attempts = len(self.retry_delays) + 1
        last_status: int | None = None
        last_error = ""
        for attempt in range(attempts):
            if attempt > 0:
                time.sleep(self.retry_delays[attempt - 1])
            try:
                resp = requests.post(
                    self.endpoint, json=payload, headers=self._headers,
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                last_status, last_error = None, str(exc)
                continue
            last_status = resp.status_code
            if resp.status_code in RETRIABLE_STATUSES:
                last_error = resp.text[:500]
                self._log(payload, None, resp.status_code)
                continue
            if resp.status_code != 200:
                raise BackendError(
                    f"backend {self.backend_id!r} returned HTTP {resp.status_code}: "
                    f"{resp.text[:500]}"
                )
            try:
                data = resp.json()
                content = data["choices"][0]["message"]["content"]
            except (ValueError, LookupError, TypeError) as exc:
                raise BackendError(
                    f"backend {self.backend_id!r} sent an unexpected response shape: {exc}"
                ) from exc
            self._log(payload, data, resp.status_code)
            return content
        raise BackendExhaustedError(
            f"backend {self.backend_id!r} failed after {attempts} attempts "
            f"(last status {last_status}): {last_error}",
            attempts=attempts,
            last_status=last_status,
        )


def make_backend(backend_id: str, cfg: dict) -> Backend:
    """Instantiate a backend from its config-file entry."""
    kind = cfg.get("kind")
    if kind == "fixed_mock":
        if "letter" not in cfg:
            raise ConfigError(f"backend {backend_id!r}: fixed_mock needs a 'letter'")
        return FixedMockBackend(letter=cfg["letter"], backend_id=backend_id)
    if kind == "oracle_mock":
        return OracleMockBackend(backend_id=backend_id)
    if kind == "positional_mock":
        if "window" not in cfg:
            raise ConfigError(f"backend {backend_id!r}: positional_mock needs a 'window'")
        return PositionalMockBackend(window=int(cfg["window"]), backend_id=backend_id)
    if kind == "http_chat":
        for key in ("endpoint", "model"):
            if key not in cfg:
                raise ConfigError(f"backend {backend_id!r}: http_chat needs {key!r}")
        return HttpChatBackend(
            endpoint=cfg["endpoint"],
            model=cfg["model"],
            backend_id=backend_id,
            auth_env=cfg.get("auth_env"),
            max_inflight=int(cfg.get("max_inflight", 1)),
            timeout=float(cfg.get("timeout", 60.0)),
            retry_delays=tuple(cfg.get("retry_delays", RETRY_DELAYS)),
            log_path=cfg.get("log_path"),
        )
    raise ConfigError(f"backend {backend_id!r}: unknown kind {kind!r}")
