"""Completion providers: HTTP chat endpoint and on-disk mock.

The mock provider is a directory of ``<digest>.txt`` files keyed by the
prompt digest; it performs no network access, which keeps every test of the
textual front-end fully deterministic.  The HTTP provider speaks the common
chat-completion shape: request ``{model, messages:[{role, content}]}``,
response containing the completion text.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .prompt import PromptBundle

ENDPOINT_ENV = "SCENARIO_FORGE_LLM_ENDPOINT"
MODEL_ENV = "SCENARIO_FORGE_LLM_MODEL"
TOKEN_ENV = "SCENARIO_FORGE_LLM_TOKEN"


class ProviderError(Exception):
    """Base class for completion-provider failures."""


class TransportError(ProviderError):
    """The provider could not be reached or answered unusably."""


class AuthError(ProviderError):
    """The provider rejected the credentials."""


class CompletionTimeout(ProviderError):
    """No response within the configured timeout, after all retries."""


@dataclass(frozen=True)
class ProviderConfig:
    """Where completions come from.

    ``kind`` is ``mock`` (endpoint = response directory) or ``http``
    (endpoint = chat-completions URL).  The auth token is read from the
    environment variable named by ``token_env`` at call time.
    """

    kind: str = "mock"
    endpoint: str = ""
    model: str = ""
    token_env: str = TOKEN_ENV
    timeout: float = 30.0
    retries: int = 2

    def __post_init__(self) -> None:
        if self.kind not in ("mock", "http"):
            raise ValueError(f"unknown provider kind {self.kind!r}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")

    @classmethod
    def from_env(cls, kind: str = "http", **overrides) -> "ProviderConfig":
        values = dict(
            kind=kind,
            endpoint=os.environ.get(ENDPOINT_ENV, ""),
            model=os.environ.get(MODEL_ENV, ""),
        )
        values.update(overrides)
        return cls(**values)


def _default_transport(url: str, payload: dict, headers: dict, timeout: float):
    import requests

    try:
        response = requests.post(url, json=payload, headers=headers, timeout=timeout)
    except requests.Timeout as err:
        raise TimeoutError(str(err)) from err
    except requests.RequestException as err:
        raise ConnectionError(str(err)) from err
    return response.status_code, response.json()


def _extract_text(body: dict) -> str:
    try:
        return body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        pass
    if isinstance(body.get("text"), str):
        return body["text"]
    raise TransportError(f"response carries no completion text: {json.dumps(body)[:200]}")


def complete(provider: ProviderConfig, prompt: PromptBundle, transport=None) -> str:
    """Return the model's completion text for a prompt, verbatim.

    ``transport`` is injectable for tests; the mock provider never touches
    it.  HTTP failures are retried ``provider.retries`` times; auth
    rejections are not retried.
    """
    if provider.kind == "mock":
        path = Path(provider.endpoint) / f"{prompt.digest()}.txt"
        if not path.exists():
            raise TransportError(
                f"mock provider has no response for digest {prompt.digest()} in {provider.endpoint}"
            )
        return path.read_text(encoding="utf-8")

    if not provider.endpoint:
        raise TransportError("http provider configured without an endpoint")
    transport = transport or _default_transport
    payload = {
        "model": provider.model,
        "messages": [{"role": "user", "content": prompt.text()}],
    }
    headers = {}
    token = os.environ.get(provider.token_env, "")
    if token:
        headers["Authorization"] = f"Bearer {token}"

    attempts = provider.retries + 1
    last_error: Exception | None = None
    timed_out = False
    for _ in range(attempts):
        try:
            status, body = transport(provider.endpoint, payload, headers, provider.timeout)
        except TimeoutError as err:
            last_error, timed_out = err, True
            continue
        except ConnectionError as err:
            last_error, timed_out = err, False
            continue
        if status in (401, 403):
            raise AuthError(f"provider rejected credentials (HTTP {status})")
        if status >= 400:
            last_error = TransportError(f"HTTP {status}")
            continue
        return _extract_text(body)
    if timed_out:
        raise CompletionTimeout(f"no response after {attempts} attempts: {last_error}")
    raise TransportError(f"transport failed after {attempts} attempts: {last_error}")
