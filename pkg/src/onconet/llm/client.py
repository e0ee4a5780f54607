"""Chat-completion clients and the retrying request helper."""

from __future__ import annotations

import json
import logging
import os
import socket
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

log = logging.getLogger(__name__)

ENV_ENDPOINT = "ONCONET_LLM_ENDPOINT"
ENV_API_KEY = "ONCONET_LLM_API_KEY"
ENV_MODEL = "ONCONET_LLM_MODEL"


class LLMError(RuntimeError):
    pass


class ConfigError(LLMError):
    """Client is missing endpoint, credential or model."""


class TransientError(LLMError):
    """A failure worth retrying (timeout, connection reset, 429, 5xx)."""


class TransportError(LLMError):
    """Retries exhausted."""


class StatusError(LLMError):
    def __init__(self, status: int, body: str):
        excerpt = body[:200] + ("..." if len(body) > 200 else "")
        super().__init__(f"HTTP {status}: {excerpt}")
        self.status = status
        self.body = body


@dataclass(frozen=True)
class RequestParams:
    temperature: float = 0.0
    max_retries: int = 3
    backoff: float = 0.5  # seconds; doubles per attempt
    timeout: float = 60.0


class MockClient:
    """Returns canned responses in order (the last one repeats).

    ``faults`` are exceptions raised, in order, before any response is given,
    to exercise retry handling.
    """

    name = "mock"

    def __init__(self, responses: Union[str, Sequence[str]], faults: Sequence[BaseException] = ()):
        self.responses = [responses] if isinstance(responses, str) else list(responses)
        if not self.responses:
            raise ValueError("MockClient needs at least one response")
        self.faults = list(faults)
        self.calls = 0
        self.prompts: list[str] = []

    def complete(self, prompt: str, params: RequestParams = RequestParams()) -> str:
        self.calls += 1
        if self.faults:
            raise self.faults.pop(0)
        self.prompts.append(prompt)
        i = min(len(self.prompts) - 1, len(self.responses) - 1)
        return self.responses[i]


Opener = Callable[[urllib.request.Request, float], tuple[int, str]]


def _urlopen(req: urllib.request.Request, timeout: float) -> tuple[int, str]:
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.status, resp.read().decode("utf-8", "replace")
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read().decode("utf-8", "replace")


class ChatClient:
    """Minimal chat-completions client: messages array in, first choice's text out."""

    name = "http"

    def __init__(self, endpoint: str, api_key: str, model: str, opener: Optional[Opener] = None):
        missing = [n for n, v in (("endpoint", endpoint), ("credential", api_key), ("model", model)) if not v]
        if missing:
            raise ConfigError(f"LLM client is missing: {', '.join(missing)}")
        self.endpoint = endpoint
        self.api_key = api_key
        self.model = model
        self._open = opener or _urlopen

    @classmethod
    def from_env(cls, env: Optional[dict] = None, opener: Optional[Opener] = None) -> "ChatClient":
        env = os.environ if env is None else env
        return cls(env.get(ENV_ENDPOINT, ""), env.get(ENV_API_KEY, ""), env.get(ENV_MODEL, ""), opener)

    def complete(self, prompt: str, params: RequestParams = RequestParams()) -> str:
        body = {
            "model": self.model,
            "temperature": params.temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        req = urllib.request.Request(
            self.endpoint,
            data=json.dumps(body).encode("utf-8"),
            headers={"Content-Type": "application/json", "Authorization": f"Bearer {self.api_key}"},
            method="POST",
        )
        try:
            status, text = self._open(req, params.timeout)
        except (socket.timeout, TimeoutError) as exc:
            raise TransientError(f"timeout: {exc}") from None
        except (urllib.error.URLError, ConnectionError) as exc:
            raise TransientError(f"connection failed: {exc}") from None
        if status == 429 or status >= 500:
            raise TransientError(f"HTTP {status}")
        if not 200 <= status < 300:
            raise StatusError(status, text)
        try:
            data = json.loads(text)
            return data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError):
            raise StatusError(status, f"unexpected response shape: {text}") from None


def request(client, prompt: str, params: RequestParams = RequestParams(), sleep: Callable[[float], None] = time.sleep) -> str:
    """Ask ``client`` for a completion, retrying transient failures with exponential backoff."""
    attempt = 0
    while True:
        try:
            return client.complete(prompt, params)
        except (TransientError, TimeoutError, socket.timeout) as exc:
            if attempt >= params.max_retries:
                raise TransportError(f"giving up after {attempt + 1} attempts: {exc}") from None
            delay = params.backoff * (2**attempt)
            log.warning("transient LLM failure (%s); retry %d in %.2fs", exc, attempt + 1, delay)
            sleep(delay)
            attempt += 1
