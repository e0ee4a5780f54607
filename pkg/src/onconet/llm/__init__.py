"""Ontology-guided LLM triple refresh: prompts, clients, triage and application."""

from .client import (
    ENV_API_KEY,
    ENV_ENDPOINT,
    ENV_MODEL,
    ChatClient,
    ConfigError,
    LLMError,
    MockClient,
    RequestParams,
    StatusError,
    TransientError,
    TransportError,
    request,
)
from .prompt import (
    INSTRUCTION,
    TRUNCATED,
    WORKED_TEXT,
    WORKED_TRIPLES,
    PromptError,
    PromptInstance,
    PromptOptions,
    relations,
    render_prompt,
)
from .refresh import RefreshReport, refresh
from .triage import (
    POLICIES,
    ApplyResult,
    DiffReport,
    ParsedResponse,
    Reject,
    Verdict,
    apply,
    parse_response,
    render_queue,
    triage,
)

__all__ = [
    "ApplyResult",
    "ChatClient",
    "ConfigError",
    "DiffReport",
    "ENV_API_KEY",
    "ENV_ENDPOINT",
    "ENV_MODEL",
    "INSTRUCTION",
    "LLMError",
    "MockClient",
    "POLICIES",
    "ParsedResponse",
    "PromptError",
    "PromptInstance",
    "PromptOptions",
    "RefreshReport",
    "Reject",
    "RequestParams",
    "StatusError",
    "TRUNCATED",
    "TransientError",
    "TransportError",
    "Verdict",
    "WORKED_TEXT",
    "WORKED_TRIPLES",
    "apply",
    "parse_response",
    "refresh",
    "relations",
    "render_prompt",
    "render_queue",
    "request",
    "triage",
]
