"""Textual front-end: prompt assembly, completion providers, response parsing."""

from .extract import KEY_SYNONYMS, MarkerMissing, extract_textual_ir, parse_response
from .prompt import (
    DEFAULT_FEWSHOT,
    YAML_END,
    YAML_START,
    FewshotInvalid,
    PromptBundle,
    build_prompt,
)
from .provider import (
    ENDPOINT_ENV,
    MODEL_ENV,
    TOKEN_ENV,
    AuthError,
    CompletionTimeout,
    ProviderConfig,
    ProviderError,
    TransportError,
    complete,
)

__all__ = [
    "KEY_SYNONYMS",
    "MarkerMissing",
    "extract_textual_ir",
    "parse_response",
    "DEFAULT_FEWSHOT",
    "YAML_END",
    "YAML_START",
    "FewshotInvalid",
    "PromptBundle",
    "build_prompt",
    "ENDPOINT_ENV",
    "MODEL_ENV",
    "TOKEN_ENV",
    "AuthError",
    "CompletionTimeout",
    "ProviderConfig",
    "ProviderError",
    "TransportError",
    "complete",
]
