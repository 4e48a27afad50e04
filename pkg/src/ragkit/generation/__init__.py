"""Prompt construction, generation backends, and answer parsing."""

from .backends import (
    Backend,
    FixedMockBackend,
    GenerationParams,
    HttpChatBackend,
    ItemContext,
    OracleMockBackend,
    PositionalMockBackend,
    answer_json,
    make_backend,
)
from .context import CONTEXT_ORDERS, ContextBundle, assemble_context, render_snippet_line
from .parsing import PARSE_PATHS, ParsedAnswer, parse_answer
from .templates import (
    TEMPLATE_IDS,
    PromptTemplate,
    RenderedPrompt,
    get_template,
    render_options,
    render_prompt,
)

__all__ = [
    "Backend",
    "CONTEXT_ORDERS",
    "ContextBundle",
    "FixedMockBackend",
    "GenerationParams",
    "HttpChatBackend",
    "ItemContext",
    "OracleMockBackend",
    "PARSE_PATHS",
    "ParsedAnswer",
    "PositionalMockBackend",
    "PromptTemplate",
    "RenderedPrompt",
    "TEMPLATE_IDS",
    "answer_json",
    "assemble_context",
    "get_template",
    "make_backend",
    "parse_answer",
    "render_options",
    "render_prompt",
    "render_snippet_line",
]
