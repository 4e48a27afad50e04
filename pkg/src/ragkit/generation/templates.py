"""Prompt templates for multi-choice medical QA.

Four variants: with/without retrieved context, each in a chat form
(system + user messages) and a completion form carrying a pseudo one-shot
demonstration for models that ignore system prompts. The demonstration is
a fixed dummy exchange that leaks no real example.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from ..errors import ConfigError

_SLOT = re.compile(r"\{(context|question|options)\}")

TEMPLATE_IDS = ("cot", "rag", "cot_pseudo1", "rag_pseudo1")

_SYSTEM_COT = (
    "You are a helpful medical expert, and your task is to answer a multi-choice "
    "medical question. Please first think step-by-step and then choose the answer "
    "from the provided options. Organize your output in a json formatted as "
    'Dict{"step_by_step_thinking": Str(explanation), "answer_choice": Str{A/B/C/...}}. '
    "Your responses will be used for research purposes only, so please have a "
    "definite answer."
)

_SYSTEM_RAG = (
    "You are a helpful medical expert, and your task is to answer a multi-choice "
    "medical question using the relevant documents. Please first think step-by-step "
    "and then choose the answer from the provided options. Organize your output in a "
    'json formatted as Dict{"step_by_step_thinking": Str(explanation), '
    '"answer_choice": Str{A/B/C/...}}. Your responses will be used for research '
    "purposes only, so please have a definite answer."
)

_BODY_COT = (
    "Here is the question:\n"
    "{question}\n"
    "\n"
    "Here are the potential choices:\n"
    "{options}\n"
    "\n"
    "Please think step-by-step and generate your output in json:"
)

_BODY_RAG = (
    "Here are the relevant documents:\n"
    "{context}\n"
    "\n" + _BODY_COT
)

_PSEUDO_DEMO = (
    "### User:\n"
    "Here is the question:\n"
    "...\n"
    "\n"
    "Here are the potential choices:\n"
    "A. ...\n"
    "B. ...\n"
    "C. ...\n"
    "D. ...\n"
    "X. ...\n"
    "\n"
    "Please think step-by-step and generate your output in json.\n"
    "\n"
    "### Assistant:\n"
    '{"step_by_step_thinking": ..., "answer_choice": "X"}\n'
    "\n"
)

_PSEUDO_TURN = (
    "### User:\n"
    "Here is the question:\n"
    "{question}\n"
    "\n"
    "Here are the potential choices:\n"
    "{options}\n"
    "\n"
    "Please think step-by-step and generate your output in json.\n"
    "\n"
    "### Assistant:"
)

_BODY_COT_PSEUDO1 = _PSEUDO_DEMO + _PSEUDO_TURN

_BODY_RAG_PSEUDO1 = (
    "Here are the relevant documents:\n"
    "{context}\n"
    "\n" + _PSEUDO_DEMO + _PSEUDO_TURN
)


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    system_text: str
    body_pattern: str
    chat: bool  # False: render as one completion text, system inlined

    @property
    def uses_context(self) -> bool:
        return "{context}" in self.body_pattern


_TEMPLATES = {
    "cot": PromptTemplate("cot", _SYSTEM_COT, _BODY_COT, chat=True),
    "rag": PromptTemplate("rag", _SYSTEM_RAG, _BODY_RAG, chat=True),
    "cot_pseudo1": PromptTemplate("cot_pseudo1", _SYSTEM_COT, _BODY_COT_PSEUDO1, chat=False),
    "rag_pseudo1": PromptTemplate("rag_pseudo1", _SYSTEM_RAG, _BODY_RAG_PSEUDO1, chat=False),
}


def get_template(template_id: str) -> PromptTemplate:
    try:
        return _TEMPLATES[template_id]
    except KeyError:
        raise ConfigError(
            f"unknown template {template_id!r}; expected one of {TEMPLATE_IDS}"
        ) from None


@dataclass(frozen=True)
class RenderedPrompt:
    """Byte-stable prompt; `system` is None for completion-style templates."""

    system: str | None
    user: str

    def messages(self) -> list[dict[str, str]]:
        if self.system is None:
            return [{"role": "user", "content": self.user}]
        return [
            {"role": "system", "content": self.system},
            {"role": "user", "content": self.user},
        ]

    def text(self) -> str:
        if self.system is None:
            return self.user
        return self.system + "\n\n" + self.user


def render_options(options: Mapping[str, str]) -> str:
    """One option per line as ``A. <text>``, sorted by letter."""
    return "\n".join(f"{letter}. {options[letter]}" for letter in sorted(options))


def render_prompt(
    template: PromptTemplate | str,
    question: str,
    options: Mapping[str, str],
    context: str | None = None,
) -> RenderedPrompt:
    """Substitute slots verbatim; context-free templates ignore `context`."""
    if isinstance(template, str):
        template = get_template(template)
    if question is None:
        raise ConfigError("render_prompt needs a question")
    if not options:
        raise ConfigError("render_prompt needs at least one option")
    if template.uses_context and context is None:
        raise ConfigError(f"template {template.template_id!r} requires retrieved context")

    # single pass so slot-shaped text inside substituted values stays literal
    values = {
        "context": context if template.uses_context else "",
        "question": question,
        "options": render_options(options),
    }
    body = _SLOT.sub(lambda match: values[match.group(1)], template.body_pattern)

    if template.chat:
        return RenderedPrompt(system=template.system_text, user=body)
    return RenderedPrompt(system=None, user=template.system_text + "\n\n" + body)
