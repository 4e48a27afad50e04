"""Tokenization helpers used by indexing, hashing embedders, and budgeting."""

from __future__ import annotations

import math
import re

# Unicode letters and digits, underscore excluded.
_WORD = re.compile(r"[^\W_]+", re.UNICODE)

# Whitespace tokens under-count subword tokenizers; 1.3 errs conservative.
TOKEN_ESTIMATE_FACTOR = 1.3


def tokenize(text: str) -> list[str]:
    """Lowercase terms split on non-alphanumeric runs; empties dropped.

    No stemming and no stopword removal, so indexing stays reversible and
    deterministic across environments.
    """
    return _WORD.findall(text.lower())


def estimate_tokens(text: str) -> int:
    """Approximate LLM token count of `text` for context budgeting."""
    if not text:
        return 0
    return math.ceil(len(text.split()) * TOKEN_ESTIMATE_FACTOR)
