"""Answer extraction from raw completions. Never raises; failures are data."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Collection

PARSE_PATHS = ("strict_json", "json_in_text", "letter_regex", "failed")

_KEY_RE = re.compile(r'answer_choice"?\s*:\s*"?([A-Za-z])')
_ANSWER_RE = re.compile(r"\bAnswer\s*:\s*\(?([A-Za-z])\)?", re.IGNORECASE)


@dataclass(frozen=True)
class ParsedAnswer:
    choice: str | None
    rationale: str | None
    parse_path: str


def _letter_from_value(value: object, letters: set[str]) -> str | None:
    if not isinstance(value, str):
        return None
    for ch in value.upper():
        if ch in letters:
            return ch
    return None


def _from_object(obj: object, letters: set[str]) -> tuple[str, str | None] | None:
    """(choice, rationale) when `obj` is a dict carrying a usable answer."""
    if not isinstance(obj, dict) or "answer_choice" not in obj:
        return None
    choice = _letter_from_value(obj.get("answer_choice"), letters)
    if choice is None:
        return None
    rationale = obj.get("step_by_step_thinking")
    return choice, rationale if isinstance(rationale, str) else None


def _iter_embedded_objects(text: str):
    decoder = json.JSONDecoder()
    pos = text.find("{")
    while pos != -1:
        try:
            obj, _ = decoder.raw_decode(text, pos)
        except ValueError:
            pass
        else:
            yield obj
        pos = text.find("{", pos + 1)


def parse_answer(raw: str, valid_letters: Collection[str]) -> ParsedAnswer:
    """Extract the chosen option letter from a completion.

    Tries, in order: the whole text as JSON, the first JSON object embedded
    in the text, then letter regexes ('answer_choice": "X"' fragments and a
    standalone 'Answer: X'). A miss on every path reports ``failed`` with
    no choice rather than raising.
    """
    letters = {str(letter).upper() for letter in valid_letters}
    if not isinstance(raw, str):
        raw = "" if raw is None else str(raw)

    try:
        whole = json.loads(raw.strip())
    except ValueError:
        whole = None
    hit = _from_object(whole, letters)
    if hit:
        return ParsedAnswer(choice=hit[0], rationale=hit[1], parse_path="strict_json")

    for obj in _iter_embedded_objects(raw):
        hit = _from_object(obj, letters)
        if hit:
            return ParsedAnswer(choice=hit[0], rationale=hit[1], parse_path="json_in_text")

    for pattern in (_KEY_RE, _ANSWER_RE):
        for match in pattern.finditer(raw):
            letter = match.group(1).upper()
            if letter in letters:
                return ParsedAnswer(choice=letter, rationale=None, parse_path="letter_regex")

    return ParsedAnswer(choice=None, rationale=None, parse_path="failed")
