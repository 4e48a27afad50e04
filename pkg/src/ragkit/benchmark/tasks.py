"""Benchmark task files: multi-choice QA items with optional gold snippets."""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError

TASK_KINDS = ("examination", "literature")


@dataclass(frozen=True)
class QAItem:
    item_id: str
    question: str
    options: dict[str, str]  # letter -> option text
    answer: str
    gold_snippet_ids: tuple[str, ...] = ()

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(sorted(self.options))

    def validate(self, where: str = "") -> None:
        prefix = f"{where}: " if where else ""
        letters = self.letters
        if len(letters) < 2:
            raise ConfigError(f"{prefix}need at least two options, got {letters}")
        expected = tuple(string.ascii_uppercase[: len(letters)])
        if letters != expected:
            raise ConfigError(
                f"{prefix}option letters must be contiguous from A, got {letters}"
            )
        if self.answer not in self.options:
            raise ConfigError(
                f"{prefix}answer {self.answer!r} is not one of the options {letters}"
            )
        if not self.question:
            raise ConfigError(f"{prefix}empty question")


@dataclass(frozen=True)
class Task:
    task_id: str
    kind: str
    items: tuple[QAItem, ...]

    def __len__(self) -> int:
        return len(self.items)

    def validate(self) -> None:
        if self.kind not in TASK_KINDS:
            raise ConfigError(
                f"task {self.task_id!r}: kind must be one of {TASK_KINDS}, got {self.kind!r}"
            )
        seen: set[str] = set()
        for index, item in enumerate(self.items):
            where = f"task {self.task_id!r} item {index}"
            if item.item_id in seen:
                raise ConfigError(f"{where}: duplicate item id {item.item_id!r}")
            seen.add(item.item_id)
            item.validate(where)


def item_from_dict(obj: dict, where: str) -> QAItem:
    for key in ("id", "question", "options", "answer"):
        if key not in obj:
            raise ConfigError(f"{where}: missing field {key!r}")
    options = obj["options"]
    if not isinstance(options, dict):
        raise ConfigError(f"{where}: options must be a letter->text object")
    gold = obj.get("gold_snippet_ids", [])
    if not isinstance(gold, list):
        raise ConfigError(f"{where}: gold_snippet_ids must be a list")
    return QAItem(
        item_id=str(obj["id"]),
        question=str(obj["question"]),
        options={str(k).upper(): str(v) for k, v in options.items()},
        answer=str(obj["answer"]).upper(),
        gold_snippet_ids=tuple(str(g) for g in gold),
    )


def load_task(path: str | Path) -> Task:
    """Load and validate one benchmark task JSON file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"task file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc
    for key in ("task_id", "kind", "items"):
        if key not in obj:
            raise ConfigError(f"{path}: missing field {key!r}")
    items = tuple(
        item_from_dict(rec, f"{path} item {index}")
        for index, rec in enumerate(obj["items"])
    )
    task = Task(task_id=str(obj["task_id"]), kind=str(obj["kind"]), items=items)
    task.validate()
    return task


def task_to_dict(task: Task) -> dict:
    return {
        "task_id": task.task_id,
        "kind": task.kind,
        "items": [
            {
                "id": item.item_id,
                "question": item.question,
                "options": dict(item.options),
                "answer": item.answer,
                **(
                    {"gold_snippet_ids": list(item.gold_snippet_ids)}
                    if item.gold_snippet_ids
                    else {}
                ),
            }
            for item in task.items
        ],
    }
