"""Benchmark runner: evaluate tasks end-to-end and score them.

The per-item pipeline is retrieve (question only) -> assemble context ->
render prompt (options included here, never at retrieval) -> generate ->
parse. Items evaluate concurrently up to the backend's in-flight bound but
reduce in item order, so reports are deterministic.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from ..corpus import Snippet
from ..errors import BackendExhaustedError, ConfigError
from ..generation.backends import Backend, GenerationParams, ItemContext
from ..generation.context import CONTEXT_ORDERS, assemble_context
from ..generation.parsing import ParsedAnswer, parse_answer
from ..generation.templates import get_template, render_prompt
from ..retrieval.engine import IndexSet, RetrieverSpec, retrieve
from .tasks import QAItem, Task


@dataclass(frozen=True)
class RunConfig:
    """One experiment coordinate: corpus x retriever x k x template x backend."""

    corpus_name: str
    backend_id: str
    retriever: RetrieverSpec | None = None
    k: int = 32
    template_id: str = "rag"
    generation: GenerationParams = GenerationParams()
    context_order: str = "rank_asc"
    seed: int = 0

    def validate(self) -> None:
        if self.k < 0:
            raise ConfigError(f"k must be >= 0, got {self.k}")
        template = get_template(self.template_id)
        if self.k == 0 and template.uses_context:
            raise ConfigError(
                f"template {self.template_id!r} needs retrieved context but k=0"
            )
        if self.k > 0 and not template.uses_context:
            raise ConfigError(
                f"k={self.k} retrieves snippets but template {self.template_id!r} "
                "has no context slot"
            )
        if self.k > 0 and self.retriever is None:
            raise ConfigError("k > 0 requires a retriever spec")
        if self.context_order not in CONTEXT_ORDERS:
            raise ConfigError(
                f"unknown context order {self.context_order!r}; expected {CONTEXT_ORDERS}"
            )

    def to_dict(self) -> dict:
        return {
            "corpus_name": self.corpus_name,
            "retriever": self.retriever.to_dict() if self.retriever else None,
            "k": self.k,
            "template_id": self.template_id,
            "backend_id": self.backend_id,
            "generation": {
                "temperature": self.generation.temperature,
                "max_tokens": self.generation.max_tokens,
                "context_token_budget": self.generation.context_token_budget,
            },
            "context_order": self.context_order,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class EvalRecord:
    item_id: str
    retrieved_ids: tuple[str, ...]
    included_ids: tuple[str, ...]
    gold_positions: tuple[int, ...]
    gold_snippet_ids: tuple[str, ...]
    predicted: str | None
    correct: bool
    parse_path: str
    raw_len: int
    failed: bool = False

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "retrieved_ids": list(self.retrieved_ids),
            "included_ids": list(self.included_ids),
            "gold_positions": list(self.gold_positions),
            "gold_snippet_ids": list(self.gold_snippet_ids),
            "predicted": self.predicted,
            "correct": self.correct,
            "parse_path": self.parse_path,
            "raw_len": self.raw_len,
            "failed": self.failed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "EvalRecord":
        return cls(
            item_id=obj["item_id"],
            retrieved_ids=tuple(obj.get("retrieved_ids", [])),
            included_ids=tuple(obj.get("included_ids", [])),
            gold_positions=tuple(obj.get("gold_positions", [])),
            gold_snippet_ids=tuple(obj.get("gold_snippet_ids", [])),
            predicted=obj.get("predicted"),
            correct=bool(obj["correct"]),
            parse_path=obj.get("parse_path", "failed"),
            raw_len=int(obj.get("raw_len", 0)),
            failed=bool(obj.get("failed", False)),
        )


@dataclass(frozen=True)
class TaskReport:
    task_id: str
    n: int
    n_correct: int
    n_failed: int
    accuracy: float  # percent, exact
    std: float  # percent, binomial
    records: tuple[EvalRecord, ...] = ()

    def summary_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "n": self.n,
            "n_correct": self.n_correct,
            "n_failed": self.n_failed,
            "accuracy": round(self.accuracy, 2),
            "std": round(self.std, 2),
        }


def binomial_std_percent(n_correct: int, n: int) -> float:
    """100 * sqrt(p * (1 - p) / n), the error bound on a task accuracy."""
    p = n_correct / n
    return 100.0 * math.sqrt(p * (1.0 - p) / n)


def score_task(records: Sequence[EvalRecord], task_id: str = "task") -> TaskReport:
    """Accuracy and binomial std over per-item records."""
    n = len(records)
    if n < 1:
        raise ConfigError("score_task needs at least one record")
    n_correct = sum(1 for r in records if r.correct)
    return TaskReport(
        task_id=task_id,
        n=n,
        n_correct=n_correct,
        n_failed=sum(1 for r in records if r.failed),
        accuracy=100.0 * n_correct / n,
        std=binomial_std_percent(n_correct, n),
        records=tuple(records),
    )


def average_score(reports: Sequence[TaskReport]) -> float:
    """Unweighted mean of task accuracies, in percent."""
    if not reports:
        raise ConfigError("average_score needs at least one report")
    return sum(r.accuracy for r in reports) / len(reports)


# ---------------------------------------------------------------------------
# Item evaluation
# ---------------------------------------------------------------------------


def _finish_item(
    item: QAItem,
    retrieved: Sequence[Snippet],
    config: RunConfig,
    backend: Backend,
) -> EvalRecord:
    """Run context assembly, prompting, generation, and parsing for one item."""
    template = get_template(config.template_id)
    retrieved_ids = tuple(s.snippet_id for s in retrieved)
    if template.uses_context:
        bundle = assemble_context(
            retrieved,
            config.generation.context_token_budget,
            order=config.context_order,
            seed=config.seed,
        )
        context: str | None = bundle.text
        included_ids = bundle.included_ids
    else:
        context = None
        included_ids = ()

    prompt = render_prompt(template, item.question, item.options, context)
    item_ctx = ItemContext(
        answer=item.answer,
        option_letters=item.letters,
        gold_snippet_ids=item.gold_snippet_ids,
        included_ids=included_ids,
    )
    failed = False
    raw = ""
    try:
        raw = backend.complete(prompt, config.generation, item_ctx)
    except BackendExhaustedError:
        failed = True

    if failed:
        parsed = ParsedAnswer(choice=None, rationale=None, parse_path="failed")
    else:
        parsed = parse_answer(raw, item.letters)

    golds = set(item.gold_snippet_ids)
    return EvalRecord(
        item_id=item.item_id,
        retrieved_ids=retrieved_ids,
        included_ids=included_ids,
        gold_positions=tuple(
            pos for pos, sid in enumerate(included_ids, start=1) if sid in golds
        ),
        gold_snippet_ids=item.gold_snippet_ids,
        predicted=parsed.choice,
        correct=(not failed) and parsed.choice == item.answer,
        parse_path=parsed.parse_path,
        raw_len=len(raw),
        failed=failed,
    )


def evaluate_item(
    item: QAItem, config: RunConfig, indexes: IndexSet | None, backend: Backend
) -> EvalRecord:
    """Full pipeline for one item; retrieval sees only the question text."""
    config.validate()
    if config.k > 0:
        if indexes is None:
            raise ConfigError("k > 0 requires built indexes")
        hits = retrieve(item.question, indexes, config.retriever, config.k)
        retrieved = [h.snippet for h in hits]
    else:
        retrieved = []
    return _finish_item(item, retrieved, config, backend)


def _map_items(items, fn, backend: Backend):
    if backend.max_inflight > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=backend.max_inflight) as pool:
            return list(pool.map(fn, items))  # map() preserves item order
    return [fn(item) for item in items]


def evaluate_task(
    task: Task, config: RunConfig, indexes: IndexSet | None, backend: Backend
) -> TaskReport:
    config.validate()
    records = _map_items(
        task.items, lambda item: evaluate_item(item, config, indexes, backend), backend
    )
    return score_task(records, task_id=task.task_id)


def scaling_sweep(
    task: Task,
    base_config: RunConfig,
    ks: Sequence[int],
    indexes: IndexSet,
    backend: Backend,
) -> list[tuple[int, TaskReport]]:
    """Evaluate the task once per k, re-using one retrieval pass at max(ks).

    Rankings are deterministic, so the top-k for a smaller k is exactly the
    truncated top-max(ks) list; only context assembly and generation rerun.
    """
    if not ks:
        raise ConfigError("scaling_sweep needs at least one k")
    if list(ks) != sorted(ks) or len(set(ks)) != len(ks):
        raise ConfigError(f"ks must be strictly ascending, got {list(ks)}")
    if ks[0] < 1:
        raise ConfigError(f"ks must be >= 1, got {ks[0]}")
    base_config.validate()

    k_max = max(ks)
    full_config = replace(base_config, k=k_max)

    def retrieve_item(item: QAItem) -> list[Snippet]:
        hits = retrieve(item.question, indexes, full_config.retriever, k_max)
        return [h.snippet for h in hits]

    per_item = _map_items(task.items, retrieve_item, backend)

    results: list[tuple[int, TaskReport]] = []
    for k in ks:
        config_k = replace(base_config, k=k)
        records = _map_items(
            list(zip(task.items, per_item)),
            lambda pair: _finish_item(pair[0], pair[1][:k], config_k, backend),
            backend,
        )
        results.append((k, score_task(records, task_id=task.task_id)))
    return results
