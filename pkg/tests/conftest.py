"""Shared builders: random stores, planted-gold corpora, and toy tasks."""

from __future__ import annotations

import random

from ragkit.benchmark.tasks import QAItem, Task
from ragkit.corpus import Snippet, SnippetStore


def random_store(
    rng: random.Random,
    n_snippets: int,
    vocab_size: int = 50,
    max_len: int = 30,
    name: str = "rnd",
) -> SnippetStore:
    """Store of random word soup; ids deliberately sort unlike their ordinals."""
    vocab = [f"w{j}" for j in range(vocab_size)]
    snippets = []
    for i in range(n_snippets):
        content = " ".join(rng.choices(vocab, k=rng.randint(1, max_len)))
        title = " ".join(rng.choices(vocab, k=rng.randint(0, 3)))
        snippets.append(Snippet(f"{name}:d{i}:0", name, title, content))
    return SnippetStore(name, snippets)


def random_query(rng: random.Random, vocab_size: int = 50, max_terms: int = 20) -> str:
    return " ".join(f"w{rng.randrange(vocab_size)}" for _ in range(rng.randint(1, max_terms)))


def build_planted_corpus(
    gold_ranks: list[int],
    n_fillers: int = 0,
    source: str = "plant",
    kind: str = "literature",
) -> tuple[SnippetStore, Task]:
    """Corpus where item i's gold snippet lands at exactly BM25 rank i.

    Item i asks about a term unique to its own documents. Its gold snippet
    carries the term once; each of its rank-1 distractors carries it twice
    at identical document length, so every distractor outscores the gold
    and the gold sits at rank gold_ranks[i] deterministically.
    """
    snippets: list[Snippet] = []
    items: list[QAItem] = []
    for i, rank in enumerate(gold_ranks):
        term = f"zq{i}x"
        for j in range(rank - 1):
            content = " ".join([term] * 2 + ["filler"] * 6)
            snippets.append(Snippet(f"{source}:d{i}x{j}:0", source, "", content))
        gold_id = f"{source}:gold{i}:0"
        gold_content = " ".join([term] + ["filler"] * 7)
        snippets.append(Snippet(gold_id, source, "", gold_content))
        items.append(
            QAItem(
                item_id=f"item{i}",
                question=term,
                options={"A": "yes", "B": "no"},
                answer="A" if i % 2 == 0 else "B",
                gold_snippet_ids=(gold_id,),
            )
        )
    for j in range(n_fillers):
        snippets.append(Snippet(f"{source}:junk{j}:0", source, "", f"junk{j} junk{j}"))
    store = SnippetStore(source, snippets)
    task = Task(task_id="planted", kind=kind, items=tuple(items))
    task.validate()
    return store, task
