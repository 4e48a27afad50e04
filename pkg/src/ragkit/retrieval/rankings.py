"""Ranking type shared by lexical search, vector search, and fusion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RankEntry:
    snippet_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class Ranking:
    """Ordered retrieval result; ranks are contiguous starting at 1.

    `ascending` is True for distance metrics (smaller is better) and False
    for similarity scores. Ties are always broken by ascending snippet id.
    """

    retriever_id: str
    entries: tuple[RankEntry, ...]
    ascending: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.snippet_id for e in self.entries]

    def rank_of(self, snippet_id: str) -> int | None:
        for entry in self.entries:
            if entry.snippet_id == snippet_id:
                return entry.rank
        return None

    def validate(self) -> None:
        """Raise AssertionError when the type invariants do not hold."""
        ids_seen = set()
        for pos, entry in enumerate(self.entries, start=1):
            assert entry.rank == pos, f"rank {entry.rank} at position {pos}"
            assert entry.snippet_id not in ids_seen, f"duplicate {entry.snippet_id}"
            ids_seen.add(entry.snippet_id)
        for prev, cur in zip(self.entries, self.entries[1:]):
            if self.ascending:
                assert cur.score >= prev.score, "distances must be non-decreasing"
            else:
                assert cur.score <= prev.score, "scores must be non-increasing"
            if cur.score == prev.score:
                assert prev.snippet_id < cur.snippet_id, "ties must sort by id"


def ranking_from_scores(
    retriever_id: str,
    ids: list[str],
    ordinals: np.ndarray,
    cand_scores: np.ndarray,
    id_sort_rank: np.ndarray,
    k: int,
    ascending: bool = False,
) -> Ranking:
    """Top-k entries over candidate `ordinals`, ties by ascending snippet id.

    `cand_scores` is aligned with `ordinals`; `id_sort_rank[o]` is the
    lexicographic rank of ``ids[o]``, which lets the tie-break run fully
    in numpy.
    """
    if len(ordinals) == 0:
        return Ranking(retriever_id=retriever_id, entries=(), ascending=ascending)
    primary = cand_scores if ascending else -cand_scores
    order = np.lexsort((id_sort_rank[ordinals], primary))[:k]
    entries = tuple(
        RankEntry(snippet_id=ids[int(o)], score=float(s), rank=pos)
        for pos, (o, s) in enumerate(zip(ordinals[order], cand_scores[order]), start=1)
    )
    return Ranking(retriever_id=retriever_id, entries=entries, ascending=ascending)


def id_sort_ranks(ids: list[str]) -> np.ndarray:
    """Array mapping ordinal -> rank of its snippet id in sorted id order."""
    ranks = np.empty(len(ids), dtype=np.int64)
    for rank, ordinal in enumerate(sorted(range(len(ids)), key=ids.__getitem__)):
        ranks[ordinal] = rank
    return ranks
