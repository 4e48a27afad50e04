"""Reciprocal rank fusion of rankings from several retrievers."""

from __future__ import annotations

from .rankings import RankEntry, Ranking

DEFAULT_RRF_K = 60.0


def rrf_fuse(rankings: list[Ranking], rrf_k: float = DEFAULT_RRF_K, k: int | None = None) -> Ranking:
    """Fuse rankings by summing 1 / (rrf_k + rank) per snippet.

    A snippet absent from a ranking simply contributes nothing for it.
    Contributions are summed in ascending-rank order so the result is
    bit-identical under any permutation of the input rankings; ties break
    by ascending snippet id.
    """
    if not rankings:
        raise ValueError("rrf_fuse needs at least one ranking")
    if rrf_k <= 0:
        raise ValueError(f"rrf_k must be positive, got {rrf_k}")

    ranks_by_id: dict[str, list[int]] = {}
    for ranking in rankings:
        for entry in ranking.entries:
            ranks_by_id.setdefault(entry.snippet_id, []).append(entry.rank)

    scored = [
        (snippet_id, sum(1.0 / (rrf_k + r) for r in sorted(ranks)))
        for snippet_id, ranks in ranks_by_id.items()
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    if k is not None:
        scored = scored[:k]

    fused_id = "rrf(" + "+".join(sorted(r.retriever_id for r in rankings)) + ")"
    entries = tuple(
        RankEntry(snippet_id=sid, score=score, rank=pos)
        for pos, (sid, score) in enumerate(scored, start=1)
    )
    return Ranking(retriever_id=fused_id, entries=entries)
