"""Context assembly: render retrieved snippets into the prompt budget."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from ..corpus import Snippet
from ..errors import ConfigError
from ..tokens import TOKEN_ESTIMATE_FACTOR

CONTEXT_ORDERS = ("rank_asc", "rank_desc", "shuffled")


def render_snippet_line(position: int, snippet: Snippet) -> str:
    return f"Document [{position}] (Title: {snippet.title}) {snippet.content}"


@dataclass(frozen=True)
class ContextBundle:
    text: str
    included_ids: tuple[str, ...]
    dropped: int
    budget_exceeded: bool  # nothing fit although snippets were offered


def assemble_context(
    snippets: Sequence[Snippet],
    budget: int,
    order: str = "rank_asc",
    seed: int = 0,
) -> ContextBundle:
    """Join snippets as numbered document lines within a token budget.

    Input must be in retrieval-rank order (rank 1 first). When the
    rendered context would exceed `budget`, whole snippets are dropped
    from the low-rank end; snippets are never truncated mid-text. The
    surviving set is then laid out per `order` and numbered by its final
    context position, which is what `included_ids` reports.
    """
    if order not in CONTEXT_ORDERS:
        raise ConfigError(f"unknown context order {order!r}; expected {CONTEXT_ORDERS}")
    if not snippets:
        return ContextBundle(text="", included_ids=(), dropped=0, budget_exceeded=False)

    # Word counts are position-invariant ("[12]" is one word like "[1]"),
    # so the budget cut can be decided on rank order before reordering.
    word_counts = [len(render_snippet_line(1, s).split()) for s in snippets]
    keep = len(snippets)
    total = sum(word_counts)
    while keep > 0 and math.ceil(total * TOKEN_ESTIMATE_FACTOR) > budget:
        keep -= 1
        total -= word_counts[keep]
    if keep == 0:
        return ContextBundle(
            text="", included_ids=(), dropped=len(snippets), budget_exceeded=True
        )

    included = list(snippets[:keep])
    if order == "rank_desc":
        included.reverse()
    elif order == "shuffled":
        random.Random(seed).shuffle(included)

    lines = [render_snippet_line(pos, s) for pos, s in enumerate(included, start=1)]
    return ContextBundle(
        text="\n".join(lines),
        included_ids=tuple(s.snippet_id for s in included),
        dropped=len(snippets) - keep,
        budget_exceeded=False,
    )
