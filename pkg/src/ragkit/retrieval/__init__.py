"""Lexical, dense, and fused top-k retrieval over snippet stores."""

from .dense import VectorIndex, build_vector_index, passage_text, search_vector
from .engine import (
    FUSION_POOL_FACTOR,
    IndexSet,
    RetrievedSnippet,
    RetrieverSpec,
    retrieve,
    run_retriever,
)
from .fuse import DEFAULT_RRF_K, rrf_fuse
from .lexical import (
    DEFAULT_B,
    DEFAULT_K1,
    LexicalIndex,
    bm25_score,
    build_lexical_index,
    query_scores,
    search_lexical,
)
from .rankings import RankEntry, Ranking

__all__ = [
    "DEFAULT_B",
    "DEFAULT_K1",
    "DEFAULT_RRF_K",
    "FUSION_POOL_FACTOR",
    "IndexSet",
    "LexicalIndex",
    "RankEntry",
    "Ranking",
    "RetrievedSnippet",
    "RetrieverSpec",
    "VectorIndex",
    "bm25_score",
    "build_lexical_index",
    "build_vector_index",
    "passage_text",
    "query_scores",
    "retrieve",
    "rrf_fuse",
    "run_retriever",
    "search_lexical",
    "search_vector",
]
