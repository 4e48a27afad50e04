"""Retriever specs, index bundles, and the question-only retrieve entry point."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import Snippet, SnippetStore
from ..embeddings import resolve_provider
from ..errors import ConfigError, RetrievalError
from . import lexical as _lexical
from .dense import VectorIndex, search_vector
from .fuse import DEFAULT_RRF_K, rrf_fuse
from .lexical import LexicalIndex, search_lexical
from .rankings import Ranking

# Fusion children retrieve a deeper pool than k so items ranked past k by a
# single child can still be promoted by agreement.
FUSION_POOL_FACTOR = 2


@dataclass(frozen=True)
class RetrieverSpec:
    """What to retrieve with: lexical, dense, or a rank fusion of children."""

    kind: str  # "lexical" | "dense" | "fusion"
    provider: str | None = None
    metric: str = "ip"
    children: tuple["RetrieverSpec", ...] = ()
    rrf_k: float = DEFAULT_RRF_K

    def __post_init__(self) -> None:
        if self.kind == "lexical":
            return
        if self.kind == "dense":
            if not self.provider:
                raise ConfigError("dense retriever spec needs a provider id")
            if self.metric not in ("ip", "l2"):
                raise ConfigError(f"unknown metric {self.metric!r}")
            return
        if self.kind == "fusion":
            if len(self.children) < 2:
                raise ConfigError("fusion needs at least two child retrievers")
            child_ids = [c.retriever_id for c in self.children]
            if len(set(child_ids)) != len(child_ids):
                raise ConfigError(f"fusion children must be distinct, got {child_ids}")
            if self.rrf_k <= 0:
                raise ConfigError(f"rrf_k must be positive, got {self.rrf_k}")
            return
        raise ConfigError(f"unknown retriever kind {self.kind!r}")

    @property
    def retriever_id(self) -> str:
        if self.kind == "lexical":
            return _lexical.RETRIEVER_ID
        if self.kind == "dense":
            return f"dense:{self.provider}:{self.metric}"
        return "rrf(" + "+".join(sorted(c.retriever_id for c in self.children)) + ")"

    def to_dict(self) -> dict:
        if self.kind == "lexical":
            return {"kind": "lexical"}
        if self.kind == "dense":
            return {"kind": "dense", "provider": self.provider, "metric": self.metric}
        return {
            "kind": "fusion",
            "rrf_k": self.rrf_k,
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RetrieverSpec":
        kind = obj.get("kind")
        if kind == "lexical":
            return cls(kind="lexical")
        if kind == "dense":
            return cls(kind="dense", provider=obj.get("provider"),
                       metric=obj.get("metric", "ip"))
        if kind == "fusion":
            return cls(
                kind="fusion",
                rrf_k=float(obj.get("rrf_k", DEFAULT_RRF_K)),
                children=tuple(cls.from_dict(c) for c in obj.get("children", [])),
            )
        raise ConfigError(f"unknown retriever kind {kind!r}")

    def leaves(self) -> list["RetrieverSpec"]:
        if self.kind == "fusion":
            out: list[RetrieverSpec] = []
            for child in self.children:
                out.extend(child.leaves())
            return out
        return [self]


@dataclass
class IndexSet:
    """A snippet store plus whatever indexes have been built over it."""

    store: SnippetStore
    lexical: LexicalIndex | None = None
    vectors: dict[str, VectorIndex] = field(default_factory=dict)
    providers: dict[str, object] = field(default_factory=dict)

    @staticmethod
    def vector_key(provider_id: str, metric: str) -> str:
        return f"{provider_id}:{metric}"

    def add_vector_index(self, index: VectorIndex) -> None:
        self.vectors[self.vector_key(index.provider_id, index.metric)] = index

    def require_lexical(self) -> LexicalIndex:
        if self.lexical is None:
            raise RetrievalError(
                f"no lexical index built for corpus {self.store.corpus_name!r}"
            )
        return self.lexical

    def require_vector(self, spec: RetrieverSpec) -> VectorIndex:
        key = self.vector_key(spec.provider, spec.metric)
        index = self.vectors.get(key)
        if index is None:
            raise RetrievalError(
                f"no vector index for retriever {spec.retriever_id!r} "
                f"over corpus {self.store.corpus_name!r}"
            )
        return index

    def provider_for(self, spec: RetrieverSpec):
        provider = self.providers.get(spec.provider)
        if provider is None:
            provider = resolve_provider(spec.provider)
            self.providers[spec.provider] = provider
        return provider

    # -- persistence --------------------------------------------------------

    def save(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        self.store.save(out)
        if self.lexical is not None:
            self.lexical.save(out / "lexical")
        for key, vindex in sorted(self.vectors.items()):
            safe = key.replace("/", "_").replace(":", "-")
            vindex.save(out / "vectors" / safe)
        return out

    @classmethod
    def load(cls, store_dir: str | Path, providers: dict[str, object] | None = None) -> "IndexSet":
        store_dir = Path(store_dir)
        store = SnippetStore.load(store_dir)
        lexical = None
        if (store_dir / "lexical" / "meta.json").exists():
            lexical = LexicalIndex.load(store_dir / "lexical")
        indexes = cls(store=store, lexical=lexical, providers=dict(providers or {}))
        vectors_dir = store_dir / "vectors"
        if vectors_dir.is_dir():
            for sidecar in sorted(vectors_dir.glob("*.json")):
                indexes.add_vector_index(VectorIndex.load(sidecar.with_suffix("")))
        return indexes


@dataclass(frozen=True)
class RetrievedSnippet:
    snippet: Snippet
    score: float
    rank: int


def run_retriever(question: str, indexes: IndexSet, spec: RetrieverSpec, k: int) -> Ranking:
    """Produce the ranking for one retriever spec over built indexes."""
    if spec.kind == "lexical":
        return search_lexical(indexes.require_lexical(), question, k)
    if spec.kind == "dense":
        index = indexes.require_vector(spec)
        provider = indexes.provider_for(spec)
        qvec = provider.embed([question], mode="query")[0]
        return search_vector(index, qvec, k)
    pool = max(k, FUSION_POOL_FACTOR * k)
    child_rankings = [run_retriever(question, indexes, c, pool) for c in spec.children]
    return rrf_fuse(child_rankings, rrf_k=spec.rrf_k, k=k)


def retrieve(
    question: str, indexes: IndexSet, spec: RetrieverSpec, k: int
) -> list[RetrievedSnippet]:
    """Top-k snippets for a question; the query is the question text only.

    Answer options never reach this function: retrieval sees the bare
    question, which keeps results independent of any candidate answers.
    """
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    ranking = run_retriever(question, indexes, spec, k)
    return [
        RetrievedSnippet(
            snippet=indexes.store.get(entry.snippet_id),
            score=entry.score,
            rank=entry.rank,
        )
        for entry in ranking.entries
    ]
