"""BM25 inverted index over a snippet store.

Postings live in flat CSR-style arrays so the scoring loop can run in the
compiled kernel; the index persists as plain ``.npy`` files plus JSON,
which keeps rebuild digests byte-stable.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import kernels
from ..corpus import SnippetStore
from ..errors import RetrievalError
from ..tokens import tokenize
from .rankings import Ranking, id_sort_ranks, ranking_from_scores

# Common toolkit defaults for BM25 hyperparameters; override per index.
DEFAULT_K1 = 0.9
DEFAULT_B = 0.4

RETRIEVER_ID = "bm25"


@dataclass
class LexicalIndex:
    ids: list[str]
    terms: list[str]
    term_bounds: np.ndarray  # int64, len(terms) + 1
    post_docs: np.ndarray  # int32, concatenated per-term ordinals
    post_tfs: np.ndarray  # float64, aligned with post_docs
    doc_lens: np.ndarray  # float64, tokens per snippet (title + content)
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B

    def __post_init__(self) -> None:
        self.vocab = {term: t for t, term in enumerate(self.terms)}
        self.id_sort_rank = id_sort_ranks(self.ids)

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def avgdl(self) -> float:
        return float(self.doc_lens.mean())

    def df(self, term: str) -> int:
        t = self.vocab.get(term)
        if t is None:
            return 0
        return int(self.term_bounds[t + 1] - self.term_bounds[t])

    def idf(self, term: str) -> float:
        """ln(1 + (N - df + 0.5) / (df + 0.5)); strictly positive for df >= 1."""
        df = self.df(term)
        if df == 0:
            return 0.0
        return float(np.log(1.0 + (self.size - df + 0.5) / (df + 0.5)))

    def postings(self, term: str) -> list[tuple[int, int]]:
        t = self.vocab.get(term)
        if t is None:
            return []
        lo, hi = int(self.term_bounds[t]), int(self.term_bounds[t + 1])
        return [
            (int(d), int(tf))
            for d, tf in zip(self.post_docs[lo:hi], self.post_tfs[lo:hi])
        ]

    def term_frequency(self, term: str, ordinal: int) -> int:
        t = self.vocab.get(term)
        if t is None:
            return 0
        lo, hi = int(self.term_bounds[t]), int(self.term_bounds[t + 1])
        pos = lo + int(np.searchsorted(self.post_docs[lo:hi], ordinal))
        if pos < hi and self.post_docs[pos] == ordinal:
            return int(self.post_tfs[pos])
        return 0

    # -- persistence --------------------------------------------------------

    def save(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        np.save(out / "term_bounds.npy", self.term_bounds)
        np.save(out / "post_docs.npy", self.post_docs)
        np.save(out / "post_tfs.npy", self.post_tfs)
        np.save(out / "doc_lens.npy", self.doc_lens)
        meta = {
            "ids": self.ids,
            "terms": self.terms,
            "k1": self.k1,
            "b": self.b,
        }
        with open(out / "meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, ensure_ascii=False, sort_keys=True)
            fh.write("\n")
        return out

    @classmethod
    def load(cls, index_dir: str | Path) -> "LexicalIndex":
        index_dir = Path(index_dir)
        meta_path = index_dir / "meta.json"
        if not meta_path.exists():
            raise RetrievalError(f"no lexical index at {index_dir}")
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        return cls(
            ids=list(meta["ids"]),
            terms=list(meta["terms"]),
            term_bounds=np.load(index_dir / "term_bounds.npy"),
            post_docs=np.load(index_dir / "post_docs.npy"),
            post_tfs=np.load(index_dir / "post_tfs.npy"),
            doc_lens=np.load(index_dir / "doc_lens.npy"),
            k1=float(meta["k1"]),
            b=float(meta["b"]),
        )


def snippet_terms(title: str, content: str) -> list[str]:
    return tokenize(title) + tokenize(content)


def build_lexical_index(
    store: SnippetStore, k1: float = DEFAULT_K1, b: float = DEFAULT_B
) -> LexicalIndex:
    """Index title + content tokens of every snippet in store order."""
    if len(store) == 0:
        raise RetrievalError("cannot build a lexical index over an empty store")
    per_term: dict[str, list[tuple[int, int]]] = {}
    doc_lens = np.zeros(len(store), dtype=np.float64)
    for ordinal, snip in enumerate(store.snippets):
        counts = Counter(snippet_terms(snip.title, snip.content))
        doc_lens[ordinal] = sum(counts.values())
        for term, tf in counts.items():
            per_term.setdefault(term, []).append((ordinal, tf))

    terms = sorted(per_term)
    bounds = np.zeros(len(terms) + 1, dtype=np.int64)
    docs: list[int] = []
    tfs: list[int] = []
    for t, term in enumerate(terms):
        postings = per_term[term]  # already ascending by ordinal
        docs.extend(d for d, _ in postings)
        tfs.extend(tf for _, tf in postings)
        bounds[t + 1] = len(docs)
    return LexicalIndex(
        ids=store.ids(),
        terms=terms,
        term_bounds=bounds,
        post_docs=np.asarray(docs, dtype=np.int32),
        post_tfs=np.asarray(tfs, dtype=np.float64),
        doc_lens=doc_lens,
        k1=k1,
        b=b,
    )


def bm25_score(index: LexicalIndex, query_terms: list[str], ordinal: int) -> float:
    """BM25 score of one snippet for distinct query terms.

    Repeating a query term does not change the score; terms absent from
    the snippet contribute zero.
    """
    if not 0 <= ordinal < index.size:
        raise RetrievalError(f"ordinal {ordinal} out of range for N={index.size}")
    dl = float(index.doc_lens[ordinal])
    avgdl = index.avgdl
    score = 0.0
    for term in sorted(set(query_terms)):
        tf = index.term_frequency(term, ordinal)
        if tf == 0:
            continue
        denom = tf + index.k1 * (1.0 - index.b + index.b * dl / avgdl)
        score += index.idf(term) * tf * (index.k1 + 1.0) / denom
    return score


def query_scores(index: LexicalIndex, query: str) -> np.ndarray:
    """Dense BM25 scores of every snippet for `query` (kernel-backed)."""
    terms = [t for t in sorted(set(tokenize(query))) if t in index.vocab]
    if not terms:
        return np.zeros(index.size, dtype=np.float64)
    slices = [
        (int(index.term_bounds[index.vocab[t]]), int(index.term_bounds[index.vocab[t] + 1]))
        for t in terms
    ]
    bounds = np.zeros(len(terms) + 1, dtype=np.int64)
    docs = []
    tfs = []
    idfs = np.zeros(len(terms), dtype=np.float64)
    for i, (term, (lo, hi)) in enumerate(zip(terms, slices)):
        docs.append(index.post_docs[lo:hi])
        tfs.append(index.post_tfs[lo:hi])
        idfs[i] = index.idf(term)
        bounds[i + 1] = bounds[i] + (hi - lo)
    return kernels.bm25_accumulate(
        np.concatenate(docs),
        np.concatenate(tfs),
        bounds,
        idfs,
        index.doc_lens,
        index.avgdl,
        index.k1,
        index.b,
    )


def search_lexical(index: LexicalIndex, query: str, k: int) -> Ranking:
    """Top-k snippets by BM25; only positive-scoring snippets are returned."""
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    scores = query_scores(index, query)
    ordinals = np.nonzero(scores > 0.0)[0]
    return ranking_from_scores(
        RETRIEVER_ID, index.ids, ordinals, scores[ordinals], index.id_sort_rank, k
    )
