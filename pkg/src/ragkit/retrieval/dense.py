"""Exact dense retrieval over a flat vector index.

Search is an exhaustive scan (no ANN) so results are reproducible and can
be checked against a brute-force oracle. The on-disk cache is a raw
little-endian float32 row-major file plus a JSON sidecar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import kernels
from ..corpus import Snippet, SnippetStore
from ..errors import RetrievalError
from .rankings import Ranking, id_sort_ranks, ranking_from_scores

METRICS = ("ip", "l2")


@dataclass
class VectorIndex:
    ids: list[str]
    matrix: np.ndarray  # float32, shape (N, dim), C-contiguous
    metric: str
    provider_id: str

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise RetrievalError(f"unknown metric {self.metric!r}")
        self.matrix = np.ascontiguousarray(self.matrix, dtype=np.float32)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.ids):
            raise RetrievalError("vector matrix shape does not match snippet ids")
        self.id_sort_rank = id_sort_ranks(self.ids)

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    # -- persistence --------------------------------------------------------

    def save(self, path_prefix: str | Path) -> tuple[Path, Path]:
        """Write ``<prefix>.f32`` (raw vectors) and ``<prefix>.json`` sidecar."""
        prefix = Path(path_prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        data_path = prefix.with_suffix(".f32")
        sidecar_path = prefix.with_suffix(".json")
        with open(data_path, "wb") as fh:
            fh.write(np.ascontiguousarray(self.matrix, dtype="<f4").tobytes())
        sidecar = {
            "dim": self.dim,
            "count": self.size,
            "provider_id": self.provider_id,
            "metric": self.metric,
            "snippet_ids": self.ids,
        }
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, ensure_ascii=False, sort_keys=True)
            fh.write("\n")
        return data_path, sidecar_path

    @classmethod
    def load(cls, path_prefix: str | Path) -> "VectorIndex":
        prefix = Path(path_prefix)
        sidecar_path = prefix.with_suffix(".json")
        data_path = prefix.with_suffix(".f32")
        if not sidecar_path.exists():
            raise RetrievalError(f"no vector cache at {prefix}")
        with open(sidecar_path, encoding="utf-8") as fh:
            sidecar = json.load(fh)
        raw = np.fromfile(data_path, dtype="<f4")
        count, dim = int(sidecar["count"]), int(sidecar["dim"])
        if raw.size != count * dim:
            raise RetrievalError(
                f"vector cache {data_path} holds {raw.size} floats, "
                f"expected {count}x{dim}"
            )
        return cls(
            ids=list(sidecar["snippet_ids"]),
            matrix=raw.reshape(count, dim),
            metric=str(sidecar["metric"]),
            provider_id=str(sidecar["provider_id"]),
        )


def passage_text(snippet: Snippet) -> str:
    """Text handed to the passage encoder: title and content together."""
    return f"{snippet.title}\n{snippet.content}" if snippet.title else snippet.content


def build_vector_index(
    store: SnippetStore, provider, metric: str = "ip", batch_size: int = 64
) -> VectorIndex:
    """Embed every snippet with the provider's passage encoder."""
    if len(store) == 0:
        raise RetrievalError("cannot build a vector index over an empty store")
    rows = []
    snippets = store.snippets
    for start in range(0, len(snippets), batch_size):
        batch = snippets[start : start + batch_size]
        rows.append(provider.embed([passage_text(s) for s in batch], mode="passage"))
    return VectorIndex(
        ids=store.ids(),
        matrix=np.concatenate(rows, axis=0),
        metric=metric,
        provider_id=provider.provider_id,
    )


def search_vector(index: VectorIndex, qvec: np.ndarray, k: int) -> Ranking:
    """Exhaustive top-k scan: inner product descending or L2 ascending."""
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    qvec = np.asarray(qvec, dtype=np.float32).reshape(-1)
    if qvec.shape[0] != index.dim:
        raise RetrievalError(
            f"query vector dim {qvec.shape[0]} != index dim {index.dim}"
        )
    retriever_id = f"dense:{index.provider_id}:{index.metric}"
    ordinals = np.arange(index.size)
    if index.metric == "ip":
        scores = kernels.ip_scores(index.matrix, qvec)
        return ranking_from_scores(
            retriever_id, index.ids, ordinals, scores, index.id_sort_rank, k
        )
    dists = np.sqrt(kernels.l2sq_scores(index.matrix, qvec))
    return ranking_from_scores(
        retriever_id, index.ids, ordinals, dists, index.id_sort_rank, k, ascending=True
    )
