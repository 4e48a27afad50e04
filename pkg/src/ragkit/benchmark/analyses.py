"""Post-hoc analyses over evaluation records.

Three views: accuracy vs. number of retrieved snippets (via gold recall),
accuracy vs. position of the gold snippet in the context, and per-source
composition of a merged corpus vs. what retrieval actually surfaced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import ConfigError
from .runner import EvalRecord, binomial_std_percent

ABSENT_BIN = "absent"


def _require_gold(records: Sequence[EvalRecord], mode: str) -> None:
    if not any(r.gold_snippet_ids for r in records):
        raise ConfigError(
            f"{mode} analysis needs records with gold_snippet_ids; none carry any"
        )


# ---------------------------------------------------------------------------
# Gold position vs. accuracy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositionBin:
    label: str
    lo: int | None  # None for the absent bin
    hi: int | None  # None for the open-ended overflow bin
    n: int
    n_correct: int
    accuracy: float | None  # None when the bin is empty
    std: float | None

    def to_dict(self) -> dict:
        return {
            "bin": self.label,
            "lo": self.lo,
            "hi": self.hi,
            "n": self.n,
            "n_correct": self.n_correct,
            "accuracy": None if self.accuracy is None else round(self.accuracy, 2),
            "std": None if self.std is None else round(self.std, 2),
        }


def _make_bin(label, lo, hi, hits: list[bool]) -> PositionBin:
    n = len(hits)
    n_correct = sum(hits)
    return PositionBin(
        label=label,
        lo=lo,
        hi=hi,
        n=n,
        n_correct=n_correct,
        accuracy=100.0 * n_correct / n if n else None,
        std=binomial_std_percent(n_correct, n) if n else None,
    )


def position_analysis(
    records: Sequence[EvalRecord], bin_edges: Sequence[int]
) -> list[PositionBin]:
    """Per-bin accuracy keyed by the first gold position in the context.

    `bin_edges` are inclusive upper bounds: edges (8, 16) produce bins
    1-8 and 9-16, plus an open 17+ bin if needed. Items whose gold ids
    never made it into the context land in the separate "absent" bin;
    items with no gold annotation at all are skipped.
    """
    _require_gold(records, "position")
    edges = list(bin_edges)
    if not edges or edges != sorted(edges) or len(set(edges)) != len(edges) or edges[0] < 1:
        raise ConfigError(f"bin edges must be ascending positive ints, got {edges}")

    spans: list[tuple[int, int | None]] = []
    lo = 1
    for edge in edges:
        spans.append((lo, edge))
        lo = edge + 1
    overflow_needed = False

    binned: dict[tuple[int, int | None], list[bool]] = {span: [] for span in spans}
    absent: list[bool] = []
    overflow: list[bool] = []
    for record in records:
        if not record.gold_snippet_ids:
            continue
        if not record.gold_positions:
            absent.append(record.correct)
            continue
        first = min(record.gold_positions)
        for span in spans:
            if first <= span[1]:
                binned[span].append(record.correct)
                break
        else:
            overflow.append(record.correct)
            overflow_needed = True

    out = [
        _make_bin(f"{lo}-{hi}", lo, hi, binned[(lo, hi)]) for lo, hi in spans
    ]
    if overflow_needed:
        out.append(_make_bin(f"{edges[-1] + 1}+", edges[-1] + 1, None, overflow))
    out.append(_make_bin(ABSENT_BIN, None, None, absent))
    return out


# ---------------------------------------------------------------------------
# Source proportions in a merged corpus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SourceProportion:
    corpus_shares: dict[str, float]
    retrieved_shares: dict[str, float]
    corpus_total: int
    retrieved_total: int

    def to_dict(self) -> dict:
        return {
            "corpus_total": self.corpus_total,
            "retrieved_total": self.retrieved_total,
            "corpus_shares": {k: self.corpus_shares[k] for k in sorted(self.corpus_shares)},
            "retrieved_shares": {
                k: self.retrieved_shares[k] for k in sorted(self.retrieved_shares)
            },
        }


def snippet_source(snippet_id: str) -> str:
    """Source prefix of a namespaced ``<source>:<doc_id>:<seq>`` id."""
    return snippet_id.split(":", 1)[0]


def source_proportion(
    records: Sequence[EvalRecord], store_manifest: Mapping[str, int]
) -> SourceProportion:
    """Corpus composition vs. the composition of all retrieved snippets.

    Retrieved counts cover every id in `retrieved_ids` (the pre-budget
    top-k of each item). Both share maps sum to 1.
    """
    corpus_total = sum(store_manifest.values())
    if corpus_total <= 0:
        raise ConfigError("store manifest has no snippets")
    corpus_shares = {src: count / corpus_total for src, count in store_manifest.items()}

    retrieved_counts: dict[str, int] = {src: 0 for src in store_manifest}
    retrieved_total = 0
    for record in records:
        for sid in record.retrieved_ids:
            retrieved_counts[snippet_source(sid)] = (
                retrieved_counts.get(snippet_source(sid), 0) + 1
            )
            retrieved_total += 1
    if retrieved_total == 0:
        raise ConfigError("records contain no retrieved ids")
    retrieved_shares = {
        src: count / retrieved_total for src, count in retrieved_counts.items()
    }
    return SourceProportion(
        corpus_shares=corpus_shares,
        retrieved_shares=retrieved_shares,
        corpus_total=corpus_total,
        retrieved_total=retrieved_total,
    )


# ---------------------------------------------------------------------------
# Recall-based scaling curve from saved records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecallPoint:
    k: int
    n: int
    n_hit: int
    accuracy: float  # percent of items with a gold id in the top-k
    std: float
    baseline: float | None = None

    def to_dict(self) -> dict:
        out = {
            "k": self.k,
            "n": self.n,
            "n_hit": self.n_hit,
            "accuracy": round(self.accuracy, 2),
            "std": round(self.std, 2),
        }
        if self.baseline is not None:
            out["baseline"] = round(self.baseline, 2)
        return out


def recall_curve(
    records: Sequence[EvalRecord],
    ks: Sequence[int],
    baseline: float | None = None,
) -> list[RecallPoint]:
    """Gold recall@k over saved records, one point per requested k.

    With an oracle backend this equals task accuracy at each k; for other
    backends it upper-bounds what retrieval could have contributed.
    """
    _require_gold(records, "scaling")
    if not ks or list(ks) != sorted(set(ks)) or ks[0] < 1:
        raise ConfigError(f"ks must be ascending positive ints, got {list(ks)}")
    usable = [r for r in records if r.gold_snippet_ids]
    points = []
    for k in ks:
        hits = sum(
            1
            for r in usable
            if set(r.retrieved_ids[:k]) & set(r.gold_snippet_ids)
        )
        n = len(usable)
        points.append(
            RecallPoint(
                k=k,
                n=n,
                n_hit=hits,
                accuracy=100.0 * hits / n,
                std=binomial_std_percent(hits, n),
                baseline=baseline,
            )
        )
    return points


def gold_recall_at_k(records: Sequence[EvalRecord], k: int) -> float:
    """Fraction (percent) of gold-annotated items with a gold id in top-k."""
    return recall_curve(records, [k])[0].accuracy
