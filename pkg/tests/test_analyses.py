"""Position bins, source proportions, and the recall-based scaling curve."""

from __future__ import annotations

import random

import pytest

from conftest import build_planted_corpus
from ragkit.benchmark import (
    EvalRecord,
    RunConfig,
    evaluate_task,
    gold_recall_at_k,
    position_analysis,
    recall_curve,
    source_proportion,
)
from ragkit.errors import ConfigError
from ragkit.generation import GenerationParams, OracleMockBackend, PositionalMockBackend
from ragkit.retrieval import IndexSet, RetrieverSpec, build_lexical_index

LEX = RetrieverSpec(kind="lexical")
GEN = GenerationParams(context_token_budget=10**6)


def _record(item_id, retrieved=(), gold=(), positions=(), correct=False):
    return EvalRecord(
        item_id=item_id,
        retrieved_ids=tuple(retrieved),
        included_ids=tuple(retrieved),
        gold_positions=tuple(positions),
        gold_snippet_ids=tuple(gold),
        predicted="A" if correct else "B",
        correct=correct,
        parse_path="strict_json",
        raw_len=1,
    )


def _planted_run(ranks, backend, k):
    store, task = build_planted_corpus(ranks)
    indexes = IndexSet(store=store, lexical=build_lexical_index(store))
    config = RunConfig(
        corpus_name="plant", backend_id="mock", retriever=LEX, k=k,
        template_id="rag", generation=GEN,
    )
    return evaluate_task(task, config, indexes, backend)


def test_positional_mock_bins_split_cleanly():
    ranks = [(i % 16) + 1 for i in range(32)]  # positions 1..16, twice each
    report = _planted_run(ranks, PositionalMockBackend(window=8), k=16)
    bins = position_analysis(report.records, [8, 16])
    by_label = {b.label: b for b in bins}
    assert by_label["1-8"].n == 16 and by_label["1-8"].accuracy == 100.0
    assert by_label["9-16"].n == 16 and by_label["9-16"].accuracy == 0.0
    assert by_label["absent"].n == 0 and by_label["absent"].accuracy is None


def test_oracle_mock_every_present_bin_is_perfect():
    ranks = [(i % 12) + 1 for i in range(24)]
    report = _planted_run(ranks, OracleMockBackend(), k=12)
    for bin_ in position_analysis(report.records, [4, 8, 12]):
        if bin_.label != "absent" and bin_.n:
            assert bin_.accuracy == 100.0


def test_all_golds_absent_populates_only_absent_bin():
    records = [_record(f"q{i}", retrieved=["s:x:0"], gold=["s:g:0"]) for i in range(5)]
    bins = position_analysis(records, [8])
    by_label = {b.label: b for b in bins}
    assert by_label["absent"].n == 5
    assert by_label["1-8"].n == 0 and by_label["1-8"].accuracy is None


def test_overflow_bin_added_when_needed():
    records = [
        _record("q0", retrieved=["g"], gold=["g"], positions=[20], correct=True)
    ]
    bins = position_analysis(records, [8, 16])
    assert bins[-2].label == "17+" and bins[-2].n == 1


def test_first_gold_position_is_the_binning_key():
    records = [
        _record("q0", retrieved=["a", "g1", "g2"], gold=["g1", "g2"],
                positions=[2, 9], correct=True)
    ]
    bins = position_analysis(records, [4, 16])
    by_label = {b.label: b for b in bins}
    assert by_label["1-4"].n == 1 and by_label["5-16"].n == 0


def test_position_analysis_requires_gold_annotations():
    with pytest.raises(ConfigError, match="gold"):
        position_analysis([_record("q0", retrieved=["x"])], [8])


def test_position_analysis_rejects_bad_edges():
    record = _record("q0", gold=["g"], positions=[1])
    for edges in ([], [0, 4], [8, 4], [4, 4]):
        with pytest.raises(ConfigError):
            position_analysis([record], edges)


def test_source_proportion_normalization():
    manifest = {"pm": 239, "wk": 299, "tb": 3, "sp": 1}
    records = [
        _record("q0", retrieved=["pm:a:0", "pm:b:0", "wk:c:0"]),
        _record("q1", retrieved=["tb:d:0"]),
    ]
    prop = source_proportion(records, manifest)
    assert prop.corpus_total == 542
    assert prop.corpus_shares["pm"] == pytest.approx(239 / 542, abs=1e-12)
    assert prop.corpus_shares["wk"] == pytest.approx(299 / 542, abs=1e-12)
    assert prop.corpus_shares["tb"] == pytest.approx(3 / 542, abs=1e-12)
    assert prop.corpus_shares["sp"] == pytest.approx(1 / 542, abs=1e-12)
    assert sum(prop.corpus_shares.values()) == pytest.approx(1.0, abs=1e-9)
    assert sum(prop.retrieved_shares.values()) == pytest.approx(1.0, abs=1e-9)
    assert prop.retrieved_shares == {
        "pm": 0.5, "wk": 0.25, "tb": 0.25, "sp": 0.0
    }


def test_single_source_retrieval_share_is_one():
    prop = source_proportion(
        [_record("q0", retrieved=["only:a:0", "only:b:0"])], {"only": 10, "other": 5}
    )
    assert prop.retrieved_shares["only"] == 1.0
    assert prop.retrieved_shares["other"] == 0.0


def test_balanced_sources_under_uniform_retrieval():
    rng = random.Random(11)
    records = []
    for i in range(250):
        picks = [f"{rng.choice(['left', 'right'])}:d{j}:0" for j in range(4)]
        records.append(_record(f"q{i}", retrieved=picks))
    prop = source_proportion(records, {"left": 100, "right": 100})
    assert prop.retrieved_total == 1000
    assert prop.retrieved_shares["left"] == pytest.approx(0.5, abs=0.05)


def test_recall_curve_monotone_and_oracle_consistent():
    ranks = [1, 1, 2, 4, 8, 8, 16, 16]
    report = _planted_run(ranks, OracleMockBackend(), k=16)
    points = recall_curve(report.records, [1, 2, 4, 8, 16])
    accs = [p.accuracy for p in points]
    assert accs == sorted(accs)
    assert points[-1].accuracy == 100.0
    assert gold_recall_at_k(report.records, 1) == pytest.approx(100 * 2 / 8)
    # oracle closure: pipeline accuracy == recall at the run's own k
    assert report.accuracy == pytest.approx(gold_recall_at_k(report.records, 16))


def test_recall_curve_baseline_passthrough():
    records = [_record("q0", retrieved=["g"], gold=["g"], correct=True)]
    point = recall_curve(records, [1], baseline=60.69)[0]
    assert point.to_dict()["baseline"] == 60.69
