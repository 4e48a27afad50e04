"""Document chunking modes, store ingest/merge, and persistence."""

from __future__ import annotations

import json

import pytest

from ragkit.corpus import (
    Document,
    Section,
    Snippet,
    SnippetStore,
    chunk_hierarchical,
    ingest_corpus,
    merge_stores,
)
from ragkit.errors import IngestError


def _doc(title="Asthma", sections=()):
    return Document(doc_id="doc1", source="sp", title=title, body=tuple(sections))


def test_hierarchical_single_paragraph():
    doc = _doc(sections=[Section("Treatment", ("Use inhalers.",))])
    snippets = chunk_hierarchical(doc)
    assert len(snippets) == 1
    assert snippets[0].title == "Asthma -- Treatment"
    assert snippets[0].content == "Use inhalers."
    assert snippets[0].snippet_id == "sp:doc1:0"


def test_hierarchical_empty_document():
    doc = _doc(sections=[Section("Empty", ()), Section("AlsoEmpty", ())])
    assert chunk_hierarchical(doc) == []


def test_hierarchical_nested_heading_paths():
    doc = Document(
        doc_id="d",
        source="sp",
        title="T",
        body=(Section("A", ("pa",), (Section("B", ("pb",)),)),),
    )
    snippets = chunk_hierarchical(doc)
    assert [s.title for s in snippets] == ["T -- A", "T -- A -- B"]
    assert [s.content for s in snippets] == ["pa", "pb"]
    assert [s.snippet_id for s in snippets] == ["sp:d:0", "sp:d:1"]


def test_hierarchical_preserves_paragraph_order():
    doc = _doc(sections=[Section("S", ("p1", "p2", "p3"))])
    assert [s.content for s in chunk_hierarchical(doc)] == ["p1", "p2", "p3"]


def _write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def test_ingest_passthrough_one_snippet_per_doc(tmp_path):
    _write_jsonl(
        tmp_path / "abstracts.jsonl",
        [
            {"id": "p1", "title": "t1", "content": "abstract one"},
            {"id": "p2", "title": "t2", "content": "abstract two"},
            {"id": "p3", "title": "t3", "content": "abstract three"},
        ],
    )
    store = ingest_corpus(tmp_path, "pubmed", "passthrough")
    assert len(store) == 3
    assert store.ids() == ["pubmed:p1:0", "pubmed:p2:0", "pubmed:p3:0"]
    assert store.manifest == {"pubmed": 3}


def test_ingest_recursive_chunks_long_docs(tmp_path):
    _write_jsonl(
        tmp_path / "book.jsonl",
        [{"id": "b1", "title": "Book", "content": "x" * 2500}],
    )
    store = ingest_corpus(tmp_path, "textbooks", "recursive", max_chars=1000)
    assert len(store) == 3
    assert [s.snippet_id for s in store.snippets] == [
        "textbooks:b1:0",
        "textbooks:b1:1",
        "textbooks:b1:2",
    ]
    assert all(s.char_len <= 1000 for s in store.snippets)
    assert all(s.title == "Book" for s in store.snippets)


def test_ingest_duplicate_doc_id_names_the_id(tmp_path):
    _write_jsonl(tmp_path / "a.jsonl", [{"id": "dup", "title": "", "content": "x"}])
    _write_jsonl(tmp_path / "b.jsonl", [{"id": "dup", "title": "", "content": "y"}])
    with pytest.raises(IngestError, match="dup"):
        ingest_corpus(tmp_path, "src", "passthrough")


def test_ingest_malformed_record_reports_file_and_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "ok", "title": "", "content": "fine"}\nnot json\n')
    with pytest.raises(IngestError, match=r"bad\.jsonl:2"):
        ingest_corpus(tmp_path, "src", "passthrough")


def test_ingest_missing_content_rejected_with_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "d1", "title": "no body"}\n')
    with pytest.raises(IngestError, match=r"bad\.jsonl:1"):
        ingest_corpus(tmp_path, "src", "passthrough")


def test_ingest_missing_path_is_an_error(tmp_path):
    with pytest.raises(IngestError, match="corpus path not found"):
        ingest_corpus(tmp_path / "nope", "src", "passthrough")


def test_ingest_hierarchical_from_jsonl(tmp_path):
    _write_jsonl(
        tmp_path / "sp.jsonl",
        [
            {
                "id": "art",
                "title": "Art",
                "sections": [
                    {
                        "heading": "Intro",
                        "paragraphs": ["p one"],
                        "children": [{"heading": "Deep", "paragraphs": ["p two"]}],
                    }
                ],
            }
        ],
    )
    store = ingest_corpus(tmp_path, "sp", "hierarchical")
    assert [s.title for s in store.snippets] == ["Art -- Intro", "Art -- Intro -- Deep"]


def _mini_store(name, count):
    return SnippetStore(
        name,
        [Snippet(f"{name}:d{i}:0", name, "", f"text {i}") for i in range(count)],
    )


def test_merge_counts_and_manifest():
    merged = merge_stores([_mini_store("a", 2), _mini_store("b", 3)], "ab")
    assert len(merged) == 5
    assert merged.manifest == {"a": 2, "b": 3}
    assert merged.corpus_name == "ab"
    assert {s.source for s in merged.snippets} == {"a", "b"}


def test_merge_single_store_is_identity_except_name():
    store = _mini_store("a", 4)
    merged = merge_stores([store], "renamed")
    assert merged.corpus_name == "renamed"
    assert merged.snippets == store.snippets


def test_merge_is_associative():
    a, b, c = _mini_store("a", 2), _mini_store("b", 1), _mini_store("c", 3)
    left = merge_stores([merge_stores([a, b], "ab"), c], "abc")
    right = merge_stores([a, merge_stores([b, c], "bc")], "abc")
    flat = merge_stores([a, b, c], "abc")
    assert left.snippets == right.snippets == flat.snippets


def test_merge_scaled_corpus_ratios():
    # scaled-down source sizes 239 / 3 / 1 / 299 keep their proportions
    stores = [
        _mini_store("pm", 239),
        _mini_store("tb", 3),
        _mini_store("sp", 1),
        _mini_store("wk", 299),
    ]
    merged = merge_stores(stores, "all")
    total = len(merged)
    assert total == 542
    shares = {src: count / total for src, count in merged.manifest.items()}
    assert abs(shares["pm"] - 0.4410) < 5e-5
    assert abs(shares["wk"] - 0.5517) < 5e-5
    assert abs(shares["tb"] - 0.0055) < 5e-5
    assert abs(shares["sp"] - 0.0018) < 5e-5


def test_merge_collision_is_an_error():
    a = _mini_store("a", 2)
    with pytest.raises(IngestError, match="a:d0:0"):
        merge_stores([a, a], "aa")


def test_store_roundtrip_is_byte_deterministic(tmp_path):
    store = _mini_store("src", 5)
    first, second = tmp_path / "one", tmp_path / "two"
    store.save(first)
    SnippetStore.load(first).save(second)
    assert (first / "snippets.jsonl").read_bytes() == (second / "snippets.jsonl").read_bytes()
    assert (first / "manifest.json").read_bytes() == (second / "manifest.json").read_bytes()


def test_duplicate_snippet_ids_rejected():
    snip = Snippet("s:d:0", "s", "", "x")
    with pytest.raises(IngestError, match="s:d:0"):
        SnippetStore("s", [snip, snip])
