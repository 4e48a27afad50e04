"""Recursive character chunking: examples, reassembly, and bounds."""

from __future__ import annotations

import random

import pytest

from ragkit.corpus import chunk_recursive, chunk_recursive_parts


def reassemble(text: str, max_chars: int) -> str:
    return "".join(piece for _, piece in chunk_recursive_parts(text, max_chars))


def test_short_text_is_a_single_chunk():
    assert chunk_recursive("short paragraph", 1000) == ["short paragraph"]


def test_blank_line_split_drops_separator():
    assert chunk_recursive("aaaa\n\nbbbb", 6) == ["aaaa", "bbbb"]


def test_hard_cut_arithmetic():
    chunks = chunk_recursive("x" * 2500, 1000)
    assert [len(c) for c in chunks] == [1000, 1000, 500]
    assert "".join(chunks) == "x" * 2500


def test_empty_input_gives_empty_list():
    assert chunk_recursive("", 10) == []


def test_max_chars_must_be_positive():
    with pytest.raises(ValueError):
        chunk_recursive("abc", 0)


def test_separator_priority_prefers_blank_lines_over_newlines():
    # both splits are possible; the blank line must win
    text = "aa\nbb\n\ncc\ndd"
    assert chunk_recursive(text, 7) == ["aa\nbb", "cc\ndd"]


def test_sentence_boundary_preferred_over_plain_whitespace():
    text = "One two. Three four"
    assert chunk_recursive(text, 10) == ["One two.", "Three four"]


def test_adjacent_small_pieces_merge_with_their_separator():
    assert chunk_recursive("aa\n\nbb\n\ncc", 6) == ["aa\n\nbb", "cc"]


def test_whitespace_fallback():
    assert chunk_recursive("a b c d e f", 3) == ["a b", "c d", "e f"]


def _random_text(rng: random.Random) -> str:
    pieces = []
    for _ in range(rng.randint(0, 40)):
        roll = rng.random()
        if roll < 0.45:
            pieces.append("".join(rng.choices("abcdefg", k=rng.randint(1, 12))))
        elif roll < 0.6:
            pieces.append(rng.choice([" ", "  ", "\t"]))
        elif roll < 0.75:
            pieces.append(rng.choice(["\n", "\n\n", "\n\n\n"]))
        elif roll < 0.9:
            pieces.append(rng.choice([". ", "! ", "? ", ".\n"]))
        else:
            pieces.append(rng.choice(["µ", "é", "中文", "α-β"]))
    return "".join(pieces)


def test_reassembly_and_bound_properties():
    rng = random.Random(20240917)
    for _ in range(300):
        text = _random_text(rng)
        max_chars = rng.randint(1, 40)
        parts = chunk_recursive_parts(text, max_chars)
        assert "".join(piece for _, piece in parts) == text
        for kind, piece in parts:
            if kind == "chunk":
                assert 0 < len(piece) <= max_chars
        # the public view is exactly the chunk pieces, in order
        assert chunk_recursive(text, max_chars) == [
            piece for kind, piece in parts if kind == "chunk"
        ]


def test_unicode_counted_by_scalar_values_not_bytes():
    text = "ééééé"  # five scalars, ten utf-8 bytes
    assert chunk_recursive(text, 5) == [text]
    assert chunk_recursive(text, 2) == ["éé", "éé", "é"]


def test_determinism():
    text = _random_text(random.Random(7))
    assert chunk_recursive(text, 13) == chunk_recursive(text, 13)
