"""Kernel backend parity: compiled extension vs. numpy fallback."""

from __future__ import annotations

import random

import numpy as np
import pytest

from ragkit import kernels


def test_a_backend_is_selected():
    assert kernels.BACKEND in ("native", "python")
    assert "python" in kernels.backends()


def _random_bm25_inputs(rng):
    n_docs = rng.randint(1, 120)
    n_terms = rng.randint(1, 8)
    doc_lens = np.asarray([rng.randint(1, 40) for _ in range(n_docs)], dtype=np.float64)
    bounds = [0]
    docs, tfs = [], []
    for _ in range(n_terms):
        posting_docs = sorted(rng.sample(range(n_docs), k=rng.randint(0, min(10, n_docs))))
        docs.extend(posting_docs)
        tfs.extend(rng.randint(1, 5) for _ in posting_docs)
        bounds.append(len(docs))
    idfs = np.asarray([rng.uniform(0.01, 3.0) for _ in range(n_terms)])
    return (
        np.asarray(docs, dtype=np.int32),
        np.asarray(tfs, dtype=np.float64),
        np.asarray(bounds, dtype=np.int64),
        idfs,
        doc_lens,
        float(doc_lens.mean()),
        0.9,
        0.4,
    )


def test_bm25_hand_value_both_backends():
    # one doc "a a", one doc "b"; query term "a": idf=ln2, tf=2, dl=2, avgdl=1.5
    args = (
        np.asarray([0], dtype=np.int32),
        np.asarray([2.0]),
        np.asarray([0, 1], dtype=np.int64),
        np.asarray([np.log(2.0)]),
        np.asarray([2.0, 1.0]),
        1.5,
        0.9,
        0.4,
    )
    expected = np.log(2) * (2 * 1.9) / (2 + 0.9 * (0.6 + 0.4 * (2 / 1.5)))
    for impl in kernels.backends().values():
        scores = kernels.bm25_accumulate(*args, impl=impl)
        assert scores[0] == pytest.approx(expected, abs=1e-12)
        assert scores[1] == 0.0


def test_backend_parity_bm25():
    impls = kernels.backends()
    if "native" not in impls:
        pytest.skip("compiled kernel not built")
    rng = random.Random(13)
    for _ in range(50):
        args = _random_bm25_inputs(rng)
        a = kernels.bm25_accumulate(*args, impl=impls["python"])
        b = kernels.bm25_accumulate(*args, impl=impls["native"])
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)


def test_backend_parity_dense():
    impls = kernels.backends()
    if "native" not in impls:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(77)
    for _ in range(25):
        n, dim = int(rng.integers(1, 150)), int(rng.integers(1, 24))
        matrix = rng.standard_normal((n, dim)).astype(np.float32)
        query = rng.standard_normal(dim).astype(np.float32)
        np.testing.assert_allclose(
            kernels.ip_scores(matrix, query, impl=impls["python"]),
            kernels.ip_scores(matrix, query, impl=impls["native"]),
            rtol=1e-10, atol=1e-10,
        )
        np.testing.assert_allclose(
            kernels.l2sq_scores(matrix, query, impl=impls["python"]),
            kernels.l2sq_scores(matrix, query, impl=impls["native"]),
            rtol=1e-10, atol=1e-10,
        )


def test_dense_kernels_hand_values():
    matrix = np.asarray([[1.0, 0.0], [0.5, 0.5]], dtype=np.float32)
    query = np.asarray([1.0, 0.0], dtype=np.float32)
    for impl in kernels.backends().values():
        np.testing.assert_allclose(
            kernels.ip_scores(matrix, query, impl=impl), [1.0, 0.5]
        )
        np.testing.assert_allclose(
            kernels.l2sq_scores(matrix, query, impl=impl), [0.0, 0.5]
        )
