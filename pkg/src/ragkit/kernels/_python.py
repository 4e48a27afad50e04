"""Pure-numpy scoring kernels; fallback when the extension is unavailable.

Semantics must match ``_native`` exactly: all accumulation in float64 over
the same operands, so both backends agree to floating-point noise.
"""

from __future__ import annotations

import numpy as np


def bm25_accumulate(doc_ids, tfs, term_bounds, idfs, doc_lens, avgdl, k1, b):
    """Sum per-term BM25 contributions into a dense score array.

    Postings for the query terms arrive concatenated: term ``t`` owns the
    slice ``term_bounds[t]:term_bounds[t+1]`` of `doc_ids`/`tfs`.
    """
    scores = np.zeros(doc_lens.shape[0], dtype=np.float64)
    for t in range(idfs.shape[0]):
        lo, hi = term_bounds[t], term_bounds[t + 1]
        docs = doc_ids[lo:hi]
        tf = tfs[lo:hi]
        denom = tf + k1 * (1.0 - b + b * doc_lens[docs] / avgdl)
        # a doc appears at most once per term, so fancy assignment is safe
        scores[docs] += idfs[t] * tf * (k1 + 1.0) / denom
    return scores


def ip_scores(matrix, query):
    """Inner product of every row of `matrix` with `query`, in float64."""
    return matrix.astype(np.float64) @ query.astype(np.float64)


def l2sq_scores(matrix, query):
    """Squared L2 distance of every row of `matrix` to `query`, in float64."""
    diff = matrix.astype(np.float64) - query.astype(np.float64)
    return np.einsum("ij,ij->i", diff, diff)
