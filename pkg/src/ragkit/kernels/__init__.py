"""Hot scoring loops with a compiled fast path.

``_native`` is a Cython extension compiled at install time. When it is
missing (pure-Python install, RAGKIT_PURE=1 build) the numpy fallback in
``_python`` takes over with identical semantics. Set ``RAGKIT_KERNEL`` to
``native`` or ``python`` to force a backend; forcing ``native`` without
the extension raises at import.

Wrappers below normalize dtypes/contiguity so both backends see the same
operands. See ``benchmarks/bench_kernels.py`` for a speed comparison.
"""

from __future__ import annotations

import os

import numpy as np

from . import _python

_requested = os.environ.get("RAGKIT_KERNEL", "").strip().lower()
if _requested not in ("", "native", "python"):
    raise ImportError(f"RAGKIT_KERNEL must be 'native' or 'python', got {_requested!r}")

_impl = None
if _requested in ("", "native"):
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "native":
            raise ImportError(
                "RAGKIT_KERNEL=native but the compiled kernel extension is not built"
            ) from None
        _impl = None
if _impl is None:
    _impl = _python

BACKEND = "python" if _impl is _python else "native"


def backends() -> dict[str, object]:
    """Available kernel modules keyed by backend name."""
    out: dict[str, object] = {"python": _python}
    try:
        from . import _native  # type: ignore[attr-defined]

        out["native"] = _native
    except ImportError:
        pass
    return out


def bm25_accumulate(doc_ids, tfs, term_bounds, idfs, doc_lens, avgdl, k1, b, impl=None):
    """Dense BM25 scores for concatenated per-term postings slices."""
    impl = impl or _impl
    return impl.bm25_accumulate(
        np.ascontiguousarray(doc_ids, dtype=np.int32),
        np.ascontiguousarray(tfs, dtype=np.float64),
        np.ascontiguousarray(term_bounds, dtype=np.int64),
        np.ascontiguousarray(idfs, dtype=np.float64),
        np.ascontiguousarray(doc_lens, dtype=np.float64),
        float(avgdl),
        float(k1),
        float(b),
    )


def ip_scores(matrix, query, impl=None):
    """Inner product of each matrix row with the query vector."""
    impl = impl or _impl
    return impl.ip_scores(
        np.ascontiguousarray(matrix, dtype=np.float32),
        np.ascontiguousarray(query, dtype=np.float32),
    )


def l2sq_scores(matrix, query, impl=None):
    """Squared L2 distance of each matrix row to the query vector."""
    impl = impl or _impl
    return impl.l2sq_scores(
        np.ascontiguousarray(matrix, dtype=np.float32),
        np.ascontiguousarray(query, dtype=np.float32),
    )
