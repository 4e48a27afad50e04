#!/usr/bin/env python3
"""Compare the compiled scoring kernels against the numpy fallback.

Synthesizes a BM25 postings workload and a dense scan workload at a scale
where the inner loops dominate, then reports per-query latency for every
available backend.

    python benchmarks/bench_kernels.py --docs 200000 --dim 64
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ragkit import kernels


def _bm25_workload(rng, n_docs: int, n_terms: int, postings_per_term: int):
    doc_lens = rng.integers(20, 400, size=n_docs).astype(np.float64)
    bounds = np.arange(n_terms + 1, dtype=np.int64) * postings_per_term
    docs = rng.integers(0, n_docs, size=n_terms * postings_per_term).astype(np.int32)
    tfs = rng.integers(1, 8, size=n_terms * postings_per_term).astype(np.float64)
    idfs = rng.uniform(0.1, 4.0, size=n_terms)
    return docs, tfs, bounds, idfs, doc_lens, float(doc_lens.mean()), 0.9, 0.4


def _time(fn, repeats: int) -> float:
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=200_000)
    parser.add_argument("--terms", type=int, default=8, help="query terms for BM25")
    parser.add_argument("--postings", type=int, default=50_000, help="postings per term")
    parser.add_argument("--vectors", type=int, default=100_000)
    parser.add_argument("--dim", type=int, default=64)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    impls = kernels.backends()
    print(f"backends available: {', '.join(sorted(impls))} (selected: {kernels.BACKEND})")

    rng = np.random.default_rng(7)
    bm25_args = _bm25_workload(rng, args.docs, args.terms, args.postings)
    matrix = rng.standard_normal((args.vectors, args.dim)).astype(np.float32)
    query = rng.standard_normal(args.dim).astype(np.float32)

    rows = []
    for name, impl in sorted(impls.items()):
        bm25_s = _time(lambda: kernels.bm25_accumulate(*bm25_args, impl=impl), args.repeats)
        ip_s = _time(lambda: kernels.ip_scores(matrix, query, impl=impl), args.repeats)
        l2_s = _time(lambda: kernels.l2sq_scores(matrix, query, impl=impl), args.repeats)
        rows.append((name, bm25_s, ip_s, l2_s))

    print(
        f"\nworkload: bm25 {args.terms}x{args.postings} postings over {args.docs} docs; "
        f"dense scan {args.vectors}x{args.dim}"
    )
    print(f"{'backend':<10} {'bm25 ms':>10} {'ip ms':>10} {'l2 ms':>10}")
    for name, bm25_s, ip_s, l2_s in rows:
        print(f"{name:<10} {bm25_s * 1e3:>10.2f} {ip_s * 1e3:>10.2f} {l2_s * 1e3:>10.2f}")

    if len(rows) == 2:
        by_name = {name: (b, i, l) for name, b, i, l in rows}
        py, nat = by_name["python"], by_name["native"]
        print(
            f"{'speedup':<10} {py[0] / nat[0]:>9.1f}x {py[1] / nat[1]:>9.1f}x "
            f"{py[2] / nat[2]:>9.1f}x"
        )


if __name__ == "__main__":
    main()
