"""Command-line surface: build indexes, run benchmarks, analyze records.

Exit codes: 0 success, 1 internal failure, 2 user/config error. Every
command is deterministic on unchanged inputs; reports carry no timestamps
(the run manifest does).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .benchmark.analyses import position_analysis, recall_curve, source_proportion
from .benchmark.runner import EvalRecord, average_score, evaluate_task
from .benchmark.tasks import load_task
from .config import (
    build_run_manifest,
    file_digest,
    load_config_file,
    parse_run_setup,
    config_hash,
)
from .corpus import DEFAULT_MAX_CHARS, SnippetStore, ingest_corpus, merge_stores
from .embeddings import resolve_provider
from .errors import RagkitError
from .retrieval.dense import build_vector_index
from .retrieval.engine import IndexSet
from .retrieval.lexical import DEFAULT_B, DEFAULT_K1, build_lexical_index


def _dump_json(obj, stream=None) -> None:
    json.dump(obj, stream or sys.stdout, ensure_ascii=False, indent=2, sort_keys=True)
    (stream or sys.stdout).write("\n")


def _write_rows(rows: list[dict], out: str | None) -> None:
    if out is None:
        _dump_json(rows)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".csv":
        fields: list[str] = []
        for row in rows:
            fields.extend(k for k in row if k not in fields)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            _dump_json(rows, fh)


# ---------------------------------------------------------------------------
# index / merge
# ---------------------------------------------------------------------------


def _build_and_save(store: SnippetStore, args) -> dict:
    indexes = IndexSet(
        store=store, lexical=build_lexical_index(store, k1=args.k1, b=args.b)
    )
    vector_info = []
    if args.embed_provider:
        provider = resolve_provider(args.embed_provider)
        vindex = build_vector_index(store, provider, metric=args.metric)
        indexes.add_vector_index(vindex)
        vector_info.append(
            {"provider_id": vindex.provider_id, "metric": vindex.metric, "dim": vindex.dim}
        )
    out = Path(args.out)
    indexes.save(out)
    return {
        "corpus_name": store.corpus_name,
        "total": len(store),
        "sources": store.manifest,
        "lexical": {"k1": args.k1, "b": args.b, "terms": len(indexes.lexical.terms)},
        "vectors": vector_info,
        "out": str(out),
    }


def cmd_index(args) -> int:
    store = ingest_corpus(args.corpus, args.name, args.chunking, max_chars=args.max_chars)
    _dump_json(_build_and_save(store, args))
    return 0


def cmd_merge(args) -> int:
    stores = [SnippetStore.load(path) for path in args.stores]
    merged = merge_stores(stores, args.name)
    _dump_json(_build_and_save(merged, args))
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _print_summary(reports) -> None:
    width = max(12, *(len(r.task_id) for r in reports))
    print(f"{'task':<{width}}  {'n':>6}  {'accuracy':>8}  {'std':>6}")
    for report in reports:
        print(
            f"{report.task_id:<{width}}  {report.n:>6}  "
            f"{report.accuracy:>8.2f}  {report.std:>6.2f}"
        )
    print(f"{'average':<{width}}  {'':>6}  {average_score(reports):>8.2f}")


def cmd_run(args) -> int:
    doc = load_config_file(args.config)
    setup = parse_run_setup(doc, k_override=args.k, backend_override=args.backend)
    config = setup.config

    providers = {
        key: resolve_provider({**cfg, "id": cfg.get("id", key)})
        for key, cfg in setup.providers.items()
    }
    indexes = None
    if config.k > 0:
        indexes = IndexSet.load(setup.store_path, providers)
        for leaf in config.retriever.leaves():
            if leaf.kind == "lexical":
                indexes.require_lexical()
            else:
                indexes.require_vector(leaf)

    task_paths = [Path(p) for p in args.task]
    tasks = [load_task(p) for p in task_paths]
    backend = setup.build_backend()

    reports = [evaluate_task(task, config, indexes, backend) for task in tasks]

    out_dir = Path(args.out) if args.out else Path("runs") / config_hash(config)[:12]
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    records_path = out_dir / "records.jsonl"

    with open(records_path, "w", encoding="utf-8") as fh:
        for report in reports:
            for record in report.records:
                row = {"task_id": report.task_id, **record.to_dict()}
                fh.write(json.dumps(row, ensure_ascii=False))
                fh.write("\n")

    report_doc = {
        "config": config.to_dict(),
        "tasks": [r.summary_dict() for r in reports],
        "average_accuracy": round(average_score(reports), 2),
    }
    with open(report_path, "w", encoding="utf-8") as fh:
        _dump_json(report_doc, fh)

    manifest = build_run_manifest(
        config,
        task_paths,
        setup.store_path,
        outputs={
            "report": file_digest(report_path),
            "records": file_digest(records_path),
        },
    )
    with open(out_dir / "run_manifest.json", "w", encoding="utf-8") as fh:
        _dump_json(manifest, fh)

    _print_summary(reports)
    print(f"wrote {report_path}")
    return 0


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _load_records(path: str) -> list[EvalRecord]:
    path = Path(path)
    if not path.exists():
        raise RagkitError(f"records file not found: {path}")
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(EvalRecord.from_dict(json.loads(line)))
    if not records:
        raise RagkitError(f"no records in {path}")
    return records


def _parse_int_list(raw: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise RagkitError(f"{flag} expects comma-separated integers, got {raw!r}") from None


def cmd_analyze(args) -> int:
    records = _load_records(args.records)
    if args.mode == "scaling":
        ks = _parse_int_list(args.ks, "--ks")
        rows = [p.to_dict() for p in recall_curve(records, ks, baseline=args.baseline)]
    elif args.mode == "position":
        if not args.bins:
            raise RagkitError("position mode needs --bins (comma-separated upper edges)")
        edges = _parse_int_list(args.bins, "--bins")
        rows = [b.to_dict() for b in position_analysis(records, edges)]
    else:  # proportion
        if not args.store:
            raise RagkitError("proportion mode needs --store (a snippet store directory)")
        manifest_path = Path(args.store) / "manifest.json"
        if not manifest_path.exists():
            raise RagkitError(f"no manifest.json under {args.store}")
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)["sources"]
        prop = source_proportion(records, manifest)
        rows = [
            {
                "source": src,
                "corpus_share": prop.corpus_shares[src],
                "retrieved_share": prop.retrieved_shares.get(src, 0.0),
            }
            for src in sorted(prop.corpus_shares)
        ]
    _write_rows(rows, args.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ragkit",
        description="Corpus indexing, retrieval-augmented QA runs, and analyses.",
    )
    parser.add_argument("--version", action="version", version=f"ragkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="ingest a corpus and build its indexes")
    p_index.add_argument("--corpus", required=True, help="JSONL file or directory")
    p_index.add_argument("--name", required=True, help="corpus/source name")
    p_index.add_argument(
        "--chunking", required=True, choices=("passthrough", "recursive", "hierarchical")
    )
    p_index.add_argument("--max-chars", type=int, default=DEFAULT_MAX_CHARS)
    p_index.add_argument("--embed-provider", default=None,
                         help="e.g. hash8, hash32@7, or an http(s) endpoint")
    p_index.add_argument("--metric", choices=("ip", "l2"), default="ip")
    p_index.add_argument("--k1", type=float, default=DEFAULT_K1)
    p_index.add_argument("--b", type=float, default=DEFAULT_B)
    p_index.add_argument("--out", required=True, help="output store directory")
    p_index.set_defaults(func=cmd_index)

    p_merge = sub.add_parser("merge", help="merge snippet stores into one corpus")
    p_merge.add_argument("--stores", nargs="+", required=True, help="store directories")
    p_merge.add_argument("--name", required=True, help="merged corpus name")
    p_merge.add_argument("--embed-provider", default=None)
    p_merge.add_argument("--metric", choices=("ip", "l2"), default="ip")
    p_merge.add_argument("--k1", type=float, default=DEFAULT_K1)
    p_merge.add_argument("--b", type=float, default=DEFAULT_B)
    p_merge.add_argument("--out", required=True)
    p_merge.set_defaults(func=cmd_merge)

    p_run = sub.add_parser("run", help="evaluate benchmark tasks per a config file")
    p_run.add_argument("--task", action="append", required=True, help="task JSON file")
    p_run.add_argument("--config", required=True, help="run config (.json or .toml)")
    p_run.add_argument("--k", type=int, default=None, help="override snippet count")
    p_run.add_argument("--backend", default=None, help="override backend id")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_an = sub.add_parser("analyze", help="post-hoc analyses over saved records")
    p_an.add_argument("--records", required=True, help="records.jsonl from a run")
    p_an.add_argument("--mode", required=True, choices=("scaling", "position", "proportion"))
    p_an.add_argument("--bins", default=None, help="position bin upper edges, e.g. 8,16")
    p_an.add_argument("--ks", default="1,2,4,8,16,32,64", help="ks for scaling mode")
    p_an.add_argument("--baseline", type=float, default=None,
                      help="no-retrieval baseline accuracy to overlay")
    p_an.add_argument("--store", default=None, help="store dir for proportion mode")
    p_an.add_argument("--out", default=None, help="write .json or .csv instead of stdout")
    p_an.set_defaults(func=cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RagkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
