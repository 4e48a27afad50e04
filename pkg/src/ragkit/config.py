"""Run configuration files, hashing, and the run manifest.

A single JSON (or, on Python 3.11+, TOML) file mirrors RunConfig and names
the backends and embedding providers; CLI flags override individual
fields. Secrets are only ever referenced by environment-variable name.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ImportError:
    tomllib = None

from . import __version__
from .errors import ConfigError
from .generation.backends import Backend, GenerationParams, make_backend
from .retrieval.engine import RetrieverSpec
from .benchmark.runner import RunConfig


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix.lower() == ".toml":
        if tomllib is None:
            raise ConfigError(
                "TOML config files need Python >= 3.11; use the JSON form instead"
            )
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc


@dataclass
class RunSetup:
    """Everything cmd_run needs: resolved config plus registries."""

    store_path: Path
    config: RunConfig
    backends: dict[str, dict]
    providers: dict[str, dict]

    def build_backend(self) -> Backend:
        backend_id = self.config.backend_id
        cfg = self.backends.get(backend_id)
        if cfg is None:
            raise ConfigError(f"config defines no backend named {backend_id!r}")
        return make_backend(backend_id, cfg)


def parse_run_setup(
    doc: dict,
    k_override: int | None = None,
    backend_override: str | None = None,
) -> RunSetup:
    corpus = doc.get("corpus")
    if not isinstance(corpus, dict) or "store" not in corpus:
        raise ConfigError("config needs a [corpus] section with a 'store' path")
    run = doc.get("run", {})
    if not isinstance(run, dict):
        raise ConfigError("config [run] section must be an object")

    retriever_doc = doc.get("retriever")
    retriever = RetrieverSpec.from_dict(retriever_doc) if retriever_doc else None

    gen_doc = doc.get("generation", {})
    generation = GenerationParams(
        temperature=float(gen_doc.get("temperature", 0.0)),
        max_tokens=int(gen_doc.get("max_tokens", 1024)),
        context_token_budget=int(gen_doc.get("context_token_budget", 8192)),
    )

    k = int(run.get("k", 32)) if k_override is None else k_override
    backend_id = run.get("backend") if backend_override is None else backend_override
    if not backend_id:
        raise ConfigError("config [run] section needs a 'backend' id")

    config = RunConfig(
        corpus_name=str(corpus.get("name", Path(corpus["store"]).name)),
        retriever=retriever,
        k=k,
        template_id=str(run.get("template", "rag" if k > 0 else "cot")),
        backend_id=str(backend_id),
        generation=generation,
        context_order=str(run.get("context_order", "rank_asc")),
        seed=int(run.get("seed", 0)),
    )
    config.validate()
    return RunSetup(
        store_path=Path(corpus["store"]),
        config=config,
        backends=dict(doc.get("backends", {})),
        providers=dict(doc.get("providers", {})),
    )


def canonical_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def config_hash(config: RunConfig) -> str:
    return hashlib.sha256(canonical_json(config.to_dict()).encode("utf-8")).hexdigest()


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def tree_digest(root: str | Path) -> str:
    """Digest of a directory: file names and contents, order-independent."""
    root = Path(root)
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(path.relative_to(root)).encode("utf-8"))
        digest.update(b"\0")
        digest.update(bytes.fromhex(file_digest(path)))
    return digest.hexdigest()


def build_run_manifest(
    config: RunConfig,
    task_paths: list[Path],
    store_path: Path,
    outputs: dict[str, str],
) -> dict:
    return {
        "config_hash": config_hash(config),
        "config": config.to_dict(),
        "tool_version": __version__,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "inputs": {
            "tasks": {str(p): file_digest(p) for p in task_paths},
            "store": {str(store_path): tree_digest(store_path)},
        },
        "outputs": outputs,
    }
