"""Embedding providers behind a dual-encoder interface.

`mode` selects the query vs. passage encoder; symmetric providers ignore
it. The hash provider is fully deterministic (hashlib-seeded, no process
state) and exists so dense retrieval can be tested without model weights.
"""

from __future__ import annotations

import hashlib
import json
import re

import numpy as np
import requests

from .errors import ConfigError, EmbeddingProviderError
from .tokens import tokenize

MODES = ("query", "passage")


class HashEmbedder:
    """Seeded hash-projection embedder: same text, same vector, any machine.

    Each token maps to a unit-variance Gaussian vector drawn from an RNG
    seeded by blake2b(token, seed); a text embeds as the L2-normalized mean
    of its token vectors. With ``asymmetric=True`` the mode is mixed into
    the hash, giving distinct query/passage encoders.
    """

    def __init__(self, dim: int = 8, seed: int = 0, asymmetric: bool = False,
                 provider_id: str | None = None):
        if dim < 1:
            raise ConfigError(f"embedding dim must be >= 1, got {dim}")
        self.dim = dim
        self.seed = seed
        self.asymmetric = asymmetric
        self.provider_id = provider_id or self.default_id()

    def default_id(self) -> str:
        base = f"hash{self.dim}"
        if self.seed:
            base += f"@{self.seed}"
        if self.asymmetric:
            base += "-asym"
        return base

    def _token_vector(self, token: str, mode: str) -> np.ndarray:
        salt = f"{self.seed}:{mode if self.asymmetric else ''}:{token}"
        digest = hashlib.blake2b(salt.encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        return rng.standard_normal(self.dim)

    def embed(self, texts: list[str], mode: str) -> np.ndarray:
        if mode not in MODES:
            raise EmbeddingProviderError(
                f"unknown embedding mode {mode!r}", provider_id=self.provider_id
            )
        if not texts:
            raise EmbeddingProviderError(
                "embed() requires at least one text", provider_id=self.provider_id
            )
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            tokens = tokenize(text)
            if not tokens:
                continue
            acc = np.zeros(self.dim, dtype=np.float64)
            for token in tokens:
                acc += self._token_vector(token, mode)
            acc /= len(tokens)
            norm = np.linalg.norm(acc)
            if norm > 0:
                acc /= norm
            out[i] = acc
        return out.astype(np.float32)


class HTTPEmbedder:
    """Remote embedding service speaking the JSON wire contract.

    POST ``{"texts": [...], "mode": "query"|"passage"}`` and expect
    ``{"vectors": [[...], ...]}`` back.
    """

    def __init__(self, endpoint: str, provider_id: str | None = None,
                 dim: int | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.provider_id = provider_id or endpoint
        self.dim = dim
        self.timeout = timeout

    def embed(self, texts: list[str], mode: str) -> np.ndarray:
        if mode not in MODES:
            raise EmbeddingProviderError(
                f"unknown embedding mode {mode!r}", provider_id=self.provider_id
            )
        if not texts:
            raise EmbeddingProviderError(
                "embed() requires at least one text", provider_id=self.provider_id
            )
        payload = {"texts": list(texts), "mode": mode}
        try:
            resp = requests.post(self.endpoint, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise EmbeddingProviderError(
                f"embedding request to {self.endpoint} failed: {exc}",
                provider_id=self.provider_id,
                detail=str(exc),
            ) from exc
        if resp.status_code != 200:
            raise EmbeddingProviderError(
                f"embedding provider returned HTTP {resp.status_code}",
                provider_id=self.provider_id,
                detail=resp.text[:500],
            )
        try:
            vectors = resp.json()["vectors"]
        except (ValueError, KeyError) as exc:
            raise EmbeddingProviderError(
                "embedding response missing 'vectors'",
                provider_id=self.provider_id,
                detail=resp.text[:500],
            ) from exc
        arr = np.asarray(vectors, dtype=np.float32)
        if arr.ndim != 2 or arr.shape[0] != len(texts):
            raise EmbeddingProviderError(
                f"expected {len(texts)} vectors, got shape {arr.shape}",
                provider_id=self.provider_id,
            )
        if self.dim is not None and arr.shape[1] != self.dim:
            raise EmbeddingProviderError(
                f"expected dim {self.dim}, got {arr.shape[1]}",
                provider_id=self.provider_id,
            )
        return arr


_HASH_ID = re.compile(r"^hash(\d+)(?:@(\d+))?(-asym)?$")


def resolve_provider(spec: str | dict):
    """Build a provider from a self-describing id string or a config dict.

    Strings: ``hash<dim>``, ``hash<dim>@<seed>``, ``hash<dim>@<seed>-asym``,
    or an ``http(s)://`` endpoint URL. Dicts: ``{"kind": "hash", ...}`` or
    ``{"kind": "http", "endpoint": ...}``.
    """
    if isinstance(spec, str):
        match = _HASH_ID.match(spec)
        if match:
            return HashEmbedder(
                dim=int(match.group(1)),
                seed=int(match.group(2) or 0),
                asymmetric=bool(match.group(3)),
            )
        if spec.startswith(("http://", "https://")):
            return HTTPEmbedder(endpoint=spec)
        raise ConfigError(f"cannot resolve embedding provider {spec!r}")
    kind = spec.get("kind")
    if kind == "hash":
        return HashEmbedder(
            dim=int(spec.get("dim", 8)),
            seed=int(spec.get("seed", 0)),
            asymmetric=bool(spec.get("asymmetric", False)),
            provider_id=spec.get("id"),
        )
    if kind == "http":
        if "endpoint" not in spec:
            raise ConfigError("http embedding provider needs an 'endpoint'")
        return HTTPEmbedder(
            endpoint=spec["endpoint"],
            provider_id=spec.get("id"),
            dim=spec.get("dim"),
            timeout=float(spec.get("timeout", 30.0)),
        )
    raise ConfigError(f"unknown embedding provider kind {json.dumps(kind)}")
