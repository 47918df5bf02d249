"""Sentence and token vectors behind a uniform provider interface.

Three providers: static word vectors with mean pooling, precomputed per-
sentence vectors from a JSON Lines file, and an HTTP embedding service.
All of them return an EmbeddingMatrix aligned with sentence indices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import requests

from .ingest import SentenceRecord, tokenize


class EmbeddingError(Exception):
    """Base class for provider failures."""


class TransportError(EmbeddingError):
    """The embedding service could not be reached or answered abnormally."""


class ContractViolationError(EmbeddingError):
    """A provider response broke the shape contract (e.g. dim mismatch)."""


class MissingVectorError(EmbeddingError):
    """A precomputed file has no vector for a requested sentence id."""


PROVIDER_KINDS = ("static-word-vectors", "precomputed-file", "external-service")


@dataclass(frozen=True)
class ProviderConfig:
    """Which provider to use and where it reads from.

    kind: one of PROVIDER_KINDS.  source: a vectors file, a JSONL file, or a
    service base URL.  pooling is fixed to "mean" for static vectors.
    """

    kind: str
    source: str
    pooling: str = "mean"

    def __post_init__(self) -> None:
        if self.kind not in PROVIDER_KINDS:
            raise ValueError(f"unknown provider kind: {self.kind!r}")
        if not self.source:
            raise ValueError("provider source is required")
        if self.kind == "static-word-vectors" and self.pooling != "mean":
            raise ValueError("static word vectors support mean pooling only")

    @classmethod
    def parse(cls, spec: str) -> "ProviderConfig":
        """Parse the CLI form "kind:source", e.g. "static-word-vectors:vecs.txt"."""
        kind, sep, source = spec.partition(":")
        if not sep:
            raise ValueError("provider spec must look like kind:source")
        return cls(kind=kind, source=source)


@dataclass(frozen=True)
class EmbeddingMatrix:
    """One dense vector per sentence, order-aligned with sentence indices.

    A row may be all zeros only when the matching `oov` flag is set (every
    token of that sentence was out of vocabulary).
    """

    dim: int
    vectors: np.ndarray
    oov: tuple[bool, ...] = field(default=())

    def __post_init__(self) -> None:
        vec = np.asarray(self.vectors, dtype=float)
        object.__setattr__(self, "vectors", vec)
        if vec.ndim != 2 or vec.shape[1] != self.dim:
            raise ValueError(f"expected shape (n, {self.dim}), got {vec.shape}")
        if not np.isfinite(vec).all():
            raise ValueError("embedding matrix contains non-finite values")
        oov = self.oov or tuple(False for _ in range(vec.shape[0]))
        if len(oov) != vec.shape[0]:
            raise ValueError("oov flags misaligned with vectors")
        object.__setattr__(self, "oov", tuple(oov))
        zero_rows = ~vec.any(axis=1)
        for i in np.flatnonzero(zero_rows):
            if not self.oov[i]:
                raise ValueError(f"zero vector at row {i} without OOV flag")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]


def cosine(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; 0 when either vector is zero."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    value = float(np.dot(u, v) / (nu * nv))
    return max(-1.0, min(1.0, value))


class StaticWordVectorProvider:
    """Plain-text word vectors, one `word v1 v2 ... vd` line per word.

    Sentence vectors are the mean of in-vocabulary token vectors; sentences
    whose tokens are all OOV get a zero vector with the OOV flag set.
    """

    kind = "static-word-vectors"

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.vocab: dict[str, np.ndarray] = {}
        dim: int | None = None
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                word, values = parts[0], parts[1:]
                if not values:
                    raise ValueError(f"{self.path}:{lineno}: no vector values")
                vec = np.array([float(x) for x in values], dtype=float)
                if dim is None:
                    dim = vec.size
                elif vec.size != dim:
                    raise ContractViolationError(
                        f"{self.path}:{lineno}: dimension {vec.size} != {dim}"
                    )
                self.vocab[word] = vec
        if dim is None:
            raise ValueError(f"{self.path}: empty vector file")
        self.dim = dim

    def embed_tokens(self, tokens: Sequence[str]) -> tuple[np.ndarray, list[bool]]:
        """Per-token vectors; OOV tokens map to zero with a flag."""
        out = np.zeros((len(tokens), self.dim))
        oov = [True] * len(tokens)
        for i, tok in enumerate(tokens):
            vec = self.vocab.get(tok)
            if vec is not None:
                out[i] = vec
                oov[i] = False
        return out, oov

    def embed_text(self, text: str) -> np.ndarray:
        """Mean-pooled vector for arbitrary text (used for MMR queries)."""
        vectors, oov = self.embed_tokens(tokenize(text))
        known = vectors[[not f for f in oov]]
        if known.size == 0:
            return np.zeros(self.dim)
        return known.mean(axis=0)

    def embed_sentences(self, sentences: Sequence[SentenceRecord]) -> EmbeddingMatrix:
        if not sentences:
            raise ValueError("no sentences to embed")
        rows = np.zeros((len(sentences), self.dim))
        flags = []
        for i, sent in enumerate(sentences):
            vectors, oov = self.embed_tokens(sent.tokens)
            known = vectors[[not f for f in oov]]
            if known.size == 0:
                flags.append(True)
            else:
                rows[i] = known.mean(axis=0)
                flags.append(False)
        return EmbeddingMatrix(dim=self.dim, vectors=rows, oov=tuple(flags))


class PrecomputedFileProvider:
    """Sentence vectors from a JSON Lines file.

    Each line is {"id": <sentence index>, "vector": [floats]}.  A line with
    id "query" may carry the title/query vector.
    """

    kind = "precomputed-file"

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.table: dict[object, np.ndarray] = {}
        dim: int | None = None
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(f"{self.path}:{lineno}: invalid JSON") from exc
                if "id" not in obj or "vector" not in obj:
                    raise ValueError(f"{self.path}:{lineno}: need id and vector")
                vec = np.asarray(obj["vector"], dtype=float)
                if dim is None:
                    dim = vec.size
                elif vec.size != dim:
                    raise ContractViolationError(
                        f"{self.path}:{lineno}: dimension {vec.size} != {dim}"
                    )
                self.table[obj["id"]] = vec
        if dim is None:
            raise ValueError(f"{self.path}: empty vector file")
        self.dim = dim

    def _lookup(self, key: object) -> np.ndarray:
        if key in self.table:
            return self.table[key]
        # JSON ids may be written as strings
        skey = str(key)
        if skey in self.table:
            return self.table[skey]
        raise MissingVectorError(f"{self.path}: no vector for id {key!r}")

    def embed_text(self, text: str) -> np.ndarray:
        try:
            return self._lookup("query")
        except MissingVectorError:
            raise MissingVectorError(
                f"{self.path}: no 'query' record (needed for MMR queries)"
            ) from None

    def embed_sentences(self, sentences: Sequence[SentenceRecord]) -> EmbeddingMatrix:
        if not sentences:
            raise ValueError("no sentences to embed")
        rows = np.stack([self._lookup(s.index) for s in sentences])
        flags = tuple(not rows[i].any() for i in range(rows.shape[0]))
        return EmbeddingMatrix(dim=self.dim, vectors=rows, oov=flags)


class ExternalServiceProvider:
    """Client for the HTTP embedding service.

    POSTs {"texts": [...], "granularity": "sentence"|"token"} to
    `<base_url>/embed` and validates the response shape.
    """

    kind = "external-service"

    def __init__(self, base_url: str, timeout: float = 30.0, batch_size: int = 64):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.batch_size = batch_size
        self._dim: int | None = None

    def _post(self, payload: dict) -> dict:
        try:
            resp = requests.post(
                f"{self.base_url}/embed", json=payload, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise TransportError(f"embed service unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(
                f"embed service returned HTTP {resp.status_code}: {resp.text[:200]}"
            )
        try:
            return resp.json()
        except ValueError as exc:
            raise ContractViolationError("embed service sent non-JSON body") from exc

    def _check_dim(self, dim: int) -> None:
        if self._dim is None:
            self._dim = dim
        elif dim != self._dim:
            raise ContractViolationError(
                f"service changed dimension: {dim} != {self._dim}"
            )

    def embed_texts(self, texts: Sequence[str]) -> np.ndarray:
        """Sentence-granularity vectors for raw texts, batched in order."""
        rows: list[list[float]] = []
        for start in range(0, len(texts), self.batch_size):
            batch = list(texts[start : start + self.batch_size])
            obj = self._post({"texts": batch, "granularity": "sentence"})
            if "dim" not in obj or "vectors" not in obj:
                raise ContractViolationError("response missing dim/vectors")
            self._check_dim(int(obj["dim"]))
            vectors = obj["vectors"]
            if len(vectors) != len(batch):
                raise ContractViolationError(
                    f"asked for {len(batch)} vectors, got {len(vectors)}"
                )
            for vec in vectors:
                if len(vec) != self._dim:
                    raise ContractViolationError("vector length != advertised dim")
                rows.append(vec)
        return np.asarray(rows, dtype=float)

    def embed_text(self, text: str) -> np.ndarray:
        return self.embed_texts([text])[0]

    def embed_sentences(self, sentences: Sequence[SentenceRecord]) -> EmbeddingMatrix:
        if not sentences:
            raise ValueError("no sentences to embed")
        rows = self.embed_texts([s.text for s in sentences])
        flags = tuple(not rows[i].any() for i in range(rows.shape[0]))
        return EmbeddingMatrix(dim=int(rows.shape[1]), vectors=rows, oov=flags)

    def embed_token_batch(
        self, texts: Sequence[str]
    ) -> list[tuple[list[str], np.ndarray, bool]]:
        """Token-granularity vectors: (tokens, matrix, truncated) per text."""
        out: list[tuple[list[str], np.ndarray, bool]] = []
        for start in range(0, len(texts), self.batch_size):
            batch = list(texts[start : start + self.batch_size])
            obj = self._post({"texts": batch, "granularity": "token"})
            for key in ("dim", "token_vectors", "truncated"):
                if key not in obj:
                    raise ContractViolationError(f"token response missing {key!r}")
            self._check_dim(int(obj["dim"]))
            vectors = obj["token_vectors"]
            tokens = obj.get("tokens", [[]] * len(batch))
            truncated = obj["truncated"]
            if not (len(vectors) == len(truncated) == len(batch)):
                raise ContractViolationError("token response misaligned with batch")
            for toks, mat, trunc in zip(tokens, vectors, truncated):
                arr = np.asarray(mat, dtype=float)
                if arr.size and arr.shape[1] != self._dim:
                    raise ContractViolationError("token vector length != dim")
                out.append((list(toks), arr, bool(trunc)))
        return out

    def health(self) -> dict:
        try:
            resp = requests.get(f"{self.base_url}/health", timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"embed service unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(f"health check returned HTTP {resp.status_code}")
        return resp.json()


Provider = StaticWordVectorProvider | PrecomputedFileProvider | ExternalServiceProvider


def make_provider(config: ProviderConfig) -> Provider:
    if config.kind == "static-word-vectors":
        return StaticWordVectorProvider(config.source)
    if config.kind == "precomputed-file":
        return PrecomputedFileProvider(config.source)
    return ExternalServiceProvider(config.source)


def embed_sentences(
    provider: Provider | ProviderConfig, sentences: Sequence[SentenceRecord]
) -> EmbeddingMatrix:
    """Embed sentences with a provider instance or straight from a config."""
    if isinstance(provider, ProviderConfig):
        provider = make_provider(provider)
    return provider.embed_sentences(sentences)


def token_embedder_from_static(provider: StaticWordVectorProvider):
    """Adapter turning a static provider into a token embedder for scoring:
    text -> (tokens, matrix, truncated)."""

    def embed(text: str):
        tokens = tokenize(text)
        vectors, _ = provider.embed_tokens(tokens)
        return tokens, vectors, False

    return embed
