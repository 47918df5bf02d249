"""FastAPI app exposing the embedding contract.

POST /embed with {"texts": [...], "granularity": "sentence"|"token"}:
sentence granularity returns {"dim", "vectors", "empty"}, token granularity
returns {"dim", "token_vectors", "tokens", "truncated"}.  GET /health
reports the model id and dimension.

Replay mode serves previously recorded response bytes keyed by a canonical
hash of the request body, so clients see bit-identical payloads offline.
Record mode computes normally and writes those files.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel, Field

from .encoder import DEFAULT_MODEL, TinyTransformerEncoder

MODEL_ENV_VAR = "EMBED_SERVICE_MODEL"


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)
    granularity: Literal["sentence", "token"] = "sentence"


def canonical_request_key(payload: dict) -> str:
    """Stable hash of a request body, independent of key order."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _embed(model: TinyTransformerEncoder, request: EmbedRequest) -> dict:
    if request.granularity == "sentence":
        vectors = []
        empty = []
        for text in request.texts:
            vector, is_empty, _truncated = model.sentence_vector(text)
            vectors.append([float(x) for x in vector])
            empty.append(is_empty)
        return {"dim": model.dim, "vectors": vectors, "empty": empty}
    token_vectors = []
    tokens_out = []
    truncated = []
    for text in request.texts:
        tokens, matrix, trunc = model.token_vectors(text)
        tokens_out.append(tokens)
        token_vectors.append([[float(x) for x in row] for row in matrix])
        truncated.append(trunc)
    return {
        "dim": model.dim,
        "token_vectors": token_vectors,
        "tokens": tokens_out,
        "truncated": truncated,
    }


def create_app(
    model_id: str | None = None,
    replay_dir: str | Path | None = None,
    record_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service app.

    With `replay_dir` the model is never loaded; every request must match a
    recorded file.  With `record_dir` responses are computed and also written
    as replay fixtures.
    """
    if replay_dir is not None and record_dir is not None:
        raise ValueError("choose either replay or record, not both")
    app = FastAPI(title="embed-service")

    if replay_dir is not None:
        replay_path = Path(replay_dir)
        if not replay_path.is_dir():
            raise ValueError(f"replay directory {replay_path} does not exist")

        @app.get("/health")
        def health_replay() -> dict:
            dims = set()
            for fixture in replay_path.glob("*.json"):
                try:
                    dims.add(json.loads(fixture.read_text())["dim"])
                except (ValueError, KeyError):
                    continue
            dim = dims.pop() if len(dims) == 1 else None
            return {"status": "ok", "model": "replay", "dim": dim}

        @app.post("/embed")
        def embed_replay(request: EmbedRequest) -> Response:
            key = canonical_request_key(request.model_dump())
            fixture = replay_path / f"{key}.json"
            if not fixture.exists():
                raise HTTPException(
                    status_code=404, detail=f"no recorded response for {key}"
                )
            return Response(
                content=fixture.read_bytes(), media_type="application/json"
            )

        return app

    resolved = model_id or os.environ.get(MODEL_ENV_VAR) or DEFAULT_MODEL
    model = TinyTransformerEncoder(resolved)
    record_path = Path(record_dir) if record_dir is not None else None
    if record_path is not None:
        record_path.mkdir(parents=True, exist_ok=True)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "model": model.model_id, "dim": model.dim}

    @app.post("/embed")
    def embed(request: EmbedRequest) -> Response:
        body = _embed(model, request)
        payload = json.dumps(body).encode("utf-8")
        if record_path is not None:
            key = canonical_request_key(request.model_dump())
            (record_path / f"{key}.json").write_bytes(payload)
        return Response(content=payload, media_type="application/json")

    return app


def record_fixtures(
    requests: list[dict],
    out_dir: str | Path,
    model_id: str | None = None,
) -> list[str]:
    """Compute and store replay fixtures for the given request bodies without
    running a server.  Returns the fixture keys in request order."""
    model = TinyTransformerEncoder(model_id or DEFAULT_MODEL)
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    keys = []
    for raw in requests:
        request = EmbedRequest(**raw)
        body = _embed(model, request)
        key = canonical_request_key(request.model_dump())
        (out_path / f"{key}.json").write_bytes(json.dumps(body).encode("utf-8"))
        keys.append(key)
    return keys
