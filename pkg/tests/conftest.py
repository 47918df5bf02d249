import json
from pathlib import Path

import pytest

from longsumm.embedding import ProviderConfig, StaticWordVectorProvider
from longsumm.ingest import load_document
from longsumm.pipeline import PipelineConfig

FIXTURES = Path(__file__).resolve().parent / "fixtures"
DOC_IDS = ("graphrank", "wordfuse", "speccluster")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def vectors_path() -> Path:
    return FIXTURES / "vectors.txt"


@pytest.fixture(scope="session")
def static_provider(vectors_path) -> StaticWordVectorProvider:
    return StaticWordVectorProvider(vectors_path)


@pytest.fixture(scope="session")
def corpus():
    return {
        doc_id: load_document(FIXTURES / "corpus" / f"{doc_id}.json")
        for doc_id in DOC_IDS
    }


@pytest.fixture()
def default_config(vectors_path) -> PipelineConfig:
    return PipelineConfig(
        provider=ProviderConfig(kind="static-word-vectors", source=str(vectors_path))
    )


@pytest.fixture(scope="session")
def golden_traces() -> dict:
    with (FIXTURES / "golden" / "traces.json").open(encoding="utf-8") as fh:
        return json.load(fh)
