from pathlib import Path

import pytest

from slrank.corpus import ingest
from slrank.embeddings import ModelRegistry, load_text_model
from slrank.pipeline import PipelineConfig, default_lemma_dictionary

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def config() -> PipelineConfig:
    return PipelineConfig()


@pytest.fixture(scope="session")
def dictionary():
    return default_lemma_dictionary()


@pytest.fixture(scope="session")
def toy_model():
    return load_text_model(str(FIXTURES / "models" / "toy-a.txt"), "toy-a")


@pytest.fixture(scope="session")
def toy_model_scaled():
    return load_text_model(str(FIXTURES / "models" / "toy-b.txt"), "toy-b")


@pytest.fixture(scope="session")
def registry(toy_model, toy_model_scaled) -> ModelRegistry:
    return ModelRegistry([toy_model, toy_model_scaled])


@pytest.fixture(scope="session")
def fixture_corpus(config, dictionary):
    return ingest(str(FIXTURES / "records.jsonl"), config, dictionary)


@pytest.fixture(scope="session")
def questions() -> list[str]:
    text = (FIXTURES / "questions.txt").read_text("utf-8")
    return [line for line in text.splitlines() if line.strip()]


@pytest.fixture(scope="session")
def seed_text() -> str:
    return (FIXTURES / "seed.txt").read_text("utf-8").strip()
