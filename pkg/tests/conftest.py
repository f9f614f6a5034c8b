import pytest

from voicerag.backends import StubPacing, stub_backend_set
from voicerag.fixtures import make_structured_chunks
from voicerag.graph import build_graph
from voicerag.pipeline import PipelineConfig


@pytest.fixture(scope="session")
def fixture_graph():
    return build_graph(make_structured_chunks(num_docs=6, sentences_per_doc=30, seed=13, max_chars=40))


@pytest.fixture
def fast_backends():
    return stub_backend_set(pacing=StubPacing.unpaced())


@pytest.fixture
def fast_config():
    return PipelineConfig()
