"""Config parsing, env overrides, precise error locations."""

import pytest

from voicerag.errors import ConfigError
from voicerag.gateway import load_config, parse_config


def test_defaults_from_empty_document():
    config = parse_config({}, env={})
    assert config.listen == "127.0.0.1:8765"
    assert config.backends.mode == "stub"
    assert config.backends.pacing.llm_rate == pytest.approx(36.79)
    assert config.pipeline.sample_rate == 16000
    assert config.pipeline.target_fps == 25
    assert config.pipeline.queue_capacity == 64


def test_file_round_trip(tmp_path):
    path = tmp_path / "server.yaml"
    path.write_text(
        """
listen: "0.0.0.0:9001"
graph_path: fixture.graph
metrics_retention: 10
backends:
  mode: stub
  pacing: {llm_rate: 10.0}
  char_duration: 0.1
pipeline:
  queue_capacity: 8
  retrieval_k: 3
""",
        encoding="utf-8",
    )
    config = load_config(path, env={})
    assert config.port == 9001
    assert config.backends.pacing.llm_rate == 10.0
    assert config.backends.pacing.tts_rtf == pytest.approx(0.27448)  # default kept
    assert config.backends.char_duration == 0.1
    assert config.pipeline.queue_capacity == 8
    assert config.pipeline.retrieval_k == 3


def test_env_overrides_file(tmp_path):
    path = tmp_path / "server.yaml"
    path.write_text('listen: "127.0.0.1:9001"\ngraph_path: from_file.graph\n', encoding="utf-8")
    env = {"VOICERAG_LISTEN": "127.0.0.1:9002", "VOICERAG_GRAPH_PATH": "from_env.graph"}
    config = load_config(path, env=env)
    assert config.port == 9002
    assert config.graph_path == "from_env.graph"


@pytest.mark.parametrize(
    "doc,location",
    [
        ({"listen": "nocolon"}, "listen"),
        ({"listen": "host:notaport"}, "listen"),
        ({"metrics_retention": 0}, "metrics_retention"),
        ({"backends": {"mode": "gpu"}}, "backends.mode"),
        ({"backends": {"pacing": {"llm_rate": -1}}}, "backends.pacing.llm_rate"),
        ({"pipeline": {"queue_capacity": 0}}, "pipeline.queue_capacity"),
        ({"pipeline": {"retrieval_depth": 3}}, "pipeline.retrieval_depth"),
        ({"pipeline": {"sentence_punctuation": ""}}, "pipeline.sentence_punctuation"),
        ({"cors_allow_origins": "star"}, "cors_allow_origins"),
    ],
)
def test_validation_reports_location(doc, location):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc, env={})
    assert exc.value.location == location


def test_invalid_yaml_reports_line(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("listen: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path, env={})
