"""Server configuration: YAML file, environment overrides, validation.

Precedence: environment variable > config file value > built-in default.
Validation errors carry the dotted location of the offending key.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..backends.base import StubPacing
from ..backends.remote import RemoteEndpoints
from ..backends.stubs import DEFAULT_CHAR_DURATION
from ..errors import ConfigError
from ..pipeline.events import PipelineConfig

ENV_PREFIX = "VOICERAG_"

# env var suffix -> dotted config path
ENV_OVERRIDES = {
    "LISTEN": "listen",
    "GRAPH_PATH": "graph_path",
    "STATIC_DIR": "static_dir",
    "BACKEND_MODE": "backends.mode",
    "METRICS_RETENTION": "metrics_retention",
}


@dataclass
class BackendConfig:
    mode: str = "stub"
    pacing: StubPacing = field(default_factory=StubPacing)
    char_duration: float = DEFAULT_CHAR_DURATION
    remote: RemoteEndpoints = field(default_factory=RemoteEndpoints)


@dataclass
class ServerConfig:
    listen: str = "127.0.0.1:8765"
    graph_path: str = ""
    static_dir: str | None = None
    metrics_retention: int = 100
    cors_allow_origins: list[str] = field(default_factory=lambda: ["*"])
    backends: BackendConfig = field(default_factory=BackendConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def _require(mapping: dict, location: str) -> dict:
    if mapping is None:
        return {}
    if not isinstance(mapping, dict):
        raise ConfigError(location, f"expected a mapping, got {type(mapping).__name__}")
    return mapping


def _number(value, location: str, minimum=None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(location, f"expected a number, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(location, f"must be >= {minimum}, got {value}")
    return value


def _apply_env(doc: dict, env: dict) -> None:
    for suffix, dotted in ENV_OVERRIDES.items():
        raw = env.get(ENV_PREFIX + suffix)
        if raw is None:
            continue
        target = doc
        *parents, leaf = dotted.split(".")
        for parent in parents:
            target = target.setdefault(parent, {})
        target[leaf] = int(raw) if leaf == "metrics_retention" else raw


def parse_config(doc: dict, env: dict | None = None) -> ServerConfig:
    doc = dict(_require(doc, "<root>"))
    _apply_env(doc, env if env is not None else dict(os.environ))

    config = ServerConfig()

    listen = doc.get("listen", config.listen)
    if not isinstance(listen, str) or ":" not in listen:
        raise ConfigError("listen", f"expected host:port, got {listen!r}")
    try:
        port = int(listen.rsplit(":", 1)[1])
    except ValueError:
        raise ConfigError("listen", f"port is not an integer in {listen!r}") from None
    if not (0 <= port <= 65535):
        raise ConfigError("listen", f"port out of range: {port}")
    config.listen = listen

    graph_path = doc.get("graph_path", "")
    if graph_path and not isinstance(graph_path, str):
        raise ConfigError("graph_path", "expected a string path")
    config.graph_path = graph_path or ""

    static_dir = doc.get("static_dir")
    if static_dir is not None and not isinstance(static_dir, str):
        raise ConfigError("static_dir", "expected a string path or null")
    config.static_dir = static_dir

    retention = doc.get("metrics_retention", config.metrics_retention)
    config.metrics_retention = int(_number(retention, "metrics_retention", minimum=1))

    origins = doc.get("cors_allow_origins", config.cors_allow_origins)
    if not isinstance(origins, list) or not all(isinstance(o, str) for o in origins):
        raise ConfigError("cors_allow_origins", "expected a list of strings")
    config.cors_allow_origins = origins

    backends_doc = _require(doc.get("backends"), "backends")
    mode = backends_doc.get("mode", "stub")
    if mode not in ("stub", "remote"):
        raise ConfigError("backends.mode", f"expected 'stub' or 'remote', got {mode!r}")
    pacing_doc = _require(backends_doc.get("pacing"), "backends.pacing")
    pacing_defaults = StubPacing()
    pacing_values = {}
    for name in ("asr_rtf", "llm_rate", "tts_rtf", "frame_cost"):
        pacing_values[name] = _number(
            pacing_doc.get(name, getattr(pacing_defaults, name)),
            f"backends.pacing.{name}",
            minimum=0,
        )
    remote_doc = _require(backends_doc.get("remote"), "backends.remote")
    remote = RemoteEndpoints(
        asr_url=str(remote_doc.get("asr_url", "")),
        llm_url=str(remote_doc.get("llm_url", "")),
        tts_url=str(remote_doc.get("tts_url", "")),
        render_url=str(remote_doc.get("render_url", "")),
        structurer_url=str(remote_doc.get("structurer_url", "")),
        timeout=_number(remote_doc.get("timeout", 10.0), "backends.remote.timeout", minimum=0),
        voice=str(remote_doc.get("voice", "")),
    )
    config.backends = BackendConfig(
        mode=mode,
        pacing=StubPacing(**pacing_values),
        char_duration=_number(
            backends_doc.get("char_duration", DEFAULT_CHAR_DURATION),
            "backends.char_duration",
            minimum=0,
        ),
        remote=remote,
    )

    pipeline_doc = _require(doc.get("pipeline"), "pipeline")
    defaults = PipelineConfig()
    punctuation = pipeline_doc.get("sentence_punctuation")
    if punctuation is not None and (not isinstance(punctuation, str) or not punctuation):
        raise ConfigError("pipeline.sentence_punctuation", "expected a nonempty string")
    try:
        config.pipeline = PipelineConfig(
            sentence_punctuation=frozenset(punctuation) if punctuation else defaults.sentence_punctuation,
            sample_rate=int(_number(pipeline_doc.get("sample_rate", defaults.sample_rate),
                                    "pipeline.sample_rate", minimum=1)),
            target_fps=int(_number(pipeline_doc.get("target_fps", defaults.target_fps),
                                   "pipeline.target_fps", minimum=1)),
            queue_capacity=int(_number(pipeline_doc.get("queue_capacity", defaults.queue_capacity),
                                       "pipeline.queue_capacity", minimum=1)),
            retrieval_k=int(_number(pipeline_doc.get("retrieval_k", defaults.retrieval_k),
                                    "pipeline.retrieval_k", minimum=1)),
            retrieval_depth=int(_number(pipeline_doc.get("retrieval_depth", defaults.retrieval_depth),
                                        "pipeline.retrieval_depth", minimum=0)),
            prompt_budget_chars=int(_number(pipeline_doc.get("prompt_budget_chars",
                                                             defaults.prompt_budget_chars),
                                            "pipeline.prompt_budget_chars", minimum=1)),
        )
    except ValueError as exc:
        raise ConfigError("pipeline", str(exc)) from exc
    if config.pipeline.retrieval_depth not in (0, 1, 2):
        raise ConfigError("pipeline.retrieval_depth", "must be 0, 1 or 2")

    return config


def load_config(path: str | Path, env: dict | None = None) -> ServerConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        location = f"line {mark.line + 1}" if mark else "<file>"
        raise ConfigError(location, f"invalid YAML: {exc}") from exc
    return parse_config(doc, env=env)
