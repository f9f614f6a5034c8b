"""Gateway: wire protocol, ratings, config, HTTP/WS server, bench, CLI."""

from .config import BackendConfig, ServerConfig, load_config, parse_config
from .ratings import RatingDimension, RatingRecord, aggregate_ratings, radar_export, validate_rating
from .wire import HELLO, PROTOCOL_VERSION, WireEvent, decode_audio_payload, decode_wire_event, encode_event

__all__ = [
    "BackendConfig",
    "HELLO",
    "PROTOCOL_VERSION",
    "RatingDimension",
    "RatingRecord",
    "ServerConfig",
    "WireEvent",
    "aggregate_ratings",
    "decode_audio_payload",
    "decode_wire_event",
    "encode_event",
    "load_config",
    "parse_config",
    "radar_export",
    "validate_rating",
]
