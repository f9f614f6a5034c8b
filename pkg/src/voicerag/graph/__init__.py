"""Knowledge graph: dedup, build, persistence, dual-level retrieval."""

from .build import build_graph, dedup_entities
from .model import (
    Entity,
    KnowledgeGraph,
    RelationEdge,
    entity_id_for,
    normalize_entity_name,
    structurally_equal,
)
from .retrieval import (
    DEFAULT_STOPWORDS,
    RetrievalContext,
    extract_keywords,
    format_context_prompt,
    retrieve_context,
)
from .storage import GRAPH_VERSION, graph_to_lines, load_graph, persist_graph

__all__ = [
    "DEFAULT_STOPWORDS",
    "Entity",
    "GRAPH_VERSION",
    "KnowledgeGraph",
    "RelationEdge",
    "RetrievalContext",
    "build_graph",
    "dedup_entities",
    "entity_id_for",
    "extract_keywords",
    "format_context_prompt",
    "graph_to_lines",
    "load_graph",
    "normalize_entity_name",
    "persist_graph",
    "retrieve_context",
    "structurally_equal",
]
