"""Knowledge graph data model: deduplicated entities, typed edges,
chunk provenance index, adjacency."""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass, field

from ..corpus.models import EntityType, StructuredChunk


def normalize_entity_name(surface: str) -> str:
    """Canonical-composition normalize, trim, collapse whitespace runs.

    Idempotent; empty input yields empty output.
    """
    return " ".join(unicodedata.normalize("NFC", surface).split())


def entity_id_for(canonical_name: str, entity_type: EntityType) -> str:
    digest = hashlib.sha256(f"{canonical_name}\x1f{entity_type.value}".encode("utf-8")).hexdigest()
    return "e" + digest[:16]


@dataclass
class Entity:
    entity_id: str
    canonical_name: str
    entity_type: EntityType
    aliases: set[str] = field(default_factory=set)
    chunk_refs: set[str] = field(default_factory=set)


@dataclass
class RelationEdge:
    subject_id: str
    predicate: str
    object_id: str
    chunk_refs: set[str] = field(default_factory=set)

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.subject_id, self.predicate, self.object_id)


@dataclass
class KnowledgeGraph:
    entities: dict[str, Entity] = field(default_factory=dict)
    edges: list[RelationEdge] = field(default_factory=list)
    chunk_index: dict[str, StructuredChunk] = field(default_factory=dict)
    adjacency: dict[str, set[int]] = field(default_factory=dict)

    def rebuild_adjacency(self) -> None:
        self.adjacency = {eid: set() for eid in self.entities}
        for i, edge in enumerate(self.edges):
            # setdefault keeps dangling endpoints visible to check_integrity
            self.adjacency.setdefault(edge.subject_id, set()).add(i)
            self.adjacency.setdefault(edge.object_id, set()).add(i)

    def degree(self, entity_id: str) -> int:
        return len(self.adjacency.get(entity_id, ()))

    def neighbors(self, entity_id: str) -> set[str]:
        out: set[str] = set()
        for i in self.adjacency.get(entity_id, ()):
            edge = self.edges[i]
            out.add(edge.object_id if edge.subject_id == entity_id else edge.subject_id)
        return out

    def check_integrity(self) -> list[str]:
        """Referential-integrity problems; empty list means consistent."""
        problems: list[str] = []
        for edge in self.edges:
            for eid in (edge.subject_id, edge.object_id):
                if eid not in self.entities:
                    problems.append(f"edge {edge.triple} references unknown entity {eid}")
            for cid in edge.chunk_refs:
                if cid not in self.chunk_index:
                    problems.append(f"edge {edge.triple} references unknown chunk {cid}")
        for entity in self.entities.values():
            if not entity.chunk_refs:
                problems.append(f"entity {entity.entity_id} has no chunk refs")
            for cid in entity.chunk_refs:
                if cid not in self.chunk_index:
                    problems.append(f"entity {entity.entity_id} references unknown chunk {cid}")
            expected = entity_id_for(entity.canonical_name, entity.entity_type)
            if entity.entity_id != expected:
                problems.append(f"entity {entity.entity_id} id mismatch for {entity.canonical_name}")
        expected_adj = {eid: set() for eid in self.entities}
        for i, edge in enumerate(self.edges):
            if edge.subject_id in expected_adj:
                expected_adj[edge.subject_id].add(i)
            if edge.object_id in expected_adj:
                expected_adj[edge.object_id].add(i)
        if expected_adj != self.adjacency:
            problems.append("adjacency inconsistent with edge list")
        return problems


def structurally_equal(a: KnowledgeGraph, b: KnowledgeGraph) -> bool:
    """Equality on content: entities, edge multiset, chunk ids, adjacency."""
    if set(a.entities) != set(b.entities):
        return False
    for eid, ent in a.entities.items():
        other = b.entities[eid]
        if (
            ent.canonical_name != other.canonical_name
            or ent.entity_type != other.entity_type
            or ent.aliases != other.aliases
            or ent.chunk_refs != other.chunk_refs
        ):
            return False
    key = lambda e: (e.subject_id, e.predicate, e.object_id)
    a_edges = sorted(a.edges, key=key)
    b_edges = sorted(b.edges, key=key)
    if len(a_edges) != len(b_edges):
        return False
    for x, y in zip(a_edges, b_edges):
        if key(x) != key(y) or x.chunk_refs != y.chunk_refs:
            return False
    if set(a.chunk_index) != set(b.chunk_index):
        return False
    return True
