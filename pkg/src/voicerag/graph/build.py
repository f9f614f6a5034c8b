"""Entity deduplication and graph construction from structured chunks."""

from __future__ import annotations

from ..corpus.models import EntityMention, EntityType, ReviewState, StructuredChunk
from ..errors import GraphIntegrityError
from .model import Entity, KnowledgeGraph, RelationEdge, entity_id_for, normalize_entity_name

MergeKey = tuple[str, EntityType]


def dedup_entities(
    mentions: list[tuple[EntityMention, str]],
) -> tuple[dict[str, Entity], dict[MergeKey, str]]:
    """Group mentions by (normalized surface, type) into canonical entities.

    Returns the entity table keyed by entity_id and the merge map keyed by
    (normalized surface, type). Surfaces that normalize alike merge; equal
    surfaces with different types stay distinct. Order-independent: ids are
    content hashes and all collections are sets.
    """
    entities: dict[str, Entity] = {}
    merge_map: dict[MergeKey, str] = {}
    for mention, chunk_id in mentions:
        canonical = normalize_entity_name(mention.surface)
        key = (canonical, mention.entity_type)
        eid = merge_map.get(key)
        if eid is None:
            eid = entity_id_for(canonical, mention.entity_type)
            merge_map[key] = eid
            entities[eid] = Entity(
                entity_id=eid,
                canonical_name=canonical,
                entity_type=mention.entity_type,
                aliases=set(),
                chunk_refs=set(),
            )
        entity = entities[eid]
        entity.aliases.add(mention.surface)
        entity.chunk_refs.add(chunk_id)
    return entities, merge_map


def build_graph(
    chunks: list[StructuredChunk], require_accepted: bool = True
) -> KnowledgeGraph:
    """Assemble the knowledge graph from (by default) Accepted chunks.

    Relation endpoints resolve through each chunk's own entity mentions, so
    a relation naming an undeclared surface raises GraphIntegrityError.
    Edges with an equal (subject, predicate, object) triple merge, unioning
    chunk provenance; the edge list is sorted by triple, which together with
    content-hash ids makes the build independent of chunk order.
    """
    admitted = [
        c for c in chunks if not require_accepted or c.status.state is ReviewState.Accepted
    ]

    mentions: list[tuple[EntityMention, str]] = []
    for chunk in admitted:
        for mention in chunk.entities:
            mentions.append((mention, chunk.chunk_id))
    entities, merge_map = dedup_entities(mentions)

    edge_table: dict[tuple[str, str, str], set[str]] = {}
    for chunk in admitted:
        # Surface → type lookup local to this chunk; first declaration wins.
        local: dict[str, EntityType] = {}
        for mention in chunk.entities:
            local.setdefault(mention.surface, mention.entity_type)
        for relation in chunk.relations:
            endpoint_ids = []
            for surface in (relation.subject_surface, relation.object_surface):
                etype = local.get(surface)
                if etype is None:
                    raise GraphIntegrityError(
                        chunk.chunk_id,
                        f"relation references undeclared entity surface {surface!r}",
                    )
                endpoint_ids.append(merge_map[(normalize_entity_name(surface), etype)])
            triple = (endpoint_ids[0], relation.predicate, endpoint_ids[1])
            edge_table.setdefault(triple, set()).add(chunk.chunk_id)

    edges = [
        RelationEdge(subject_id=s, predicate=p, object_id=o, chunk_refs=refs)
        for (s, p, o), refs in sorted(edge_table.items())
    ]

    graph = KnowledgeGraph(
        entities=entities,
        edges=edges,
        chunk_index={c.chunk_id: c for c in admitted},
    )
    graph.rebuild_adjacency()
    return graph
