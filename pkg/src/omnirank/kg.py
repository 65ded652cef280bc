"""In-memory property graph over platforms and their attribute entities.

Node types: platform, person, position, tag, nature, region. Edges connect
platforms to their attribute nodes (person/tag/nature/region) and persons to
positions. Officer strings may carry a "::position" suffix; everything after
the separator becomes the person's position node.
"""
from __future__ import annotations

import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .domain import PlatformRecord
from .errors import DataError

PLATFORM = "platform"
PERSON = "person"
POSITION = "position"
TAG = "tag"
NATURE = "nature"
REGION = "region"

NODE_TYPES = (PLATFORM, PERSON, POSITION, TAG, NATURE, REGION)
EDGE_TYPES = (
    (PLATFORM, PERSON),
    (PLATFORM, TAG),
    (PLATFORM, NATURE),
    (PLATFORM, REGION),
    (PERSON, POSITION),
)

OFFICER_POSITION_SEP = "::"

# attribute kinds whose absence counts as "basic information missing"
ATTRIBUTE_KINDS = (TAG, NATURE, REGION, PERSON)


def split_officer(raw: str) -> tuple[str, str | None]:
    if OFFICER_POSITION_SEP in raw:
        name, position = raw.split(OFFICER_POSITION_SEP, 1)
        return name, (position or None)
    return raw, None


@dataclass
class KnowledgeGraph:
    nodes: dict[str, set[str]] = field(default_factory=lambda: {t: set() for t in NODE_TYPES})
    edges: dict[tuple[str, str], set[tuple[str, str]]] = field(
        default_factory=lambda: {et: set() for et in EDGE_TYPES}
    )

    def add_node(self, ntype: str, node_id: str) -> None:
        if ntype not in self.nodes:
            raise DataError(f"unknown node type: {ntype}")
        self.nodes[ntype].add(node_id)

    def add_edge(self, src_type: str, src: str, dst_type: str, dst: str) -> None:
        etype = (src_type, dst_type)
        if etype not in self.edges:
            raise DataError(f"unknown edge type: {etype}")
        if src not in self.nodes[src_type] or dst not in self.nodes[dst_type]:
            raise DataError(f"dangling edge {src}->{dst} ({etype})")
        self.edges[etype].add((src, dst))

    def node_count(self) -> int:
        return sum(len(ids) for ids in self.nodes.values())

    def neighbors(self, platform_id: str, kind: str) -> set[str]:
        return {dst for src, dst in self.edges[(PLATFORM, kind)] if src == platform_id}

    def attribute_set(self, platform_id: str) -> set[tuple[str, str]]:
        """Typed attribute-neighbor set used for platform similarity."""
        out: set[tuple[str, str]] = set()
        for kind in ATTRIBUTE_KINDS:
            for src, dst in self.edges[(PLATFORM, kind)]:
                if src == platform_id:
                    out.add((kind, dst))
        return out

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "nodes": {t: sorted(ids) for t, ids in self.nodes.items()},
            "edges": {
                f"{a}-{b}": sorted([list(e) for e in pairs])
                for (a, b), pairs in self.edges.items()
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "KnowledgeGraph":
        graph = cls()
        try:
            for ntype, ids in data["nodes"].items():
                for node_id in ids:
                    graph.add_node(ntype, node_id)
            for key, pairs in data["edges"].items():
                src_type, dst_type = key.split("-", 1)
                for src, dst in pairs:
                    graph.add_edge(src_type, src, dst_type, dst)
        except (KeyError, ValueError) as exc:
            raise DataError(f"malformed graph payload: {exc}") from exc
        return graph


def kg_build(records: Sequence[PlatformRecord]) -> KnowledgeGraph:
    """One platform node per record; attribute nodes deduplicated by value."""
    graph = KnowledgeGraph()
    seen: set[str] = set()
    for record in records:
        if record.id in seen:
            raise DataError(f"duplicate platform id {record.id}")
        seen.add(record.id)
        graph.add_node(PLATFORM, record.id)
    # adjacency caches speed up the per-platform feature queries
    for record in records:
        tags = record.static_categorical.get("tags") or ()
        if isinstance(tags, str):
            tags = (tags,)
        for tag in tags:
            graph.add_node(TAG, tag)
            graph.add_edge(PLATFORM, record.id, TAG, tag)
        nature = record.static_categorical.get("nature")
        if nature:
            graph.add_node(NATURE, str(nature))
            graph.add_edge(PLATFORM, record.id, NATURE, str(nature))
        region = record.static_categorical.get("region")
        if region:
            graph.add_node(REGION, str(region))
            graph.add_edge(PLATFORM, record.id, REGION, str(region))
        for raw in record.officers:
            person, position = split_officer(raw)
            graph.add_node(PERSON, person)
            graph.add_edge(PLATFORM, record.id, PERSON, person)
            if position:
                graph.add_node(POSITION, position)
                graph.add_edge(PERSON, person, POSITION, position)
    return graph


def jaccard(a: set, b: set) -> float:
    if not a and not b:
        return 0.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


class GraphFeatureIndex:
    """Precomputed adjacency for repeated kg_features / similarity queries."""

    def __init__(self, graph: KnowledgeGraph):
        self.graph = graph
        self.attr_sets: dict[str, set[tuple[str, str]]] = defaultdict(set)
        self.persons: dict[str, set[str]] = defaultdict(set)
        self.regions: dict[str, set[str]] = defaultdict(set)
        for kind in ATTRIBUTE_KINDS:
            for src, dst in graph.edges[(PLATFORM, kind)]:
                self.attr_sets[src].add((kind, dst))
        for src, dst in graph.edges[(PLATFORM, PERSON)]:
            self.persons[src].add(dst)
        for src, dst in graph.edges[(PLATFORM, REGION)]:
            self.regions[src].add(dst)

    def features(self, platform_id: str, problem_ids: set[str]) -> list[float]:
        if platform_id not in self.graph.nodes[PLATFORM]:
            raise DataError(f"unknown platform id {platform_id}")
        attrs = self.attr_sets.get(platform_id, set())
        present_kinds = {kind for kind, _ in attrs}
        missing = float(len([k for k in ATTRIBUTE_KINDS if k not in present_kinds]))
        others = [p for p in problem_ids if p != platform_id and p in self.graph.nodes[PLATFORM]]
        max_sim = max((jaccard(attrs, self.attr_sets.get(p, set())) for p in others), default=0.0)
        my_persons = self.persons.get(platform_id, set())
        shared_officer = float(sum(1 for p in others if my_persons & self.persons.get(p, set())))
        my_regions = self.regions.get(platform_id, set())
        same_region = float(sum(1 for p in others if my_regions & self.regions.get(p, set())))
        return [missing, max_sim, shared_officer, same_region]

    def top_similar(self, platform_id: str, n: int = 5) -> list[tuple[str, float]]:
        if platform_id not in self.graph.nodes[PLATFORM]:
            raise DataError(f"unknown platform id {platform_id}")
        attrs = self.attr_sets.get(platform_id, set())
        scored = [
            (other, jaccard(attrs, self.attr_sets.get(other, set())))
            for other in self.graph.nodes[PLATFORM]
            if other != platform_id
        ]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored[:n]


def kg_features(graph: KnowledgeGraph, platform_id: str, problem_ids: set[str]) -> list[float]:
    """[missing attribute kinds, max Jaccard vs problem platforms,
    problems sharing an officer, problems sharing a region]."""
    return GraphFeatureIndex(graph).features(platform_id, problem_ids)


def save_graph(path: str, graph: KnowledgeGraph) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph.to_json(), fh, ensure_ascii=False, sort_keys=True)


def load_graph(path: str) -> KnowledgeGraph:
    if not os.path.exists(path):
        raise DataError(f"missing graph file: {path}")
    with open(path, encoding="utf-8") as fh:
        return KnowledgeGraph.from_json(json.load(fh))
