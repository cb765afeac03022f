"""Process model graphs: nodes, edges, and their JSON form.

Node types are the five modeling constructs (start event, end event,
activity, XOR gateway, AND gateway); edges are directed sequence flows
with optional labels and bendpoints. The JSON form lists nodes and edges
sorted by id so serialization is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .eventlog import ObjectType

NODE_TYPES = (
    ObjectType.START_EVENT,
    ObjectType.END_EVENT,
    ObjectType.ACTIVITY,
    ObjectType.XOR,
    ObjectType.AND,
)

GATEWAY_TYPES = (ObjectType.XOR, ObjectType.AND)


@dataclass(frozen=True)
class Node:
    id: str
    type: ObjectType
    label: str | None = None
    position: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.type not in NODE_TYPES:
            raise ValueError(f"invalid node type {self.type.value} for node {self.id}")


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    label: str | None = None
    bendpoints: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bendpoints", tuple(tuple(p) for p in self.bendpoints))


class ProcessModel:
    """A mutable directed graph of modeling constructs.

    Edge endpoints must exist as nodes. Parallel edges and self-loops are
    representable; whether they make sense is a question for validation
    stages further down the pipeline, not for the container.
    """

    def __init__(self, nodes=(), edges=()):
        self.nodes: dict[str, Node] = {}
        self.edges: dict[str, Edge] = {}
        for node in nodes:
            self.add_node(node)
        for edge in edges:
            self.add_edge(edge)

    # -- mutation ---------------------------------------------------------

    def add_node(self, node: Node):
        if node.id in self.nodes or node.id in self.edges:
            raise ValueError(f"duplicate object id {node.id}")
        self.nodes[node.id] = node

    def add_edge(self, edge: Edge):
        if edge.id in self.edges or edge.id in self.nodes:
            raise ValueError(f"duplicate object id {edge.id}")
        if edge.source not in self.nodes:
            raise ValueError(f"edge {edge.id} has unknown source {edge.source}")
        if edge.target not in self.nodes:
            raise ValueError(f"edge {edge.id} has unknown target {edge.target}")
        self.edges[edge.id] = edge

    def remove_node(self, node_id: str) -> list[str]:
        """Remove a node and every incident edge; returns removed edge ids."""
        if node_id not in self.nodes:
            raise KeyError(node_id)
        cascade = [
            eid
            for eid, e in self.edges.items()
            if e.source == node_id or e.target == node_id
        ]
        for eid in cascade:
            del self.edges[eid]
        del self.nodes[node_id]
        return cascade

    def remove_edge(self, edge_id: str):
        if edge_id not in self.edges:
            raise KeyError(edge_id)
        del self.edges[edge_id]

    def update_node(self, node_id: str, **changes) -> Node:
        node = replace(self.nodes[node_id], **changes)
        self.nodes[node_id] = node
        return node

    def update_edge(self, edge_id: str, **changes) -> Edge:
        edge = replace(self.edges[edge_id], **changes)
        self.edges[edge_id] = edge
        return edge

    # -- queries ----------------------------------------------------------

    def in_edges(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges.values() if e.target == node_id]

    def out_edges(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges.values() if e.source == node_id]

    def predecessors(self, node_id: str) -> list[str]:
        return [e.source for e in self.in_edges(node_id)]

    def successors(self, node_id: str) -> list[str]:
        return [e.target for e in self.out_edges(node_id)]

    def in_degree(self, node_id: str) -> int:
        return len(self.in_edges(node_id))

    def out_degree(self, node_id: str) -> int:
        return len(self.out_edges(node_id))

    def is_gateway(self, node_id: str) -> bool:
        return self.nodes[node_id].type in GATEWAY_TYPES

    def gateway_ids(self) -> list[str]:
        return sorted(n.id for n in self.nodes.values() if n.type in GATEWAY_TYPES)

    def nodes_of_type(self, node_type: ObjectType) -> list[Node]:
        return sorted(
            (n for n in self.nodes.values() if n.type is node_type),
            key=lambda n: n.id,
        )

    def copy(self) -> "ProcessModel":
        clone = ProcessModel()
        clone.nodes = dict(self.nodes)
        clone.edges = dict(self.edges)
        return clone

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProcessModel):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __repr__(self) -> str:
        return f"ProcessModel({len(self.nodes)} nodes, {len(self.edges)} edges)"

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "id": n.id,
                    "type": n.type.value,
                    "label": n.label,
                    "x": n.position[0],
                    "y": n.position[1],
                }
                for n in sorted(self.nodes.values(), key=lambda n: n.id)
            ],
            "edges": [
                {
                    "id": e.id,
                    "source": e.source,
                    "target": e.target,
                    "label": e.label,
                    "bendpoints": [list(p) for p in e.bendpoints],
                }
                for e in sorted(self.edges.values(), key=lambda e: e.id)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProcessModel":
        model = cls()
        for nd in data.get("nodes", []):
            model.add_node(
                Node(
                    id=nd["id"],
                    type=ObjectType(nd["type"]),
                    label=nd.get("label"),
                    position=(int(nd.get("x", 0)), int(nd.get("y", 0))),
                )
            )
        for ed in data.get("edges", []):
            model.add_edge(
                Edge(
                    id=ed["id"],
                    source=ed["source"],
                    target=ed["target"],
                    label=ed.get("label"),
                    bendpoints=tuple((int(x), int(y)) for x, y in ed.get("bendpoints", [])),
                )
            )
        return model

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("indent", 2)
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "ProcessModel":
        return cls.from_dict(json.loads(text))
