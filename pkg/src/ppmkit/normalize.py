"""Normalize sloppy BPMN-subset models into well-formed ones.

Modelers forget start and end events, draw several of them, or hang two
flows off one activity. These repairs make such models translatable to a
workflow net, inserting fresh events and gateways only where the drawing
strongly hints at what was meant: when all the flows being bundled lead to
(or come from) one common gateway, the inserted gateway copies its kind,
otherwise a conservative default applies. A gateway that both joins and
splits (2+ in and 2+ out) admits no such reading, so it rejects the model
outright instead of being repaired.

Repair order: mixed-gateway check, then start/end handling, then
split/join insertion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eventlog import ObjectType
from .model import Edge, Node, ProcessModel


@dataclass(frozen=True)
class AppliedRule:
    rule: str
    nodes: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"rule": self.rule, "nodes": list(self.nodes)}


@dataclass(frozen=True)
class NormalizationOutcome:
    model: ProcessModel | None
    rejected: bool = False
    reason: str | None = None
    offenders: tuple[str, ...] = ()
    applied_rules: tuple[AppliedRule, ...] = ()

    def to_dict(self) -> dict:
        return {
            "rejected": self.rejected,
            "reason": self.reason,
            "applied_rules": [r.to_dict() for r in self.applied_rules],
        }


def check_mixed_gateways(model: ProcessModel) -> tuple[str, ...]:
    """Gateways that both join and split (2+ in and 2+ out), sorted."""
    return tuple(
        g
        for g in model.gateway_ids()
        if model.in_degree(g) >= 2 and model.out_degree(g) >= 2
    )


def _fresh(model: ProcessModel, base: str) -> str:
    if base not in model.nodes and base not in model.edges:
        return base
    n = 2
    while f"{base}_{n}" in model.nodes or f"{base}_{n}" in model.edges:
        n += 1
    return f"{base}_{n}"


def _forward_merge_gateway(model: ProcessModel, node: str,
                           check_first: bool = False) -> str | None:
    """Follow the unique outgoing chain until a node with in-degree > 1.

    Returns that node if it is a gateway. None when the chain forks, dead-
    ends, loops, or the merge point is not a gateway. With check_first the
    starting node itself may be the merge point.
    """
    current = node
    seen = {node}
    if check_first and model.in_degree(current) > 1:
        return current if model.is_gateway(current) else None
    while True:
        outs = model.out_edges(current)
        if len(outs) != 1:
            return None
        nxt = outs[0].target
        if nxt in seen:
            return None
        if model.in_degree(nxt) > 1:
            return nxt if model.is_gateway(nxt) else None
        seen.add(nxt)
        current = nxt


def _backward_split_gateway(model: ProcessModel, node: str,
                            check_first: bool = False) -> str | None:
    """Mirror of _forward_merge_gateway: walk back to the first node with
    out-degree > 1."""
    current = node
    seen = {node}
    if check_first and model.out_degree(current) > 1:
        return current if model.is_gateway(current) else None
    while True:
        ins = model.in_edges(current)
        if len(ins) != 1:
            return None
        prv = ins[0].source
        if prv in seen:
            return None
        if model.out_degree(prv) > 1:
            return prv if model.is_gateway(prv) else None
        seen.add(prv)
        current = prv


def _common_gateway(candidates: list[str | None]) -> str | None:
    found = set(candidates)
    if len(found) == 1 and None not in found:
        return found.pop()
    return None


def _sorted_edges(edges: list[Edge]) -> list[Edge]:
    return sorted(edges, key=lambda e: e.id)


def normalize_start_end(model: ProcessModel,
                        rules: list[AppliedRule] | None = None) -> ProcessModel:
    """Give every source task a start event and every sink task an end
    event, then collapse multiple start (end) events into one behind a
    gateway whose kind is copied from the common merge (fork) gateway of
    the original starting (ending) paths, XOR when there is none."""
    if not model.nodes:
        raise ValueError("empty model")
    applied = rules if rules is not None else []
    m = model.copy()

    for task in [n.id for n in m.nodes_of_type(ObjectType.ACTIVITY)]:
        if m.in_degree(task) == 0:
            start = _fresh(m, f"start_{task}")
            m.add_node(Node(start, ObjectType.START_EVENT))
            m.add_edge(Edge(_fresh(m, f"e_{start}"), start, task))
            applied.append(AppliedRule("insert_start_event", (task,)))
    for task in [n.id for n in m.nodes_of_type(ObjectType.ACTIVITY)]:
        if m.out_degree(task) == 0:
            end = _fresh(m, f"end_{task}")
            m.add_node(Node(end, ObjectType.END_EVENT))
            m.add_edge(Edge(_fresh(m, f"e_{end}"), task, end))
            applied.append(AppliedRule("insert_end_event", (task,)))

    starts = [n.id for n in m.nodes_of_type(ObjectType.START_EVENT)]
    if len(starts) > 1:
        merge = _common_gateway([_forward_merge_gateway(m, s) for s in starts])
        sign = m.nodes[merge].type if merge else ObjectType.XOR
        targets = [e.target for s in starts for e in _sorted_edges(m.out_edges(s))]
        for s in starts:
            m.remove_node(s)
        new_start = _fresh(m, "start")
        gateway = _fresh(m, "g_start")
        m.add_node(Node(new_start, ObjectType.START_EVENT))
        m.add_node(Node(gateway, sign))
        m.add_edge(Edge(_fresh(m, f"e_{new_start}"), new_start, gateway))
        for t in targets:
            if t in m.nodes:  # a start pointing at another start vanishes
                m.add_edge(Edge(_fresh(m, f"e_{gateway}_{t}"), gateway, t))
        applied.append(AppliedRule("merge_start_events", tuple(starts)))

    ends = [n.id for n in m.nodes_of_type(ObjectType.END_EVENT)]
    if len(ends) > 1:
        fork = _common_gateway([_backward_split_gateway(m, e) for e in ends])
        sign = m.nodes[fork].type if fork else ObjectType.XOR
        sources = [e.source for x in ends for e in _sorted_edges(m.in_edges(x))]
        for x in ends:
            m.remove_node(x)
        new_end = _fresh(m, "end")
        gateway = _fresh(m, "g_end")
        m.add_node(Node(new_end, ObjectType.END_EVENT))
        m.add_node(Node(gateway, sign))
        m.add_edge(Edge(_fresh(m, f"e_{new_end}"), gateway, new_end))
        for s in sources:
            if s in m.nodes:
                m.add_edge(Edge(_fresh(m, f"e_{s}_{gateway}"), s, gateway))
        applied.append(AppliedRule("merge_end_events", tuple(ends)))

    return m


def normalize_splits_joins(model: ProcessModel,
                           rules: list[AppliedRule] | None = None) -> ProcessModel:
    """Bundle multiple flows at activities and events through fresh
    gateways: a join (XOR unless all flows come from one common split
    gateway) before the node, a split (AND unless all flows lead to one
    common join gateway) after it.

    All insertions are decided against the model as it enters this stage,
    so the outcome does not depend on processing order.
    """
    applied = rules if rules is not None else []
    m = model.copy()

    plans: list[tuple[str, str, ObjectType, list[str]]] = []
    for node_id in sorted(model.nodes):
        if model.is_gateway(node_id):
            continue
        ins = _sorted_edges(model.in_edges(node_id))
        if len(ins) > 1:
            origin = _common_gateway(
                [_backward_split_gateway(model, e.source, check_first=True) for e in ins]
            )
            sign = model.nodes[origin].type if origin else ObjectType.XOR
            plans.append(("join", node_id, sign, [e.id for e in ins]))
        outs = _sorted_edges(model.out_edges(node_id))
        if len(outs) > 1:
            dest = _common_gateway(
                [_forward_merge_gateway(model, e.target, check_first=True) for e in outs]
            )
            sign = model.nodes[dest].type if dest else ObjectType.AND
            plans.append(("split", node_id, sign, [e.id for e in outs]))

    for kind, node_id, sign, edge_ids in plans:
        if kind == "join":
            gateway = _fresh(m, f"j_{node_id}")
            m.add_node(Node(gateway, sign))
            for eid in edge_ids:
                m.update_edge(eid, target=gateway)
            m.add_edge(Edge(_fresh(m, f"e_{gateway}"), gateway, node_id))
            applied.append(AppliedRule("insert_join", (node_id,)))
        else:
            gateway = _fresh(m, f"s_{node_id}")
            m.add_node(Node(gateway, sign))
            for eid in edge_ids:
                m.update_edge(eid, source=gateway)
            m.add_edge(Edge(_fresh(m, f"e_{gateway}"), node_id, gateway))
            applied.append(AppliedRule("insert_split", (node_id,)))

    return m


def normalize(model: ProcessModel) -> NormalizationOutcome:
    """Full repair pipeline; Rejected only for mixed gateways."""
    offenders = check_mixed_gateways(model)
    if offenders:
        return NormalizationOutcome(
            model=None,
            rejected=True,
            reason="mixed gateway: " + ", ".join(offenders),
            offenders=offenders,
        )
    rules: list[AppliedRule] = []
    m = normalize_start_end(model, rules)
    m = normalize_splits_joins(m, rules)
    return NormalizationOutcome(model=m, applied_rules=tuple(rules))
