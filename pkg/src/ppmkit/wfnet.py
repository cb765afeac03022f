"""Translate normalized models into workflow nets.

Every sequence flow becomes a place; a fresh source place i feeds the
start event's transition and the end event's transition fills a fresh sink
place o. Activities and AND gateways become single transitions. An XOR
gateway becomes one transition per branch, which is what makes it a
choice: each transition competes for the same input token (split) or
produces into the same output place (join).
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .eventlog import ObjectType
from .model import ProcessModel

SOURCE_PLACE = "i"
SINK_PLACE = "o"


@dataclass(frozen=True)
class Transition:
    id: str
    pre: tuple[str, ...]
    post: tuple[str, ...]
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(sorted(self.pre)))
        object.__setattr__(self, "post", tuple(sorted(self.post)))


@dataclass(frozen=True)
class WFNet:
    places: tuple[str, ...]
    transitions: tuple[Transition, ...]
    source: str = SOURCE_PLACE
    sink: str = SINK_PLACE

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(sorted(self.places)))
        object.__setattr__(
            self, "transitions", tuple(sorted(self.transitions, key=lambda t: t.id))
        )
        place_set = set(self.places)
        if len(place_set) != len(self.places):
            raise ValueError("duplicate place ids")
        ids = [t.id for t in self.transitions]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate transition ids")
        if self.source not in place_set or self.sink not in place_set:
            raise ValueError("source and sink must be places")
        for t in self.transitions:
            for p in t.pre + t.post:
                if p not in place_set:
                    raise ValueError(f"transition {t.id} touches unknown place {p}")
            if self.source in t.post:
                raise ValueError(f"transition {t.id} feeds the source place")
            if self.sink in t.pre:
                raise ValueError(f"transition {t.id} consumes the sink place")

    def arcs(self) -> list[tuple[str, str]]:
        """All (from, to) arcs, place→transition and transition→place."""
        out = []
        for t in self.transitions:
            out.extend((p, t.id) for p in t.pre)
            out.extend((t.id, p) for p in t.post)
        return out


def _place(edge_id: str) -> str:
    return f"p_{edge_id}"


def to_wfnet(model: ProcessModel) -> WFNet:
    """Map a model to its workflow net.

    Intended for normalized models. Activities and events with more than
    one flow on a side, and XOR gateways mixing 2+ in with 2+ out, have no
    single-net reading and raise. Degenerate but unambiguous shapes (a
    missing start event, a dangling gateway) translate to structurally
    broken nets and are left for the soundness check to reject.
    """
    places = [SOURCE_PLACE, SINK_PLACE] + [_place(e) for e in sorted(model.edges)]
    transitions: list[Transition] = []
    for node_id in sorted(model.nodes):
        node = model.nodes[node_id]
        in_places = [_place(e.id) for e in model.in_edges(node_id)]
        out_places = [_place(e.id) for e in model.out_edges(node_id)]
        if node.type is ObjectType.START_EVENT:
            transitions.append(
                Transition(f"t_{node_id}", [SOURCE_PLACE] + in_places, out_places,
                           label=node.label)
            )
        elif node.type is ObjectType.END_EVENT:
            transitions.append(
                Transition(f"t_{node_id}", in_places, [SINK_PLACE] + out_places,
                           label=node.label)
            )
        elif node.type is ObjectType.ACTIVITY:
            if len(in_places) > 1 or len(out_places) > 1:
                raise ValueError(f"activity {node_id} has multiple flows on one side; "
                                 "normalize the model first")
            transitions.append(
                Transition(f"t_{node_id}", in_places, out_places, label=node.label)
            )
        elif node.type is ObjectType.AND:
            transitions.append(
                Transition(f"t_{node_id}", in_places, out_places, label=node.label)
            )
        else:  # XOR: one transition per branch
            if len(in_places) >= 2 and len(out_places) >= 2:
                raise ValueError(f"mixed XOR gateway {node_id}; normalize rejects this")
            if len(out_places) >= 2:
                for e in sorted(model.out_edges(node_id), key=lambda e: e.id):
                    transitions.append(
                        Transition(f"t_{node_id}_{e.id}", in_places, [_place(e.id)],
                                   label=node.label)
                    )
            elif len(in_places) >= 2:
                for e in sorted(model.in_edges(node_id), key=lambda e: e.id):
                    transitions.append(
                        Transition(f"t_{node_id}_{e.id}", [_place(e.id)], out_places,
                                   label=node.label)
                    )
            else:
                transitions.append(
                    Transition(f"t_{node_id}", in_places, out_places, label=node.label)
                )
    return WFNet(places=tuple(places), transitions=tuple(transitions))


def is_wf_structured(net: WFNet) -> tuple[bool, tuple[str, ...]]:
    """Whether every place and transition lies on a path from i to o.

    Returns (ok, offending ids). Uses plain reachability over the arc
    graph; token counts play no role here.
    """
    succ: dict[str, list[str]] = {}
    pred: dict[str, list[str]] = {}
    for a, b in net.arcs():
        succ.setdefault(a, []).append(b)
        pred.setdefault(b, []).append(a)

    def reach(start: str, adj: dict[str, list[str]]) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adj.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    covered = reach(net.source, succ) & reach(net.sink, pred)
    everything = set(net.places) | {t.id for t in net.transitions}
    offending = tuple(sorted(everything - covered))
    return not offending, offending


def to_pnml(net: WFNet, net_id: str = "net1") -> str:
    """Render the net in the standard XML interchange form, one token on
    the source place, for cross-checking with external tools."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">',
        f'  <net id={quoteattr(net_id)} '
        'type="http://www.pnml.org/version-2009/grammar/ptnet">',
        '    <page id="page1">',
    ]
    for p in net.places:
        lines.append(f"      <place id={quoteattr(p)}>")
        if p == net.source:
            lines.append("        <initialMarking><text>1</text></initialMarking>")
        lines.append("      </place>")
    for t in net.transitions:
        lines.append(f"      <transition id={quoteattr(t.id)}>")
        if t.label:
            lines.append(f"        <name><text>{escape(t.label)}</text></name>")
        lines.append("      </transition>")
    for k, (a, b) in enumerate(net.arcs(), start=1):
        lines.append(
            f'      <arc id="a{k}" source={quoteattr(a)} target={quoteattr(b)}/>'
        )
    lines.extend(["    </page>", "  </net>", "</pnml>", ""])
    return "\n".join(lines)
