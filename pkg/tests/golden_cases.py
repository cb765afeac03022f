"""The six canonical normalization cases: input model, expected output.

Expected models use placeholder ids for inserted nodes; comparisons go
through graph isomorphism with original ids pinned, so only the shape and
the gateway kinds of the fresh parts matter.
"""

from __future__ import annotations

from ppmkit.eventlog import ObjectType as OT
from ppmkit.model import Edge, Node, ProcessModel

A, X, AND, S, E = OT.ACTIVITY, OT.XOR, OT.AND, OT.START_EVENT, OT.END_EVENT


def build(nodes: list[tuple[str, OT]], edges: list[tuple[str, str]]) -> ProcessModel:
    m = ProcessModel()
    for node_id, node_type in nodes:
        m.add_node(Node(node_id, node_type))
    for k, (src, tgt) in enumerate(edges, start=1):
        m.add_edge(Edge(f"f{k}", src, tgt))
    return m


def case_two_starts_common_and_join():
    # Both starting paths meet in the AND join, so the inserted start
    # gateway copies its kind.
    inp = build(
        [("sa", S), ("sb", S), ("A", A), ("B", A), ("C", A), ("g", AND), ("e", E)],
        [("sa", "A"), ("sb", "B"), ("A", "g"), ("B", "g"), ("g", "C"), ("C", "e")],
    )
    exp = build(
        [("S*", S), ("G*", AND), ("A", A), ("B", A), ("C", A), ("g", AND), ("e", E)],
        [("S*", "G*"), ("G*", "A"), ("G*", "B"), ("A", "g"), ("B", "g"),
         ("g", "C"), ("C", "e")],
    )
    return inp, exp


def case_two_starts_no_gateway():
    # Starting paths meet at an activity, not a gateway: XOR default for
    # the start merge, and the implicit join before C is bundled too,
    # copying the start gateway's XOR.
    inp = build(
        [("sa", S), ("sb", S), ("A", A), ("B", A), ("C", A)],
        [("sa", "A"), ("sb", "B"), ("A", "C"), ("B", "C")],
    )
    exp = build(
        [("S*", S), ("G*", X), ("A", A), ("B", A), ("J*", X), ("C", A), ("E*", E)],
        [("S*", "G*"), ("G*", "A"), ("G*", "B"), ("A", "J*"), ("B", "J*"),
         ("J*", "C"), ("C", "E*")],
    )
    return inp, exp


def case_two_ends_common_and_split():
    inp = build(
        [("s", S), ("A", A), ("g", AND), ("B", A), ("C", A), ("eb", E), ("ec", E)],
        [("s", "A"), ("A", "g"), ("g", "B"), ("g", "C"), ("B", "eb"), ("C", "ec")],
    )
    exp = build(
        [("s", S), ("A", A), ("g", AND), ("B", A), ("C", A), ("G*", AND), ("E*", E)],
        [("s", "A"), ("A", "g"), ("g", "B"), ("g", "C"), ("B", "G*"), ("C", "G*"),
         ("G*", "E*")],
    )
    return inp, exp


def case_implicit_join_after_and_split():
    inp = build(
        [("s", S), ("A", A), ("g", AND), ("B", A), ("C", A), ("D", A), ("e", E)],
        [("s", "A"), ("A", "g"), ("g", "B"), ("g", "C"), ("B", "D"), ("C", "D"),
         ("D", "e")],
    )
    exp = build(
        [("s", S), ("A", A), ("g", AND), ("B", A), ("C", A), ("J*", AND),
         ("D", A), ("e", E)],
        [("s", "A"), ("A", "g"), ("g", "B"), ("g", "C"), ("B", "J*"), ("C", "J*"),
         ("J*", "D"), ("D", "e")],
    )
    return inp, exp


def case_implicit_split_and_join_defaults():
    # No gateway on either side: the split defaults to AND, the join to
    # XOR, both judged against the model before any insertion. The result
    # deliberately mismatches and is the stock unsound example downstream.
    inp = build(
        [("s", S), ("A", A), ("B", A), ("C", A), ("D", A), ("x", E)],
        [("s", "A"), ("A", "B"), ("A", "C"), ("B", "D"), ("C", "D"), ("D", "x")],
    )
    exp = build(
        [("s", S), ("A", A), ("S*", AND), ("B", A), ("C", A), ("J*", X),
         ("D", A), ("x", E)],
        [("s", "A"), ("A", "S*"), ("S*", "B"), ("S*", "C"), ("B", "J*"),
         ("C", "J*"), ("J*", "D"), ("D", "x")],
    )
    return inp, exp


def case_implicit_split_before_xor_join():
    inp = build(
        [("s", S), ("A", A), ("B", A), ("C", A), ("g", X), ("D", A), ("x", E)],
        [("s", "A"), ("A", "B"), ("A", "C"), ("B", "g"), ("C", "g"), ("g", "D"),
         ("D", "x")],
    )
    exp = build(
        [("s", S), ("A", A), ("S*", X), ("B", A), ("C", A), ("g", X), ("D", A),
         ("x", E)],
        [("s", "A"), ("A", "S*"), ("S*", "B"), ("S*", "C"), ("B", "g"), ("C", "g"),
         ("g", "D"), ("D", "x")],
    )
    return inp, exp


GOLDEN_CASES = [
    ("two starts meeting in an AND join", case_two_starts_common_and_join),
    ("two starts with no common gateway", case_two_starts_no_gateway),
    ("two ends forked by an AND split", case_two_ends_common_and_split),
    ("implicit join under an AND split", case_implicit_join_after_and_split),
    ("implicit split and join, both defaults", case_implicit_split_and_join_defaults),
    ("implicit split feeding an XOR join", case_implicit_split_before_xor_join),
]
