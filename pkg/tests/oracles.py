"""Independent reference implementations the tests check against.

Everything here deliberately takes a different route from the package:
reachability through networkx, unboundedness through an unmemoized
Karp-Miller-style tree, p-values through numeric quadrature in mpmath.
Slow and dumb on purpose.
"""

from __future__ import annotations

import random

import networkx as nx

from ppmkit.model import ProcessModel
from ppmkit.wfnet import Transition, WFNet


def random_wfnet(seed: int) -> WFNet:
    """Small random workflow net, arc density about 1.5-2.5 per node.

    Half the time a chain skeleton i -> t1 -> p -> ... -> o is laid first,
    which makes structurally covered (and sometimes sound) nets common
    enough to matter; the rest is uniform arc sprinkling.
    """
    rng = random.Random(seed)
    n_extra = rng.randint(1, 8)  # places besides i and o, total <= 10
    n_trans = rng.randint(1, 8)
    places = ["i", "o"] + [f"p{k}" for k in range(1, n_extra + 1)]
    pre_pool = [p for p in places if p != "o"]
    post_pool = [p for p in places if p != "i"]
    trans: list[tuple[str, set[str], set[str]]] = [
        (f"t{k}", set(), set()) for k in range(1, n_trans + 1)
    ]

    if rng.random() < 0.5:
        hops = places[2 : 2 + min(n_extra, n_trans - 1)]
        chain = ["i"] + hops + ["o"]
        for k in range(len(chain) - 1):
            trans[k][1].add(chain[k])
            trans[k][2].add(chain[k + 1])
    for tid, pre, post in trans:
        if not pre:
            pre.add(rng.choice(pre_pool))
        if not post:
            post.add(rng.choice(post_pool))

    arcs = sum(len(pre) + len(post) for _, pre, post in trans)
    target = round(rng.uniform(1.5, 2.5) * (len(places) + n_trans))
    for _ in range(1000):
        if arcs >= target:
            break
        _, pre, post = trans[rng.randrange(n_trans)]
        if rng.random() < 0.5:
            p = rng.choice(pre_pool)
            if p not in pre:
                pre.add(p)
                arcs += 1
        else:
            p = rng.choice(post_pool)
            if p not in post:
                post.add(p)
                arcs += 1

    return WFNet(
        places=tuple(places),
        transitions=tuple(
            Transition(tid, tuple(sorted(pre)), tuple(sorted(post)))
            for tid, pre, post in trans
        ),
    )


def _successors(net: WFNet, marking: tuple[int, ...], index: dict[str, int]):
    out = []
    for t in net.transitions:
        pre = [index[p] for p in t.pre]
        if all(marking[k] >= 1 for k in pre):
            nxt = list(marking)
            for k in pre:
                nxt[k] -= 1
            for k in (index[p] for p in t.post):
                nxt[k] += 1
            out.append((t.id, tuple(nxt)))
    return out


def _unbounded(net: WFNet, initial: tuple[int, ...], index: dict[str, int]) -> bool:
    # Unmemoized tree search; a branch stops at a repeat of or strict
    # domination over any marking on its own path. Dickson's lemma keeps
    # every path finite, so the whole tree is finite.
    stack = [(initial, [initial])]
    while stack:
        marking, path = stack.pop()
        for _, child in _successors(net, marking, index):
            if any(child == anc for anc in path):
                continue
            if any(all(a >= b for a, b in zip(child, anc)) for anc in path):
                return True
            stack.append((child, path + [child]))
    return False


def brute_force_soundness(net: WFNet) -> str:
    """'Sound' or 'Unsound', straight from the definition."""
    graph = nx.DiGraph()
    graph.add_nodes_from(net.places)
    graph.add_nodes_from(t.id for t in net.transitions)
    graph.add_edges_from(net.arcs())
    on_path = (nx.descendants(graph, net.source) | {net.source}) & (
        nx.ancestors(graph, net.sink) | {net.sink}
    )
    if set(graph.nodes) - on_path:
        return "Unsound"

    index = {p: k for k, p in enumerate(net.places)}
    initial = tuple(1 if p == net.source else 0 for p in net.places)
    final = tuple(1 if p == net.sink else 0 for p in net.places)
    if _unbounded(net, initial, index):
        return "Unsound"

    state_graph = nx.MultiDiGraph()
    state_graph.add_node(initial)
    frontier = [initial]
    fired = set()
    while frontier:
        marking = frontier.pop()
        for tid, child in _successors(net, marking, index):
            fired.add(tid)
            known = child in state_graph
            state_graph.add_edge(marking, child, key=tid)
            if not known:
                frontier.append(child)

    can_complete = (
        {final} | nx.ancestors(state_graph, final) if final in state_graph else set()
    )
    if set(state_graph.nodes) - can_complete:
        return "Unsound"
    o = index[net.sink]
    if any(m[o] >= 1 and m != final for m in state_graph.nodes):
        return "Unsound"
    if fired != {t.id for t in net.transitions}:
        return "Unsound"
    return "Sound"


def t_p_value(t: float, df: int) -> float:
    """Two-tailed Student-t p-value by numeric quadrature."""
    from mpmath import gamma, inf, mp, mpf, pi, quad, sqrt

    mp.dps = 30
    v = mpf(df)
    norm = gamma((v + 1) / 2) / (sqrt(v * pi) * gamma(v / 2))

    def density(x):
        return norm * (1 + x * x / v) ** (-(v + 1) / 2)

    return float(2 * quad(density, [abs(t), inf]))


def models_isomorphic(left: ProcessModel, right: ProcessModel,
                      pinned_ids: set[str]) -> bool:
    """Graph isomorphism where nodes in pinned_ids must map to themselves
    and all nodes must preserve their type. Fresh ids are free to differ."""

    def to_graph(model: ProcessModel) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        for node in model.nodes.values():
            graph.add_node(
                node.id,
                type=node.type.value,
                pin=node.id if node.id in pinned_ids else None,
            )
        for edge in model.edges.values():
            graph.add_edge(edge.source, edge.target)
        return graph

    return nx.is_isomorphic(
        to_graph(left),
        to_graph(right),
        node_match=lambda a, b: a["type"] == b["type"] and a["pin"] == b["pin"],
    )
