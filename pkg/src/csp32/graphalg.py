"""Classical graph subroutines: matchings and integer maximum flow.

The solver endgame needs bipartite maximum matching, the edge-coloring
splice selection needs maximum matching in a general graph, and the
height-two forest construction needs integer maximum flow.  All inputs
here are tiny (O(n) nodes), so simple augmenting-path methods suffice;
general matching delegates to networkx's blossom implementation because
the splice-count guarantee requires a true maximum matching, not a
maximal one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx


def bipartite_matching(
    left: list, right: list, edges: list[tuple]
) -> set[tuple]:
    """Maximum-cardinality matching of a bipartite graph, as (left, right) pairs.

    Kuhn's augmenting-path algorithm; deterministic for a fixed input
    order (vertices and adjacency are processed sorted).
    """
    left = sorted(left)
    right_set = set(right)
    adj = {u: [] for u in left}
    for u, v in edges:
        if u not in adj or v not in right_set:
            raise ValueError(f"edge {(u, v)} not within the given bipartition")
        adj[u].append(v)
    for u in adj:
        adj[u] = sorted(set(adj[u]))

    match_of_right: dict = {}

    def try_augment(u, seen: set) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_of_right or try_augment(match_of_right[v], seen):
                match_of_right[v] = u
                return True
        return False

    for u in left:
        try_augment(u, set())
    return {(u, v) for v, u in match_of_right.items()}


def general_matching(nodes: list, edges: list[tuple]) -> set[tuple]:
    """Maximum-cardinality matching in a general graph (blossom algorithm)."""
    g = nx.Graph()
    g.add_nodes_from(sorted(nodes))
    g.add_edges_from(sorted(tuple(sorted(e)) for e in edges))
    raw = nx.max_weight_matching(g, maxcardinality=True)
    return {tuple(sorted(e)) for e in raw}


@dataclass
class FlowNetwork:
    """Directed network with nonnegative integer capacities."""

    source: object
    sink: object
    capacity: dict[tuple, int] = field(default_factory=dict)

    def add_arc(self, u, v, cap: int):
        if cap < 0:
            raise ValueError("capacities must be nonnegative")
        if v == self.source or u == self.sink:
            raise ValueError("no arcs into the source or out of the sink")
        self.capacity[(u, v)] = self.capacity.get((u, v), 0) + cap


def max_flow(net: FlowNetwork) -> tuple[int, dict[tuple, int]]:
    """Integer maximum flow by BFS augmenting paths (Edmonds-Karp).

    Returns (value, per-arc flow).  Flow conservation and capacity
    respect are asserted before returning.
    """
    residual: dict = {}
    nodes = {net.source, net.sink}
    for (u, v), cap in net.capacity.items():
        residual[(u, v)] = residual.get((u, v), 0) + cap
        residual.setdefault((v, u), 0)
        nodes.update((u, v))
    out_arcs: dict = {n: [] for n in nodes}
    for u, v in residual:
        out_arcs[u].append(v)
    for u in out_arcs:
        out_arcs[u].sort(key=repr)

    value = 0
    while True:
        parent = {net.source: None}
        queue = deque([net.source])
        while queue and net.sink not in parent:
            u = queue.popleft()
            for v in out_arcs[u]:
                if v not in parent and residual[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if net.sink not in parent:
            break
        # Bottleneck along the path.
        path = []
        v = net.sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        aug = min(residual[a] for a in path)
        for u, v in path:
            residual[(u, v)] -= aug
            residual[(v, u)] += aug
        value += aug

    flow = {}
    for (u, v), cap in net.capacity.items():
        f = cap - residual[(u, v)]
        if f > 0:
            flow[(u, v)] = f
    # Sanity: capacities and conservation.
    for arc, f in flow.items():
        assert 0 <= f <= net.capacity[arc]
    for n in nodes:
        if n in (net.source, net.sink):
            continue
        inflow = sum(f for (u, v), f in flow.items() if v == n)
        outflow = sum(f for (u, v), f in flow.items() if u == n)
        assert inflow == outflow, f"conservation violated at {n!r}"
    return value, flow
