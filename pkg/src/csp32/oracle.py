"""Brute-force reference solvers and random instance generators.

Everything here is deliberately naive: exhaustive search with at most a
conflict-pruning shortcut.  These are the ground truth the clever
algorithms are tested against, so they stay small enough to audit by
eye.
"""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Optional

from .instance import Assignment, Instance, check

Graph = tuple[int, list[tuple[int, int]]]  # (vertex count, sorted edge list)


# ---------------------------------------------------------------------------
# Brute-force solvers


def brute_csp(inst: Instance) -> Optional[Assignment]:
    """Exhaustive backtracking over all colorings, pruning on conflicts."""
    order = inst.variables()
    asg: Assignment = {}

    def ok(v: int, c: int) -> bool:
        for q in inst.adj[(v, c)]:
            if asg.get(q[0]) == q[1]:
                return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for c in sorted(inst.colors[v]):
            if ok(v, c):
                asg[v] = c
                if rec(i + 1):
                    return True
                del asg[v]
        return False

    if rec(0):
        assert check(inst, asg)
        return asg
    return None


def brute_csp_product(inst: Instance) -> Optional[Assignment]:
    """Flat enumeration of the full color product; second opinion for
    brute_csp on small instances."""
    order = inst.variables()
    domains = [sorted(inst.colors[v]) for v in order]
    for combo in product(*domains):
        asg = dict(zip(order, combo))
        if check(inst, asg):
            return asg
    return None


def brute_vertex_color(graph: Graph, k: int = 3) -> Optional[dict[int, int]]:
    """Proper k-coloring by backtracking, or None."""
    n, edges = graph
    nbrs: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    coloring: dict[int, int] = {}

    def rec(v: int) -> bool:
        if v == n:
            return True
        for c in range(k):
            if all(coloring.get(w) != c for w in nbrs[v]):
                coloring[v] = c
                if rec(v + 1):
                    return True
                del coloring[v]
        return False

    return coloring if rec(0) else None


def brute_edge_color(graph: Graph, k: int = 3) -> Optional[dict[tuple[int, int], int]]:
    """Proper k-edge-coloring (edges sharing an endpoint differ), or None."""
    _n, edges = graph
    coloring: dict[tuple[int, int], int] = {}

    def rec(i: int) -> bool:
        if i == len(edges):
            return True
        u, v = edges[i]
        for c in range(k):
            if all(coloring[e] != c for e in edges[:i] if u in e or v in e):
                coloring[edges[i]] = c
                if rec(i + 1):
                    return True
                del coloring[edges[i]]
        return False

    return coloring if rec(0) else None


Clause = tuple[int, ...]  # nonzero DIMACS-style literals


def brute_sat(nvars: int, clauses: list[Clause]) -> Optional[dict[int, bool]]:
    """Exhaustive SAT over variables 1..nvars with unit clause checking."""
    asg: dict[int, bool] = {}

    def clause_ok(cl: Clause) -> bool:
        # Satisfied or still open under the partial assignment.
        for lit in cl:
            val = asg.get(abs(lit))
            if val is None or val == (lit > 0):
                return True
        return False

    def rec(v: int) -> bool:
        if v > nvars:
            return True
        for val in (False, True):
            asg[v] = val
            if all(clause_ok(cl) for cl in clauses):
                if rec(v + 1):
                    return True
            del asg[v]
        return False

    return asg if rec(1) else None


# ---------------------------------------------------------------------------
# Generators


def random_csp(
    rng: random.Random,
    nvars: int,
    max_colors: int = 3,
    density: float = 0.25,
) -> Instance:
    """Random (max_colors,2)-CSP: each variable gets 3 or up to max_colors
    colors, each cross-variable pair of pairs becomes a constraint with
    probability density."""
    colors = {}
    for v in range(nvars):
        k = rng.randint(3, max_colors) if max_colors > 3 else 3
        colors[v] = range(k)
    inst = Instance.build(colors)
    for (v, w) in combinations(range(nvars), 2):
        for c in sorted(inst.colors[v]):
            for d in sorted(inst.colors[w]):
                if rng.random() < density:
                    inst.add_constraint((v, c), (w, d))
    return inst


def planted_csp(
    rng: random.Random,
    nvars: int,
    max_colors: int = 3,
    density: float = 0.4,
) -> tuple[Instance, Assignment]:
    """Random CSP guaranteed satisfiable: a hidden solution is drawn first
    and no constraint touching it is emitted."""
    colors = {}
    for v in range(nvars):
        k = rng.randint(3, max_colors) if max_colors > 3 else 3
        colors[v] = range(k)
    inst = Instance.build(colors)
    hidden = {v: rng.choice(sorted(inst.colors[v])) for v in range(nvars)}
    for (v, w) in combinations(range(nvars), 2):
        for c in sorted(inst.colors[v]):
            for d in sorted(inst.colors[w]):
                if hidden[v] == c and hidden[w] == d:
                    continue
                if rng.random() < density:
                    inst.add_constraint((v, c), (w, d))
    assert check(inst, hidden)
    return inst, hidden


def structured_csp(
    rng: random.Random,
    var_degrees: list[int],
    four_vars: int = 0,
    tries: int = 200,
) -> Optional[Instance]:
    """CSP whose pairs have controlled constraint counts.

    Variables get the requested degrees in a random simple graph; every
    graph edge becomes a random one-to-one matching between (three of)
    the endpoint color sets.  A pair then has one constraint per
    incident edge and never two constraints into the same variable,
    which steers solving toward the deeper branching rules.  The first
    four_vars variables get four colors.  None when the degree sequence
    could not be realized.
    """
    n = len(var_degrees)
    for _ in range(tries):
        stubs = [v for v in range(n) for _ in range(var_degrees[v])]
        if len(stubs) % 2:
            stubs.remove(rng.choice(stubs))
        rng.shuffle(stubs)
        skeleton = set()
        ok = True
        for i in range(0, len(stubs) - 1, 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in skeleton:
                ok = False
                break
            skeleton.add((min(u, v), max(u, v)))
        if ok:
            break
    else:
        return None
    colors = {v: range(4 if v < four_vars else 3) for v in range(n)}
    inst = Instance.build(colors)
    for (u, v) in sorted(skeleton):
        cu = rng.sample(sorted(inst.colors[u]), 3)
        cv = rng.sample(sorted(inst.colors[v]), 3)
        for c, d in zip(cu, cv):
            inst.add_constraint((u, c), (v, d))
    return inst


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for (u, v) in combinations(range(n), 2) if rng.random() < p]
    return n, edges


def planted_3colorable(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    """Random graph with a hidden 3-partition; edges only cross classes."""
    part = [rng.randrange(3) for _ in range(n)]
    edges = [
        (u, v)
        for (u, v) in combinations(range(n), 2)
        if part[u] != part[v] and rng.random() < p
    ]
    return n, edges


def random_cubic(rng: random.Random, n: int, tries: int = 10000) -> Graph:
    """Simple 3-regular graph on n vertices (n even) by the pairing model,
    rejecting pairings with loops or repeated edges."""
    if n % 2 or n < 4:
        raise ValueError("cubic graphs need an even vertex count >= 4")
    for _ in range(tries):
        stubs = [v for v in range(n) for _ in range(3)]
        rng.shuffle(stubs)
        edges = set()
        good = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or (min(u, v), max(u, v)) in edges:
                good = False
                break
            edges.add((min(u, v), max(u, v)))
        if good:
            return n, sorted(edges)
    raise RuntimeError(f"no simple cubic graph found on {n} vertices")


def planted_cubic_edge_colorable(
    rng: random.Random, n: int, tries: int = 10000
) -> Graph:
    """Cubic, simple, 3-edge-colorable graph: the union of three random
    perfect matchings, rejected if any two matchings share an edge."""
    if n % 2 or n < 4:
        raise ValueError("need an even vertex count >= 4")
    for _ in range(tries):
        edges = set()
        good = True
        for _m in range(3):
            perm = list(range(n))
            rng.shuffle(perm)
            for i in range(0, n, 2):
                u, v = sorted((perm[i], perm[i + 1]))
                if (u, v) in edges:
                    good = False
                    break
                edges.add((u, v))
            if not good:
                break
        if good:
            return n, sorted(edges)
    raise RuntimeError(f"no edge-colorable cubic graph found on {n} vertices")


def random_3cnf(rng: random.Random, nvars: int, nclauses: int) -> list[Clause]:
    """Random 3-CNF with three distinct variables per clause."""
    clauses = []
    for _ in range(nclauses):
        vs = rng.sample(range(1, nvars + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return clauses
