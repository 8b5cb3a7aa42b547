"""Shared test utilities: rule-trigger instances and a checking branch walker.

The handcrafted instances below are reduced (simplification leaves them
alone) and each deterministically triggers one specific branching rule.
Random relabelings of variables and colors turn every one of them into a
family of fuzz inputs for that rule.
"""

import random

from csp32.instance import Instance, simplify
from csp32.analysis import work_factor
from csp32.oracle import brute_csp
from csp32.solver import (
    SearchStats,
    choose_rule,
    claim_cap,
    contrib_measure,
    live_vector,
    matching_solve,
)


def build_instance(colors, cons):
    inst = Instance.build({v: set(cs) for v, cs in colors.items()})
    for a, b in cons:
        inst.add_constraint(tuple(a), tuple(b))
    return inst


# An isolated constraint (0,0)-(1,0): both pairs have that single
# constraint, while the sibling colors are anchored in helper variables
# so no polynomial simplification applies.
ISOLATED_BASE = (
    {0: range(3), 1: range(3), 2: range(3), 3: range(3), 4: range(3), 5: range(3)},
    [((0, 0), (1, 0)),
     ((0, 1), (2, 0)), ((0, 1), (3, 0)),
     ((0, 2), (2, 1)), ((0, 2), (3, 1)),
     ((1, 1), (4, 0)), ((1, 1), (5, 0)),
     ((1, 2), (4, 1)), ((1, 2), (5, 1)),
     ((2, 2), (4, 2)), ((2, 2), (5, 2)),
     ((3, 2), (4, 2)), ((3, 2), (5, 2)),
     ((2, 0), (4, 0)), ((2, 1), (4, 1)),
     ((3, 0), (5, 0)), ((3, 1), (5, 1))],
)

# Same shape but the isolated constraint touches a four-color variable,
# exercising the use-one-of-two branching instead of the merge.
ISOLATED_FOUR_BASE = (
    {0: range(4), 1: range(3), 2: range(3), 3: range(3), 4: range(3), 5: range(3)},
    ISOLATED_BASE[1] + [((0, 3), (2, 2)), ((0, 3), (3, 2))],
)

# Pair (1,0) is constrained against two colors of the four-color variable
# 0 and nothing is implied anywhere, so branching restricts variable 0 to
# the hit half or the complement half of its palette.
FOUR_RESTRICTION_BASE = (
    {0: range(4), 1: range(3), 2: range(3), 3: range(3), 4: range(3)},
    [((1, 0), (0, 0)), ((1, 0), (0, 1)),
     ((0, 0), (2, 0)), ((0, 1), (2, 1)),
     ((0, 2), (3, 0)), ((0, 2), (4, 0)),
     ((0, 3), (3, 1)), ((0, 3), (4, 1)),
     ((1, 1), (2, 2)), ((1, 1), (3, 2)),
     ((1, 2), (4, 2)), ((1, 2), (3, 0)),
     ((2, 0), (4, 2)), ((2, 1), (3, 1)),
     ((2, 2), (4, 0)), ((3, 2), (4, 1))],
)

# Implication cycle (0,0) => (1,2) => (2,2) => (0,0) over three distinct
# variables with no constraints leaving the cycle: one use-all child.
IMPLICATION_CYCLE_BASE = (
    {v: range(3) for v in range(6)},
    [((0, 0), (1, 0)), ((0, 0), (1, 1)),
     ((1, 2), (2, 0)), ((1, 2), (2, 1)),
     ((2, 2), (0, 1)), ((2, 2), (0, 2)),
     ((0, 1), (3, 0)), ((0, 2), (3, 1)),
     ((1, 0), (4, 0)), ((1, 1), (4, 1)),
     ((2, 0), (5, 0)), ((2, 1), (5, 1)),
     ((3, 0), (4, 2)), ((3, 1), (5, 2)),
     ((3, 2), (4, 0)), ((3, 2), (5, 1)),
     ((4, 2), (5, 2)), ((4, 1), (5, 0))],
)

# Open implication chain (0,0) => (1,2) => (2,2) where (2,2) is not a
# source, so the plain implication branching applies.
IMPLICATION_BASE = (
    {v: range(3) for v in range(6)},
    [((0, 0), (1, 0)), ((0, 0), (1, 1)),
     ((1, 2), (2, 0)), ((1, 2), (2, 1)),
     ((2, 2), (0, 1)), ((2, 2), (3, 2)),
     ((0, 1), (3, 0)), ((0, 2), (3, 1)), ((0, 2), (4, 2)),
     ((1, 0), (4, 0)), ((1, 1), (4, 1)),
     ((2, 0), (5, 0)), ((2, 1), (5, 1)),
     ((3, 0), (4, 2)), ((3, 1), (5, 2)),
     ((3, 2), (4, 0)),
     ((4, 2), (5, 2)), ((4, 1), (5, 0)), ((5, 1), (4, 2))],
)

# Degree-three pair (1,0) adjacent to the degree-two pair (0,0) of a
# four-color variable; the third constraint of (0,0) goes to (4,0) which
# is not adjacent to (1,0), giving the open three-child split.
TRIPLE_FOUR_BASE = (
    {0: range(4), 1: range(3), 2: range(3), 3: range(3),
     4: range(3), 5: range(3), 6: range(3)},
    [((1, 0), (0, 0)), ((1, 0), (2, 0)), ((1, 0), (3, 0)),
     ((0, 0), (4, 0)),
     ((0, 1), (2, 1)), ((0, 1), (3, 1)),
     ((0, 2), (4, 1)), ((0, 2), (2, 2)),
     ((0, 3), (3, 2)), ((0, 3), (4, 2)),
     ((1, 1), (5, 0)), ((1, 1), (6, 0)),
     ((1, 2), (5, 1)), ((1, 2), (6, 1)),
     ((2, 0), (3, 1)), ((2, 1), (3, 2)), ((2, 2), (4, 0)), ((3, 0), (4, 1)),
     ((4, 2), (5, 2)), ((5, 2), (6, 0)), ((6, 2), (5, 0)), ((6, 2), (2, 0)),
     ((5, 1), (6, 1))],
)

# All pairs have exactly two constraints; one component is a cycle of
# eight pairs passing through each of the four variables twice, which is
# the parity window of the two-constraint component branching.
PARITY_BASE = (
    {v: range(3) for v in range(4)},
    [((0, 0), (1, 0)), ((1, 0), (2, 0)), ((2, 0), (3, 0)), ((3, 0), (0, 1)),
     ((0, 1), (1, 1)), ((1, 1), (2, 1)), ((2, 1), (3, 1)), ((3, 1), (0, 0)),
     ((0, 2), (1, 2)), ((1, 2), (2, 2)), ((2, 2), (3, 2)), ((3, 2), (0, 2))],
)

RULE_BASES = {
    "isolated": ISOLATED_BASE,
    "isolated-four": ISOLATED_FOUR_BASE,
    "four-color-restriction": FOUR_RESTRICTION_BASE,
    "implication-cycle": IMPLICATION_CYCLE_BASE,
    "implication": IMPLICATION_BASE,
    "triple-with-four": TRIPLE_FOUR_BASE,
    "two-component-parity": PARITY_BASE,
}


def relabel(rng, inst):
    """Random isomorphic copy: permute variable ids and per-variable colors."""
    vs = inst.variables()
    ids = list(range(len(vs)))
    rng.shuffle(ids)
    vmap = dict(zip(vs, ids))
    cmap = {}
    for v in vs:
        cs = sorted(inst.colors[v])
        perm = cs[:]
        rng.shuffle(perm)
        cmap[v] = dict(zip(cs, perm))
    out = Instance.build({vmap[v]: {cmap[v][c] for c in inst.colors[v]} for v in vs})
    for p, q in inst.constraints():
        out.add_constraint(
            (vmap[p[0]], cmap[p[0]][p[1]]), (vmap[q[0]], cmap[q[0]][q[1]])
        )
    return out


def walk_rules(inst, tally, node_cap=300, brute_cap=11):
    """Branch like the solver, checking every rule application.

    Each application is checked for positive claimed decreases within the
    rule's work-factor cap, a real (post-simplification) decrease at
    least as large as claimed, and equisatisfiability of the child set
    against the brute-force oracle.  Rule names are tallied.
    """
    pending = [inst]
    nodes = 0
    while pending and nodes < node_cap:
        cur = pending.pop()
        nodes += 1
        red, _ = simplify(cur.copy())
        if red is None or red.n == 0:
            continue
        got = choose_rule(red, SearchStats())
        if got is None:
            tally["matching"] += 1
            want = brute_csp(red.copy()) is not None
            assert (matching_solve(red) is not None) == want
            continue
        name, children = got
        tally[name] += 1
        live = [b for b in children if not b.dead]
        vec = live_vector(children)
        assert all(r > 0 for r in vec), (name, vec)
        if len(vec) > 1:
            assert work_factor(*vec) <= claim_cap(name) + 1e-9, (name, vec)
        if red.n <= brute_cap:
            want = brute_csp(red.copy()) is not None
            have = any(brute_csp(b.inst.copy()) is not None for b in live)
            assert have == want, name
        base = contrib_measure(red)
        for b in live:
            sub, _ = simplify(b.inst.copy())
            if sub is not None:
                drop = base - contrib_measure(sub)
                assert drop >= b.claimed - 1e-9, (name, drop, b.claimed)
            pending.append(b.inst)
    return nodes
