"""Each branching rule, triggered deterministically and fuzzed via relabeling.

The walker in helpers checks every application for positive claimed
decreases under the rule's cap, post-simplification decreases at least
as large as claimed, and equisatisfiability against the brute oracle.
"""

import random
from collections import Counter

from csp32.instance import simplify
from csp32.oracle import structured_csp
from csp32.solver import SearchStats, choose_rule

from helpers import RULE_BASES, build_instance, relabel, walk_rules

EXPECTED_RULE = {
    "isolated": "isolated",
    "isolated-four": "isolated",
    "four-color-restriction": "four-color-restriction",
    "implication-cycle": "implication-cycle",
    "implication": "implication",
    "triple-with-four": "triple-with-four",
    "two-component-parity": "two-component-parity",
}


def test_bases_are_reduced_and_fire_their_rule():
    for name, (colors, cons) in RULE_BASES.items():
        inst = build_instance(colors, cons)
        red, trace = simplify(inst.copy())
        assert red is not None and red.n == inst.n and not trace, name
        got = choose_rule(red, SearchStats())
        assert got is not None, name
        assert got[0] == EXPECTED_RULE[name], (name, got[0])


def test_relabeled_bases_stay_checkable():
    rng = random.Random(808)
    tally = Counter()
    for name, (colors, cons) in RULE_BASES.items():
        base = build_instance(colors, cons)
        for _ in range(25):
            walk_rules(relabel(rng, base), tally)
    for name in set(EXPECTED_RULE.values()):
        assert tally[name] >= 20, (name, tally)


def test_structured_walks_cover_organic_rules():
    rng = random.Random(909)
    tally = Counter()
    profiles = [
        lambda r: structured_csp(r, [3] * r.randrange(6, 11)),
        lambda r: structured_csp(r, [2] * r.randrange(6, 11)),
        lambda r: structured_csp(r, [r.choice([1, 2]) for _ in range(8)]),
        lambda r: structured_csp(r, [4, 4] + [3] * 5),
        lambda r: structured_csp(r, [3, 3, 3, 3]),
    ]
    for trial in range(200):
        inst = profiles[trial % len(profiles)](rng)
        if inst is not None:
            walk_rules(inst, tally)
    for name in (
        "dangling",
        "triple-with-two",
        "high-degree",
        "large-three-component",
        "large-two-component",
        "small-three-component",
    ):
        assert tally[name] >= 25, (name, tally)
