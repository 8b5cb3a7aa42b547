"""Instance bookkeeping, polynomial simplifications, and solution lifting."""

import random

import pytest

from csp32.instance import (
    Instance,
    check,
    eliminate_two_color,
    find_dead_color,
    find_dominated,
    find_free_pair,
    is_reduced,
    lift,
    measure,
    simplify,
    validate,
)
from csp32.oracle import brute_csp, random_csp


def small(colors, cons=()):
    inst = Instance.build({v: set(cs) for v, cs in colors.items()})
    for a, b in cons:
        inst.add_constraint(tuple(a), tuple(b))
    return inst


def test_build_and_views():
    inst = small({0: range(3), 1: range(4)}, [((0, 0), (1, 1))])
    assert inst.n == 2
    assert inst.variables() == [0, 1]
    assert inst.degree((0, 0)) == 1
    assert inst.constraints() == [((0, 0), (1, 1))]
    assert ((0, 0), (1, 1)) in [tuple(c) for c in inst.constraints()]


def test_add_constraint_normalizes_degenerate_forms():
    inst = small({0: range(3), 1: range(3)})
    # A pair against itself is a color removal.
    inst.add_constraint((0, 2), (0, 2))
    assert 2 not in inst.colors[0]
    # Distinct colors of one variable can never clash: dropped silently.
    inst.add_constraint((0, 0), (0, 1))
    assert inst.constraints() == []


def test_assign_strips_neighbors():
    inst = small(
        {0: range(3), 1: range(3), 2: range(3)},
        [((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 0), (2, 2))],
    )
    step = inst.assign((0, 0))
    assert step.var == 0
    assert 0 not in inst.colors
    # Conflicting colors of the neighbors are gone, the rest survive.
    assert inst.colors[1] == {1, 2}
    assert inst.colors[2] == {0, 1}


def test_copy_is_independent():
    inst = small({0: range(3), 1: range(3)}, [((0, 0), (1, 0))])
    dup = inst.copy()
    dup.remove_color(0, 0)
    assert 0 in inst.colors[0]
    assert (1, 0) in inst.adj and inst.adj[(1, 0)] == {(0, 0)}


def test_free_pair_detection():
    # Two variables fighting only each other always admit a joint choice.
    inst = small({0: range(3), 1: range(3)}, [((0, c), (1, c)) for c in range(3)])
    got = find_free_pair(inst)
    assert got is not None
    p, q = got
    assert p[0] != q[0]
    assert q not in inst.adj[p]
    # A pair with an outside constraint is not free.
    inst2 = small(
        {0: range(3), 1: range(3), 2: range(3)},
        [((0, c), (1, c)) for c in range(3)]
        + [((0, c), (2, c)) for c in range(3)]
        + [((1, c), (2, c)) for c in range(3)],
    )
    assert find_free_pair(inst2) is None


def test_dominance_detection():
    # Color 1 of variable 0 conflicts with a superset of color 0's set.
    inst = small(
        {0: range(3), 1: range(3), 2: range(3)},
        [((0, 0), (1, 0)), ((0, 1), (1, 0)), ((0, 1), (2, 0))],
    )
    got = find_dominated(inst)
    assert got is not None
    v, keep, drop = got
    assert (v, drop) == (0, 1)


def test_dead_color_detection():
    # (0,0) hits every color of variable 1, so it can never be used.
    inst = small(
        {0: range(3), 1: range(2)},
        [((0, 0), (1, 0)), ((0, 0), (1, 1))],
    )
    assert find_dead_color(inst) == (0, 0)


def test_two_color_elimination_products_conflicts():
    inst = small(
        {0: {0, 1}, 1: range(3), 2: range(3)},
        [((0, 0), (1, 0)), ((0, 1), (2, 0))],
    )
    step = eliminate_two_color(inst, 0)
    assert step.var == 0
    assert 0 not in inst.colors
    # Using (1,0) and (2,0) together would strand variable 0.
    assert ((1, 0), (2, 0)) in inst.constraints()


def test_simplify_refutes_overconstrained():
    # Three mutually exclusive variables on one shared color budget.
    inst = small(
        {v: {0} for v in range(2)},
        [((0, 0), (1, 0))],
    )
    red, trace = simplify(inst)
    assert red is None


def test_measure_weights():
    inst = small({0: range(3), 1: range(4), 2: range(4)})
    assert measure(inst) == pytest.approx(1 + 2 * (2 - 0.095543))


def test_validate_flags_problems():
    inst = small({0: range(5)})
    assert validate(inst, max_colors=4)
    assert not validate(inst, max_colors=5)


def test_simplify_fuzz_preserves_satisfiability():
    rng = random.Random(1234)
    for trial in range(400):
        inst = random_csp(rng, rng.randint(2, 7), max_colors=rng.choice([3, 4]),
                          density=rng.uniform(0.1, 0.5))
        want = brute_csp(inst.copy())
        red, trace = simplify(inst.copy())
        if red is None:
            assert want is None, trial
            continue
        assert is_reduced(red), trial
        sub = brute_csp(red.copy())
        assert (sub is not None) == (want is not None), trial
        if sub is not None:
            full = lift(sub, trace)
            assert check(inst, full), trial


def test_lift_restores_every_variable():
    rng = random.Random(99)
    for _ in range(100):
        inst = random_csp(rng, 6, density=0.2)
        red, trace = simplify(inst.copy())
        if red is None:
            continue
        sub = brute_csp(red.copy())
        if sub is None:
            continue
        full = lift(sub, trace)
        assert set(full) == set(inst.colors)
