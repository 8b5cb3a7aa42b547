"""Binary CSP instances, the polynomial simplifications, and solution lifting.

An instance holds variables with lists of available colors and a set of
constraints, each forbidding one (variable,color) pair from occurring
together with another.  Color ids are stable small integers: removing a
color from a variable never renumbers the rest, so constraints stay
valid across reductions.

Every reduction records a lift step; replaying the steps most recent
first over a solution of the reduced instance reconstructs a solution of
the original one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .analysis import EPSILON

# A (variable, color) pair.
Pair = tuple[int, int]
# Total assignment: variable id -> color id.
Assignment = dict[int, int]


def canon(a: Pair, b: Pair) -> tuple[Pair, Pair]:
    """Canonical (unordered) form of a constraint."""
    return (a, b) if a <= b else (b, a)


# ---------------------------------------------------------------------------
# Lift steps


@dataclass(frozen=True)
class Assigned:
    var: int
    color: int


@dataclass(frozen=True)
class TwoColorEliminated:
    """Variable var had colors (color_r, color_g) left and was projected out.

    At lift time pick color_r unless some pair of conflict_r appears in
    the solution; the product constraints added at elimination time
    guarantee one of the two colors is always free.
    """

    var: int
    color_r: int
    color_g: int
    conflict_r: tuple[Pair, ...]
    conflict_g: tuple[Pair, ...]


@dataclass(frozen=True)
class IsolatedMerge:
    """Two three-color variables joined by an isolated constraint were merged.

    Each color of the merged variable decodes to a full coloring of the
    two source variables (the kept color on one, the isolated color on
    the other).
    """

    new_var: int
    decode: tuple[tuple[int, Pair, Pair], ...]  # (merged color, src pair, partner pair)


@dataclass(frozen=True)
class DeadColorRemoved:
    var: int
    color: int


@dataclass(frozen=True)
class DominatedColorRemoved:
    var: int
    color: int


@dataclass(frozen=True)
class FreePairUsed:
    a: Pair
    b: Pair


LiftStep = object
LiftTrace = list


# ---------------------------------------------------------------------------
# Instance


class Instance:
    """A (d,2)-CSP instance with an incrementally maintained adjacency index."""

    __slots__ = ("colors", "adj", "palette", "next_id")

    def __init__(self):
        self.colors: dict[int, set[int]] = {}
        self.adj: dict[Pair, set[Pair]] = {}
        # Optional display labels: var -> {color id: label}; never consulted
        # by the algorithms, only by serialization and decoding.
        self.palette: dict[int, dict[int, object]] = {}
        self.next_id = 0

    # -- construction -------------------------------------------------------

    @classmethod
    def build(
        cls,
        colors: dict[int, Iterable[int]],
        constraints: Iterable[tuple[Pair, Pair]] = (),
        palette: Optional[dict[int, dict[int, object]]] = None,
    ) -> "Instance":
        inst = cls()
        for v, cs in colors.items():
            inst.colors[v] = set(cs)
            for c in inst.colors[v]:
                inst.adj[(v, c)] = set()
        inst.next_id = max(inst.colors, default=-1) + 1
        if palette:
            inst.palette = {v: dict(m) for v, m in palette.items()}
        for a, b in constraints:
            inst.add_constraint(tuple(a), tuple(b))
        return inst

    def copy(self) -> "Instance":
        inst = Instance.__new__(Instance)
        inst.colors = {v: set(cs) for v, cs in self.colors.items()}
        inst.adj = {p: set(q) for p, q in self.adj.items()}
        inst.palette = dict(self.palette)
        inst.next_id = self.next_id
        return inst

    # -- views --------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.colors)

    def constraints(self) -> list[tuple[Pair, Pair]]:
        """All constraints in canonical sorted order."""
        out = set()
        for p, qs in self.adj.items():
            for q in qs:
                out.add(canon(p, q))
        return sorted(out)

    def pairs(self) -> list[Pair]:
        return sorted(self.adj)

    def degree(self, p: Pair) -> int:
        return len(self.adj[p])

    def has_empty_variable(self) -> bool:
        return any(not cs for cs in self.colors.values())

    def variables(self) -> list[int]:
        return sorted(self.colors)

    # -- mutation -----------------------------------------------------------

    def add_variable(self, colors: Iterable[int], var: Optional[int] = None) -> int:
        v = self.next_id if var is None else var
        if v in self.colors:
            raise ValueError(f"variable {v} already present")
        self.colors[v] = set(colors)
        for c in self.colors[v]:
            self.adj[(v, c)] = set()
        self.next_id = max(self.next_id, v + 1)
        return v

    def add_constraint(self, a: Pair, b: Pair):
        """Insert a constraint, normalizing degenerate same-variable forms.

        A constraint of a pair against itself is a plain color removal;
        one between two distinct colors of the same variable can never be
        violated and is dropped.
        """
        for p in (a, b):
            if p not in self.adj:
                raise ValueError(f"pair {p} not available in instance")
        if a == b:
            self.remove_color(a[0], a[1])
            return
        if a[0] == b[0]:
            return
        self.adj[a].add(b)
        self.adj[b].add(a)

    def remove_color(self, var: int, color: int):
        p = (var, color)
        for q in self.adj.pop(p):
            self.adj[q].discard(p)
        self.colors[var].discard(color)

    def remove_variable(self, var: int):
        for c in list(self.colors[var]):
            self.remove_color(var, c)
        del self.colors[var]
        self.palette.pop(var, None)

    def assign(self, p: Pair) -> Assigned:
        """Use pair p: drop its variable and propagate color removals.

        Neighbors of p lose the constrained color; neighbors of p's
        sibling colors merely lose the constraint.  May leave variables
        with zero colors, which the caller must treat as unsatisfiable.
        """
        var, color = p
        if p not in self.adj:
            raise ValueError(f"pair {p} not available")
        stripped = sorted(self.adj[p])
        self.remove_variable(var)
        for q in stripped:
            if q in self.adj:  # a previous strip may have removed it
                self.remove_color(q[0], q[1])
        return Assigned(var, color)


# ---------------------------------------------------------------------------
# Size measure and checking


def measure(inst: Instance) -> float:
    """Instance size n3 + (2 - epsilon) * n4.

    Variables with one or two colors must have been simplified away
    before measuring.
    """
    n3 = n4 = 0
    for v, cs in inst.colors.items():
        k = len(cs)
        if k == 3:
            n3 += 1
        elif k >= 4:
            n4 += 1
        else:
            raise ValueError(f"variable {v} has {k} colors; simplify before measuring")
    return n3 + (2 - EPSILON) * n4


def check(inst: Instance, asg: Assignment) -> bool:
    """True iff asg is total over inst's variables and violates no constraint."""
    for v in inst.colors:
        if v not in asg:
            raise ValueError(f"assignment is missing variable {v}")
        if asg[v] not in inst.colors[v]:
            return False
    for (a, b) in inst.constraints():
        if asg[a[0]] == a[1] and asg[b[0]] == b[1]:
            return False
    return True


def validate(inst: Instance, max_colors: int = 4) -> list[str]:
    """Structural invariant check; returns human-readable violations."""
    problems = []
    for v, cs in inst.colors.items():
        if len(cs) > max_colors:
            problems.append(f"variable {v} has {len(cs)} colors (max {max_colors})")
        for c in cs:
            if (v, c) not in inst.adj:
                problems.append(f"pair {(v, c)} missing from adjacency")
    for p, qs in inst.adj.items():
        v, c = p
        if v not in inst.colors or c not in inst.colors.get(v, ()):
            problems.append(f"adjacency key {p} refers to a removed color")
            continue
        for q in qs:
            if q not in inst.adj:
                problems.append(f"constraint {canon(p, q)} references removed pair {q}")
            elif p not in inst.adj[q]:
                problems.append(f"constraint {canon(p, q)} not symmetric")
            if q[0] == v:
                problems.append(f"constraint {canon(p, q)} joins two colors of variable {v}")
    return problems


# ---------------------------------------------------------------------------
# Simplification lemmas


def eliminate_two_color(inst: Instance, v: int) -> TwoColorEliminated:
    """Project out a variable restricted to two colors.

    For the two colors R and G, every combination of a conflict of R
    with a conflict of G would leave v uncolorable, so those pairs
    become constraints and v disappears.  In-place on inst.
    """
    cs = sorted(inst.colors[v])
    if len(cs) != 2:
        raise ValueError(f"variable {v} has {len(cs)} colors, expected 2")
    r, g = cs
    conflict_r = sorted(inst.adj[(v, r)])
    conflict_g = sorted(inst.adj[(v, g)])
    inst.remove_variable(v)
    for a, b in product(conflict_r, conflict_g):
        # Pairs may have vanished if a prior product removed a color.
        if a in inst.adj and b in inst.adj:
            inst.add_constraint(a, b)
    return TwoColorEliminated(v, r, g, tuple(conflict_r), tuple(conflict_g))


def find_free_pair(inst: Instance) -> Optional[tuple[Pair, Pair]]:
    """Two pairs on distinct variables constrained only against each other's
    variable, and never against each other: both can be used outright."""
    for p in inst.pairs():
        v, x = p
        for q in inst.pairs():
            w, y = q
            if w <= v:
                continue
            if all(t[0] == w and t[1] != y for t in inst.adj[p]) and all(
                t[0] == v and t[1] != x for t in inst.adj[q]
            ):
                return p, q
    return None


def apply_free_pair(inst: Instance) -> Optional[tuple[Instance, LiftStep]]:
    found = find_free_pair(inst)
    if found is None:
        return None
    p, q = found
    out = inst.copy()
    out.assign(p)
    if q in out.adj:
        out.assign(q)
    return out, FreePairUsed(p, q)


def find_dominated(inst: Instance) -> Optional[tuple[int, int, int]]:
    """(var, keeper color, dominated color): conflicts of the keeper are a
    subset of the dominated color's, so the dominated color is never needed."""
    for v in inst.variables():
        cs = sorted(inst.colors[v])
        for r in cs:
            for b in cs:
                if r != b and inst.adj[(v, r)] <= inst.adj[(v, b)]:
                    return v, r, b
    return None


def apply_dominance(inst: Instance) -> Optional[tuple[Instance, LiftStep]]:
    found = find_dominated(inst)
    if found is None:
        return None
    v, _r, b = found
    out = inst.copy()
    out.remove_color(v, b)
    return out, DominatedColorRemoved(v, b)


def apply_unconstrained(inst: Instance) -> Optional[tuple[Instance, LiftStep]]:
    """A pair with no constraints at all is always safe to use."""
    for p in inst.pairs():
        if not inst.adj[p]:
            out = inst.copy()
            step = out.assign(p)
            return out, step
    return None


def find_dead_color(inst: Instance) -> Optional[Pair]:
    """A pair constrained against every available color of another variable
    can never be used."""
    for p in inst.pairs():
        by_var: dict[int, set[int]] = {}
        for (w, c) in inst.adj[p]:
            by_var.setdefault(w, set()).add(c)
        for w, hit in by_var.items():
            if hit == inst.colors[w]:
                return p
    return None


def apply_dead_color(inst: Instance) -> Optional[tuple[Instance, LiftStep]]:
    p = find_dead_color(inst)
    if p is None:
        return None
    out = inst.copy()
    out.remove_color(p[0], p[1])
    return out, DeadColorRemoved(p[0], p[1])


_LEMMAS = (apply_free_pair, apply_dominance, apply_unconstrained, apply_dead_color)


def simplify(inst: Instance) -> tuple[Optional[Instance], LiftTrace]:
    """Run all polynomial simplifications to a fixpoint.

    Returns (reduced instance, trace), or (None, trace) when some
    variable runs out of colors.  The result has only 3- and 4-color
    variables and none of the simplification patterns left.
    """
    cur = inst.copy()
    trace: LiftTrace = []
    while True:
        # 0/1/2-color variables first; cheapest and enable the rest.
        low = None
        for v in cur.variables():
            k = len(cur.colors[v])
            if k == 0:
                return None, trace
            if k <= 2:
                low = v
                break
        if low is not None:
            k = len(cur.colors[low])
            if k == 1:
                (c,) = cur.colors[low]
                trace.append(cur.assign((low, c)))
            else:
                trace.append(eliminate_two_color(cur, low))
            continue
        for lemma in _LEMMAS:
            hit = lemma(cur)
            if hit is not None:
                cur, step = hit
                trace.append(step)
                break
        else:
            return cur, trace


def is_reduced(inst: Instance) -> bool:
    if any(len(cs) != 3 and len(cs) != 4 for cs in inst.colors.values()):
        return False
    if apply_unconstrained(inst) or apply_dead_color(inst):
        return False
    if apply_free_pair(inst) or apply_dominance(inst):
        return False
    return True


# ---------------------------------------------------------------------------
# Lifting


def lift(asg: Assignment, trace: LiftTrace) -> Assignment:
    """Map a solution of the reduced instance back through recorded steps."""
    sol = dict(asg)

    def uses(p: Pair) -> bool:
        return sol.get(p[0]) == p[1]

    for step in reversed(trace):
        if isinstance(step, Assigned):
            sol[step.var] = step.color
        elif isinstance(step, FreePairUsed):
            sol[step.a[0]] = step.a[1]
            sol[step.b[0]] = step.b[1]
        elif isinstance(step, TwoColorEliminated):
            if not any(uses(p) for p in step.conflict_r):
                sol[step.var] = step.color_r
            elif not any(uses(p) for p in step.conflict_g):
                sol[step.var] = step.color_g
            else:
                raise ValueError(
                    f"both colors of eliminated variable {step.var} are blocked; "
                    "assignment does not satisfy the reduced instance"
                )
        elif isinstance(step, IsolatedMerge):
            if step.new_var not in sol:
                raise ValueError(f"merged variable {step.new_var} unassigned")
            color = sol.pop(step.new_var)
            for merged_color, src, partner in step.decode:
                if merged_color == color:
                    sol[src[0]] = src[1]
                    sol[partner[0]] = partner[1]
                    break
            else:
                raise ValueError(f"merged variable {step.new_var} got unknown color {color}")
        elif isinstance(step, (DeadColorRemoved, DominatedColorRemoved)):
            pass  # color removal only narrows options; variable stays assigned
        else:
            raise TypeError(f"unknown lift step {step!r}")
    return sol
