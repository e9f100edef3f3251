"""G4: players alternately flip one of their own variables (or pass); whoever
makes the shared DNF formula true wins. Includes an exact solver and a
reduction to the ko-rule game on locking 2-toggles and 1-toggles.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .core import GadgetError, GadgetInstance, SystemOfGadgets
from .library import locking_2_toggle, one_toggle
from .two_player import GameGraph, GameState, GameValue, StateSpaceBudgetExceeded, retrograde


class InvalidInstance(GadgetError):
    pass


@dataclass(frozen=True)
class Var:
    name: str
    owner: int  # 1 or 2
    init: bool = False


@dataclass(frozen=True)
class G4Instance:
    vars: tuple
    clauses: tuple  # each a tuple of (name, positive) literals
    width: int

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "clauses", tuple(tuple((n, bool(p)) for n, p in c) for c in self.clauses))

    def problems(self) -> list[str]:
        out = []
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            out.append("duplicate variable names")
        if self.width < 1:
            out.append("width must be at least 1")
        for v in self.vars:
            if v.owner not in (1, 2):
                out.append(f"variable {v.name}: owner must be 1 or 2")
        for k, c in enumerate(self.clauses):
            if len(c) != self.width:
                out.append(f"clause {k}: has {len(c)} literals, width is {self.width}")
            for n, _ in c:
                if n not in names:
                    out.append(f"clause {k}: unknown variable {n!r}")
        return out

    def initial(self) -> tuple:
        return tuple(v.init for v in self.vars)

    def satisfied(self, assignment: tuple) -> bool:
        pos = {v.name: k for k, v in enumerate(self.vars)}
        return any(all(assignment[pos[n]] == p for n, p in c) for c in self.clauses)


def g4_graph(inst: G4Instance, budget: int = 1_000_000) -> GameGraph:
    """Game graph on (assignment, mover); winning moves satisfy the formula."""
    if inst.problems():
        raise InvalidInstance("; ".join(inst.problems()))
    if inst.satisfied(inst.initial()):
        raise InvalidInstance("formula is satisfied by the initial assignment")
    owned = {p: [k for k, v in enumerate(inst.vars) if v.owner == p] for p in (1, 2)}
    start = (inst.initial(), 1)
    states, index, succ, winning = [start], {start: 0}, [], []
    queue = deque([start])
    while queue:
        a, mover = queue.popleft()
        row, wins = [], []
        options = [None] + owned[mover]
        for k in options:
            b = a if k is None else a[:k] + (not a[k],) + a[k + 1:]
            move = "pass" if k is None else inst.vars[k].name
            if inst.satisfied(b):
                wins.append(move)
                continue
            n = (b, 3 - mover)
            j = index.get(n)
            if j is None:
                if len(states) >= budget:
                    raise StateSpaceBudgetExceeded(f"more than {budget} G4 states")
                j = index[n] = len(states)
                states.append(n)
                queue.append(n)
            row.append((move, j))
        succ.append(row)
        winning.append(wins)
    return GameGraph(states, index, succ, winning, True)


def g4_solve(inst: G4Instance, budget: int = 1_000_000) -> GameValue:
    """Value of the initial position for Player 1."""
    return retrograde(g4_graph(inst, budget))[0]


@dataclass
class G4Map:
    hubs: dict  # player -> hub class node
    alternator: int
    finish: int
    checker: str
    literal_gadgets: dict = field(default_factory=dict)  # (clause, position) -> instance
    loops: dict = field(default_factory=dict)  # variable name -> loop instances
    size: dict = field(default_factory=dict)


class _Builder:
    def __init__(self):
        self.instances, self.edges, self.nodes = [], [], []
        self.fresh = itertools.count()
        self.toggle, self.l2t = one_toggle(), locking_2_toggle()

    def node(self, hint: str) -> str:
        name = f"{hint}#{next(self.fresh)}"
        self.nodes.append(name)
        return name

    def add(self, gtype, state, ends: dict, prefix: str) -> int:
        k = len(self.instances)
        name = f"{prefix}#{k}"
        locs = tuple(f"{name}.{x}" for x in gtype.locations)
        self.instances.append(GadgetInstance(gtype, state, locs, name))
        for x, cls in ends.items():
            self.edges.append((f"{name}.{x}", cls))
        return k

    def one(self, a: str, b: str, prefix: str) -> int:
        return self.add(self.toggle, 1, {"A": a, "B": b}, prefix)

    def series(self, a: str, b: str, prefix: str) -> tuple:
        mid = self.node(prefix)
        return self.one(a, mid, prefix), self.one(mid, b, prefix)


def g4_to_gadgets(inst: G4Instance) -> tuple[SystemOfGadgets, GameState, G4Map]:
    """Ko-rule game whose value for Player 1 equals the G4 value.

    Each player owns a hub. A turn descends the mover's binary tree of
    branch nodes (the mover chooses, the opponent's reply is forced), runs
    once around the chosen variable loop (flipping every literal gadget in
    it) or the pass loop, climbs back to the hub, and then either crosses the
    alternator to hand the turn over or enters the checker. A checker path
    through a clause is open exactly when every literal in it is true; it
    ends at the finish line, after which the opponent is stuck.
    """
    if inst.problems():
        raise InvalidInstance("; ".join(inst.problems()))
    b = _Builder()
    hubs = {1: b.node("H1"), 2: b.node("H2")}
    checker = b.node("K")
    alternator = b.one(hubs[1], hubs[2], "alternator")
    for p in (1, 2):
        b.series(hubs[p], checker, f"check{p}")

    # literal occurrences, grouped by variable
    occ = {v.name: [] for v in inst.vars}
    for c, clause in enumerate(inst.clauses):
        for j, (name, positive) in enumerate(clause):
            occ[name].append((c, j, positive))

    value = {v.name: v.init for v in inst.vars}
    literal_at: dict = {}
    loops: dict = {}
    pending_checker = {}  # (clause, position) -> (C node, D node)

    def build_loop(name: str | None) -> str:
        entry = b.node(f"E:{name or 'pass'}")
        members = []
        items = occ.get(name, []) if name is not None else []
        if not items:
            mid = b.node("loop")
            members += [b.one(entry, mid, "loop"), b.one(mid, entry, "loop")]
        else:
            n = 2 * len(items)
            ring = [entry] + [b.node("loop") for _ in range(n - 1)] + [entry]
            for k, (c, j, positive) in enumerate(items):
                true = value[name] == positive
                state = 2 if true else 1
                for half in (0, 1):
                    here, there = ring[2 * k + half], ring[2 * k + half + 1]
                    a, bb = (here, there) if positive else (there, here)
                    if half == 0:
                        cn, dn = b.node(f"c{c}.in{j}"), b.node(f"c{c}.out{j}")
                        pending_checker[(c, j)] = (cn, dn)
                    else:
                        cn, dn = b.node("spare"), b.node("spare")
                    g = b.add(b.l2t, state, {"A": a, "B": bb, "C": cn, "D": dn}, f"lit:{name}")
                    members.append(g)
                    if half == 0:
                        literal_at[(c, j)] = g
        loops[name or "pass"] = tuple(members)
        return entry

    def build_tree(cls: str, leaves: list, tag: str):
        if len(leaves) == 1:
            entry = build_loop(leaves[0])
            b.series(cls, entry, f"leaf:{tag}")
            return
        half = (len(leaves) + 1) // 2
        cl, cr = b.node("cl"), b.node("cr")
        left, right = b.node("left"), b.node("right")
        b.add(b.l2t, 2, {"A": cls, "B": cl, "C": cls, "D": cr}, f"branch:{tag}")
        b.add(b.l2t, 2, {"A": cl, "B": left, "C": cr, "D": right}, f"branch:{tag}")
        build_tree(left, leaves[:half], tag)
        build_tree(right, leaves[half:], tag)

    for p in (1, 2):
        leaves = [v.name for v in inst.vars if v.owner == p] + [None]
        build_tree(hubs[p], leaves, f"P{p}")

    final = b.node("F")
    for c, clause in enumerate(inst.clauses):
        cur = checker
        for j in range(len(clause)):
            cn, dn = pending_checker[(c, j)]
            b.edges += [(cn, cur)]
            nxt = final if j == len(clause) - 1 else b.node(f"c{c}.step{j}")
            b.one(dn, nxt, f"clause{c}")
            cur = nxt
    dead_end = b.node("Z")
    finish = b.one(final, dead_end, "finish")

    system = SystemOfGadgets(tuple(b.instances), tuple(b.edges), nodes=tuple(b.nodes))
    start = GameState.initial(system, hubs[1])
    size = {"instances": len(b.instances), "classes": len(system.classes)}
    return system, start, G4Map(hubs, alternator, finish, checker, literal_at, loops, size)


def _canonical(inst: G4Instance):
    """Key up to renaming variables within an owner and flipping polarities."""
    best = None
    by_owner = {p: [v for v in inst.vars if v.owner == p] for p in (1, 2)}
    for perm1 in itertools.permutations(by_owner[1]):
        for perm2 in itertools.permutations(by_owner[2]):
            order = list(perm1) + list(perm2)
            for flips in itertools.product((False, True), repeat=len(order)):
                rename = {v.name: (k, f) for k, (v, f) in enumerate(zip(order, flips))}
                init = tuple(v.init != f for v, f in zip(order, flips))
                clauses = tuple(sorted(
                    tuple(sorted((rename[n][0], p != rename[n][1]) for n, p in c)) for c in inst.clauses
                ))
                key = (tuple(v.owner for v in order), init, clauses)
                if best is None or key < best:
                    best = key
    return best


def g4_corpus(max_vars_per_player: int = 2, max_clauses: int = 2, max_width: int = 2):
    """Every valid instance up to symmetry, formula initially unsatisfied.

    Clauses use distinct variables and the formula is a set of clauses.
    """
    seen = set()
    for n1 in range(max_vars_per_player + 1):
        for n2 in range(max_vars_per_player + 1):
            names = [f"x{k}" for k in range(n1)] + [f"y{k}" for k in range(n2)]
            owners = [1] * n1 + [2] * n2
            for w in range(1, max_width + 1):
                lits = []
                for vs in itertools.combinations(names, w):
                    for signs in itertools.product((True, False), repeat=w):
                        lits.append(tuple(zip(vs, signs)))
                for k in range(max_clauses + 1):
                    for clauses in itertools.combinations(lits, k):
                        for init in itertools.product((False, True), repeat=len(names)):
                            inst = G4Instance(tuple(Var(n, o, i) for n, o, i in zip(names, owners, init)),
                                              clauses, w)
                            if inst.satisfied(inst.initial()):
                                continue
                            key = _canonical(inst)
                            if key in seen:
                                continue
                            seen.add(key)
                            yield inst
