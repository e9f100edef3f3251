"""Gadgets, systems of gadgets, and multi-robot configurations.

A gadget type is given by its transition graph: a set of tuples
``(state, from_location, to_location, next_state)``. A system places gadget
instances on global location names and joins locations with a connection
graph. Robots move freely inside a connected component of that graph, so a
robot's position is only tracked up to its *location class*.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

Transition = tuple  # (state, from_location, to_location, next_state)


class GadgetError(Exception):
    """Base class for errors raised by this package."""


class IllegalMove(GadgetError):
    pass


class NondeterministicGadget(GadgetError):
    pass


@dataclass(frozen=True)
class GadgetType:
    name: str
    states: tuple
    locations: tuple
    transitions: tuple
    tunnels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "transitions", tuple(tuple(t) for t in self.transitions))
        if self.tunnels is not None:
            object.__setattr__(self, "tunnels", tuple(tuple(p) for p in self.tunnels))

    @cached_property
    def open_from(self) -> dict:
        """Map ``(state, location)`` to the transitions leaving it."""
        table = defaultdict(list)
        for t in self.transitions:
            table[(t[0], t[1])].append(t)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def by_state(self) -> dict:
        table = defaultdict(list)
        for t in self.transitions:
            table[t[0]].append(t)
        return {s: tuple(table.get(s, ())) for s in self.states}

    def diagnostics(self) -> list[str]:
        out = []
        states, locs = set(self.states), set(self.locations)
        if len(states) != len(self.states):
            out.append(f"{self.name}: duplicate state identifiers")
        if len(locs) != len(self.locations):
            out.append(f"{self.name}: duplicate location identifiers")
        seen = set()
        for t in self.transitions:
            if len(t) != 4:
                out.append(f"{self.name}: malformed transition {t!r}")
                continue
            s, a, b, s2 = t
            for st in (s, s2):
                if st not in states:
                    out.append(f"{self.name}: transition {t!r} references undeclared state {st!r}")
            for loc in (a, b):
                if loc not in locs:
                    out.append(f"{self.name}: transition {t!r} references undeclared location {loc!r}")
            if t in seen:
                out.append(f"{self.name}: duplicate transition {t!r}")
            seen.add(t)
        if self.tunnels is not None:
            flat = [x for p in self.tunnels for x in p]
            if any(len(p) != 2 for p in self.tunnels) or sorted(map(repr, flat)) != sorted(
                map(repr, self.locations)
            ):
                out.append(f"{self.name}: tunnels do not partition the locations into pairs")
            pair_of = {}
            for p in self.tunnels:
                for x in p:
                    pair_of[x] = frozenset(p)
            for t in self.transitions:
                if len(t) == 4 and t[1] != t[2] and pair_of.get(t[1]) != frozenset((t[1], t[2])):
                    out.append(f"{self.name}: transition {t!r} leaves its declared tunnel")
        return out


def is_deterministic(gtype: GadgetType) -> bool:
    """Every (state, location) vertex of the transition graph has out-degree <= 1."""
    return all(len(ts) <= 1 for ts in gtype.open_from.values())


def is_reversible(gtype: GadgetType) -> bool:
    edges = set(gtype.transitions)
    return all((s2, b, a, s) in edges for (s, a, b, s2) in edges)


def is_dag(gtype: GadgetType) -> bool:
    succ = defaultdict(set)
    for s, _, _, s2 in gtype.transitions:
        if s == s2:
            return False
        succ[s].add(s2)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {s: WHITE for s in gtype.states}

    def visit(root):
        stack = [(root, iter(succ[root]))]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if colour[nxt] == GREY:
                    return False
                if colour[nxt] == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, iter(succ[nxt])))
                    break
            else:
                colour[node] = BLACK
                stack.pop()
        return True

    return all(colour[s] != WHITE or visit(s) for s in gtype.states)


def is_k_tunnel(gtype: GadgetType) -> tuple | None:
    """Return the lexicographically smallest tunnel partition, or None.

    Transitions between distinct locations force their endpoints into one
    tunnel; the remaining locations are paired greedily in declaration order.
    """
    locs = gtype.locations
    if len(locs) % 2:
        return None
    partner = {}
    for _, a, b, _ in gtype.transitions:
        if a == b:
            continue
        if partner.get(a, b) != b or partner.get(b, a) != a:
            return None
        partner[a] = b
        partner[b] = a
    free = [x for x in locs if x not in partner]
    for x, y in zip(free[0::2], free[1::2]):
        partner[x] = y
        partner[y] = x
    order = {x: i for i, x in enumerate(locs)}
    pairs = {tuple(sorted((x, partner[x]), key=order.__getitem__)) for x in locs}
    return tuple(sorted(pairs, key=lambda p: order[p[0]]))


@dataclass(frozen=True)
class GadgetInstance:
    type: GadgetType
    state: Hashable
    locations: tuple
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(self.locations))

    @cached_property
    def global_of(self) -> dict:
        return dict(zip(self.type.locations, self.locations))

    @cached_property
    def local_of(self) -> dict:
        return dict(zip(self.locations, self.type.locations))


@dataclass(frozen=True)
class Configuration:
    """Gadget state vector plus robot count per location class."""

    states: tuple
    counts: tuple

    @property
    def robots(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class Move:
    kind: str  # "traverse" | "spawn"
    instance: int | None = None
    transition: tuple | None = None
    cls: int | None = None

    @staticmethod
    def traverse(instance: int, transition: Sequence) -> "Move":
        return Move("traverse", instance, tuple(transition))

    @staticmethod
    def spawn(cls: int) -> "Move":
        return Move("spawn", cls=cls)


@dataclass(frozen=True)
class SystemOfGadgets:
    """Gadget instances plus a connection graph over global locations.

    ``spawners`` and ``destroyers`` name global locations; the classes they
    lie in become spawner / destroyer classes. ``nodes`` declares free
    (non-gadget) nodes that carry no edges yet.
    """

    instances: tuple
    connections: tuple = ()
    spawners: tuple = ()
    destroyers: tuple = ()
    nodes: tuple = ()
    directed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "connections", tuple(tuple(e) for e in self.connections))
        for f in ("spawners", "destroyers", "nodes"):
            object.__setattr__(self, f, tuple(getattr(self, f)))

    @cached_property
    def gadget_locations(self) -> tuple:
        return tuple(g for inst in self.instances for g in inst.locations)

    @cached_property
    def all_locations(self) -> tuple:
        seen = dict.fromkeys(self.gadget_locations)
        for extra in (self.nodes, [x for e in self.connections for x in e], self.spawners, self.destroyers):
            for x in extra:
                seen.setdefault(x)
        return tuple(seen)

    @cached_property
    def owner(self) -> dict:
        """Global gadget location -> (instance index, local location)."""
        out = {}
        for i, inst in enumerate(self.instances):
            for loc, g in zip(inst.type.locations, inst.locations):
                out.setdefault(g, (i, loc))
        return out

    @cached_property
    def _classes(self):
        parent = {x: x for x in self.all_locations}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.connections:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        groups: dict = {}
        for x in self.all_locations:
            groups.setdefault(find(x), []).append(x)
        classes = tuple(tuple(g) for g in groups.values())
        class_of = {x: i for i, g in enumerate(classes) for x in g}
        return classes, class_of

    @property
    def classes(self) -> tuple:
        """Location classes (connected components), ordered by first location."""
        return self._classes[0]

    @property
    def class_of(self) -> dict:
        return self._classes[1]

    @cached_property
    def spawner_classes(self) -> frozenset:
        return frozenset(self.class_of[x] for x in self.spawners if x in self.class_of)

    @cached_property
    def destroyer_classes(self) -> frozenset:
        return frozenset(self.class_of[x] for x in self.destroyers if x in self.class_of)

    @cached_property
    def moves_by_class(self) -> dict:
        """class -> list of (instance, state, transition) that start in it."""
        table = defaultdict(list)
        for i, inst in enumerate(self.instances):
            for t in inst.type.transitions:
                table[self.class_of[inst.locations[inst.type.locations.index(t[1])]]].append((i, t))
        return dict(table)

    @cached_property
    def transition_classes(self) -> dict:
        """(instance, transition) -> (from class, to class)."""
        out = {}
        for i, inst in enumerate(self.instances):
            g = inst.global_of
            for t in inst.type.transitions:
                out[(i, t)] = (self.class_of[g[t[1]]], self.class_of[g[t[2]]])
        return out

    @cached_property
    def out_edges(self) -> dict:
        """Directed adjacency (meaningful when ``directed`` is set)."""
        table = defaultdict(list)
        for a, b in self.connections:
            table[a].append(b)
        return dict(table)

    @cached_property
    def in_degree(self) -> dict:
        deg = defaultdict(int)
        for _, b in self.connections:
            deg[b] += 1
        return dict(deg)

    def initial_states(self) -> tuple:
        return tuple(inst.state for inst in self.instances)

    def configuration(self, robots: Iterable | dict = (), states: Sequence | None = None) -> Configuration:
        """Build a configuration from robot locations (iterable or loc -> count)."""
        counts = [0] * len(self.classes)
        items = robots.items() if isinstance(robots, dict) else ((r, 1) for r in robots)
        for loc, n in items:
            c = self.class_of[loc]
            if c not in self.destroyer_classes:
                counts[c] += n
        return Configuration(tuple(states) if states is not None else self.initial_states(), tuple(counts))

    def with_states(self, states: Sequence) -> "SystemOfGadgets":
        insts = tuple(
            GadgetInstance(inst.type, s, inst.locations, inst.name) for inst, s in zip(self.instances, states)
        )
        return SystemOfGadgets(insts, self.connections, self.spawners, self.destroyers, self.nodes, self.directed)


def validate_system(system: SystemOfGadgets) -> list[str]:
    """Return diagnostics for every violated invariant; empty when well formed."""
    out = []
    checked = set()
    for inst in system.instances:
        if inst.type.name not in checked:
            checked.add(inst.type.name)
            out.extend(inst.type.diagnostics())
    seen = {}
    for i, inst in enumerate(system.instances):
        label = inst.name or f"instance {i}"
        if inst.state not in inst.type.states:
            out.append(f"{label}: state {inst.state!r} is not a state of {inst.type.name}")
        if len(inst.locations) != len(inst.type.locations):
            out.append(f"{label}: expected {len(inst.type.locations)} locations, got {len(inst.locations)}")
        if len(set(inst.locations)) != len(inst.locations):
            out.append(f"{label}: global locations are not distinct")
        for g in inst.locations:
            if g in seen and seen[g] != i:
                out.append(f"location {g!r} belongs to more than one instance")
            seen[g] = i
    known = set(system.all_locations)
    for kind, locs in (("spawner", system.spawners), ("destroyer", system.destroyers)):
        for x in locs:
            if x not in known:
                out.append(f"{kind} location {x!r} is unknown")
    both = system.spawner_classes & system.destroyer_classes
    for c in sorted(both):
        out.append(f"class {c} {list(system.classes[c])!r} is both a spawner and a destroyer class")
    return out


def legal_moves(system: SystemOfGadgets, config: Configuration) -> list[Move]:
    """All traversals open to some robot, then one spawn per spawner class."""
    moves = []
    for c, n in enumerate(config.counts):
        if n <= 0:
            continue
        for i, t in system.moves_by_class.get(c, ()):
            if config.states[i] == t[0]:
                moves.append(Move.traverse(i, t))
    moves.sort(key=lambda m: (m.instance, system.instances[m.instance].type.transitions.index(m.transition)))
    moves.extend(Move.spawn(c) for c in sorted(system.spawner_classes))
    return moves


def is_legal(system: SystemOfGadgets, config: Configuration, move: Move) -> bool:
    if move.kind == "spawn":
        return move.cls in system.spawner_classes
    if move.kind != "traverse" or move.instance is None or not 0 <= move.instance < len(system.instances):
        return False
    key = (move.instance, move.transition)
    if key not in system.transition_classes:
        return False
    src, _ = system.transition_classes[key]
    return config.states[move.instance] == move.transition[0] and config.counts[src] > 0


def apply_move(system: SystemOfGadgets, config: Configuration, move: Move) -> Configuration:
    """Return the successor configuration; inputs are never mutated."""
    if not is_legal(system, config, move):
        raise IllegalMove(f"{move!r} is not legal")
    counts = list(config.counts)
    if move.kind == "spawn":
        counts[move.cls] += 1
        return Configuration(config.states, tuple(counts))
    src, dst = system.transition_classes[(move.instance, move.transition)]
    counts[src] -= 1
    if dst not in system.destroyer_classes:
        counts[dst] += 1
    states = list(config.states)
    states[move.instance] = move.transition[3]
    return Configuration(tuple(states), tuple(counts))
