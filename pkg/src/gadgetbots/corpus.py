"""Enumerated and seeded corpora of small systems and nets for oracle checks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from more_itertools import set_partitions

from .core import Configuration, GadgetInstance, SystemOfGadgets
from .library import locking_2_toggle, one_toggle, symmetric_self_closing_door, two_tunnel_toggle, us_switch
from .petri import PetriNet

SPAWN, SINK = "S", "K"


def corpus_types() -> tuple:
    """Deterministic library gadgets with at most four locations."""
    return (one_toggle(), us_switch(), two_tunnel_toggle(), locking_2_toggle(), symmetric_self_closing_door())


@dataclass(frozen=True)
class Case:
    label: str
    system: SystemOfGadgets
    start: Configuration


def _wirings(locs: list, spawner: bool, sink: bool):
    """Set partitions of the locations plus optional spawner and sink nodes."""
    extra = ([SPAWN] if spawner else []) + ([SINK] if sink else [])
    items = list(locs) + extra
    for part in set_partitions(items):
        if spawner and sink and any(SPAWN in b and SINK in b for b in part):
            continue
        edges = []
        for block in part:
            edges += [(block[0], x) for x in block[1:]]
        yield part, edges


def _robot_starts(system: SystemOfGadgets, max_robots: int):
    """Multisets of up to ``max_robots`` robots over ordinary classes."""
    special = system.spawner_classes | system.destroyer_classes
    ordinary = [c for c in range(len(system.classes)) if c not in special]
    for k in range(max_robots + 1):
        for combo in itertools.combinations_with_replacement(ordinary, k):
            counts = [0] * len(system.classes)
            for c in combo:
                counts[c] += 1
            yield tuple(counts)


def _type_choices(max_locations: int):
    types = corpus_types()
    for t in types:
        yield (t,)
    for a, b in itertools.combinations_with_replacement(range(len(types)), 2):
        if len(types[a].locations) + len(types[b].locations) <= max_locations:
            yield types[a], types[b]


def _build(types, states, edges, spawner, sink):
    insts = tuple(
        GadgetInstance(t, s, tuple(f"g{i}.{x}" for x in t.locations), f"g{i}")
        for i, (t, s) in enumerate(zip(types, states))
    )
    nodes = ((SPAWN,) if spawner else ()) + ((SINK,) if sink else ())
    return SystemOfGadgets(insts, tuple(edges), (SPAWN,) if spawner else (), (SINK,) if sink else (), nodes)


def _canonical(types, states, part):
    """Key identifying a system up to swapping two identical instances."""
    def key(order):
        rename = {}
        for new, old in enumerate(order):
            for x in types[old].locations:
                rename[f"g{old}.{x}"] = f"g{new}.{x}"
        blocks = sorted(tuple(sorted(rename.get(x, x) for x in b)) for b in part)
        return tuple(types[o].name for o in order), tuple(states[o] for o in order), tuple(blocks)

    orders = [(0, 1), (1, 0)] if len(types) == 2 and types[0] == types[1] else [tuple(range(len(types)))]
    return min(key(o) for o in orders)


def small_gadget_systems(max_locations: int = 6, max_robots: int = 2):
    """Every system of at most two corpus gadgets with at most ``max_locations``
    gadget locations, every wiring, optional spawner and sink, every initial
    state vector and every placement of up to ``max_robots`` robots."""
    for types in _type_choices(max_locations):
        locs = [f"g{i}.{x}" for i, t in enumerate(types) for x in t.locations]
        for states in itertools.product(*(t.states for t in types)):
            for spawner, sink in itertools.product((False, True), repeat=2):
                seen = set()
                for part, edges in _wirings(locs, spawner, sink):
                    if len(types) == 2 and types[0] == types[1]:
                        k = _canonical(types, states, part)
                        if k in seen:
                            continue
                        seen.add(k)
                    system = _build(types, states, edges, spawner, sink)
                    label = "+".join(t.name for t in types)
                    for counts in _robot_starts(system, max_robots):
                        yield Case(label, system, Configuration(states, counts))


def sampled_gadget_systems(count: int, seed: int = 0, max_robots: int = 2):
    """Seeded random pairs of four-location gadgets, beyond the exhaustive range."""
    rng = random.Random(seed)
    big = [t for t in corpus_types() if len(t.locations) == 4]
    for _ in range(count):
        types = (rng.choice(big), rng.choice(big))
        states = tuple(rng.choice(t.states) for t in types)
        spawner, sink = rng.random() < 0.5, rng.random() < 0.5
        items = [f"g{i}.{x}" for i, t in enumerate(types) for x in t.locations]
        items += ([SPAWN] if spawner else []) + ([SINK] if sink else [])
        blocks: dict = {}
        for x in items:
            blocks.setdefault(rng.randrange(len(items)), []).append(x)
        if spawner and sink and any(SPAWN in b and SINK in b for b in blocks.values()):
            continue
        edges = [(b[0], x) for b in blocks.values() for x in b[1:]]
        system = _build(types, states, edges, spawner, sink)
        starts = list(_robot_starts(system, max_robots))
        yield Case("+".join(t.name for t in types), system, Configuration(states, rng.choice(starts)))


def _vectors(n: int, max_size: int):
    for v in itertools.product(range(max_size + 1), repeat=n):
        if sum(v) <= max_size:
            yield v


def _net_key(rules: tuple, n: int):
    best = None
    for perm in itertools.permutations(range(n)):
        r = tuple(sorted((tuple(u[p] for p in perm), tuple(v[p] for p in perm)) for u, v in rules))
        best = r if best is None or r < best else best
    return best


def small_nets(max_dishes: int = 3, max_rules: int = 2, max_size: int = 2):
    """All nets up to dish relabeling with ``|u|, |v| <= max_size``."""
    for n in range(1, max_dishes + 1):
        rule_space = [(u, v) for u in _vectors(n, max_size) for v in _vectors(n, max_size)]
        seen = set()
        for k in range(max_rules + 1):
            for rules in itertools.combinations_with_replacement(rule_space, k):
                key = _net_key(rules, n)
                if key in seen:
                    continue
                seen.add(key)
                yield PetriNet(tuple("abc"[:n]), rules)


def markings(n: int, max_volume: int):
    return list(_vectors(n, max_volume))


def random_nets(count: int, seed: int = 0, max_dishes: int = 4, max_rules: int = 4, max_entry: int = 2):
    """Seeded random (net, start, target) triples."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_dishes)
        rules = []
        for _ in range(rng.randint(1, max_rules)):
            rules.append((tuple(rng.randint(0, max_entry) for _ in range(n)),
                          tuple(rng.randint(0, max_entry) for _ in range(n))))
        start = tuple(rng.randint(0, 2) for _ in range(n))
        target = tuple(rng.randint(0, 3) for _ in range(n))
        yield PetriNet(tuple(f"d{i}" for i in range(n)), rules), start, target
