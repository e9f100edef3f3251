"""Petri nets: markings, rule firing, bounded forward search, backward coverability."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .core import GadgetError


class NotEnabled(GadgetError):
    pass


@dataclass(frozen=True)
class PetriNet:
    dishes: tuple
    rules: tuple  # of (u, v) integer tuples

    def __post_init__(self):
        object.__setattr__(self, "dishes", tuple(self.dishes))
        object.__setattr__(self, "rules", tuple((tuple(u), tuple(v)) for u, v in self.rules))
        n = len(self.dishes)
        for k, (u, v) in enumerate(self.rules):
            if len(u) != n or len(v) != n:
                raise ValueError(f"rule {k}: vectors must have length {n}")
            if any(x < 0 for x in u + v):
                raise ValueError(f"rule {k}: entries must be nonnegative")

    def index(self, dish) -> int:
        return self.dishes.index(dish)

    def unit(self, dish) -> tuple:
        return tuple(int(d == dish) for d in self.dishes)


def volume(marking: Sequence[int]) -> int:
    return sum(marking)


def enabled(net: PetriNet, marking: Sequence[int], rule: int) -> bool:
    u = net.rules[rule][0]
    return all(m >= x for m, x in zip(marking, u))


def apply_rule(net: PetriNet, marking: Sequence[int], rule: int) -> tuple:
    """Fire ``rule``: d1 = d0 - u + v."""
    u, v = net.rules[rule]
    if not enabled(net, marking, rule):
        raise NotEnabled(f"rule {rule} needs {u}, marking is {tuple(marking)}")
    return tuple(m - a + b for m, a, b in zip(marking, u, v))


@dataclass(frozen=True)
class ForwardResult:
    markings: frozenset
    exhausted: bool  # closure finished without hitting the state cap
    volume_pruned: bool  # some successor was discarded for exceeding the volume cap

    @property
    def exact(self) -> bool:
        """True when ``markings`` is the full reachability set."""
        return self.exhausted and not self.volume_pruned


def _successors(net: PetriNet, m: tuple):
    for k, (u, v) in enumerate(net.rules):
        if all(a >= b for a, b in zip(m, u)):
            yield k, tuple(x - a + b for x, a, b in zip(m, u, v))


def forward_reach(net: PetriNet, start: Sequence[int], volume_cap: int, state_cap: int) -> ForwardResult:
    """Breadth-first closure, discarding markings of volume > ``volume_cap``."""
    start = tuple(start)
    seen = {start}
    queue = deque([start])
    pruned = False
    while queue:
        m = queue.popleft()
        for _, n in _successors(net, m):
            if n in seen:
                continue
            if sum(n) > volume_cap:
                pruned = True
                continue
            if len(seen) >= state_cap:
                return ForwardResult(frozenset(seen), False, pruned)
            seen.add(n)
            queue.append(n)
    return ForwardResult(frozenset(seen), True, pruned)


def _dominates(a: tuple, b: tuple) -> bool:
    return all(x >= y for x, y in zip(a, b))


def minimize(elements) -> tuple:
    """Keep the minimal elements (an antichain) in a deterministic order."""
    basis = []
    for e in sorted(set(elements), key=lambda x: (sum(x), x)):
        if not any(_dominates(e, b) for b in basis):
            basis.append(e)
    return tuple(basis)


def backward_basis(
    net: PetriNet,
    target: Sequence[int],
    prune: Callable[[tuple], bool] | None = None,
    stop_at: Sequence[int] | None = None,
):
    """Minimal basis of the set of markings that can cover ``target``.

    Iterates pred(m) = max(m - v, 0) + u from the upward closure of the
    target until no new minimal element appears. ``prune`` may discard basis
    elements that no reachable marking can dominate (for instance markings
    violating a known place invariant). With ``stop_at`` the search returns
    early once that marking is covered. Returns ``(basis, history)`` where
    ``history`` lists the basis after each iteration.
    """
    target = tuple(target)
    basis = [target]
    frontier = [target]
    history = [tuple(basis)]
    stop = tuple(stop_at) if stop_at is not None else None
    if stop is not None and _dominates(stop, target):
        return tuple(basis), history
    while frontier:
        new = []
        for m in frontier:
            for u, v in net.rules:
                p = tuple(max(x - b, 0) + a for x, a, b in zip(m, u, v))
                if prune is not None and prune(p):
                    continue
                if any(_dominates(p, b) for b in basis) or any(_dominates(p, b) for b in new):
                    continue
                new = [b for b in new if not _dominates(b, p)]
                new.append(p)
        if not new:
            break
        basis = [b for b in basis if not any(_dominates(b, p) for p in new)] + new
        frontier = new
        history.append(tuple(basis))
        if stop is not None and any(_dominates(stop, p) for p in new):
            break
    return minimize(basis), history


def semiflows(net: PetriNet, max_rows: int = 5_000) -> tuple:
    """Minimal nonnegative place invariants: y >= 0 with y . (v - u) = 0 for every rule.

    Farkas' algorithm. Any such y keeps y . m constant along every run, so
    y . m > y . start rules m out. Returns () if the row count ever exceeds
    ``max_rows`` (no invariants is always a sound answer).
    """
    n = len(net.dishes)
    cols = [tuple(b - a for a, b in zip(u, v)) for u, v in net.rules]
    rows = [(tuple(c[p] for c in cols), tuple(int(p == q) for q in range(n))) for p in range(n)]
    for j in range(len(cols)):
        keep = [r for r in rows if r[0][j] == 0]
        pos = [r for r in rows if r[0][j] > 0]
        neg = [r for r in rows if r[0][j] < 0]
        for a in pos:
            for b in neg:
                ka, kb = -b[0][j], a[0][j]
                y = tuple(ka * x + kb * z for x, z in zip(a[1], b[1]))
                c = tuple(ka * x + kb * z for x, z in zip(a[0], b[0]))
                g = math.gcd(*y)
                keep.append((tuple(x // g for x in c), tuple(x // g for x in y)))
        # drop rows whose support strictly contains another row's support
        supports = [frozenset(k for k, x in enumerate(r[1]) if x) for r in keep]
        rows = []
        seen = set()
        for r, sup in zip(keep, supports):
            if any(o < sup for o in supports) or r[1] in seen:
                continue
            seen.add(r[1])
            rows.append(r)
        if len(rows) > max_rows:
            return ()
    return tuple(sorted(r[1] for r in rows))


@lru_cache(maxsize=4096)
def _cached_basis(net: PetriNet, target: tuple):
    return backward_basis(net, target)[0]


def coverable(net: PetriNet, start: Sequence[int], target: Sequence[int], prune=None) -> bool:
    """Is some marking reachable from ``start`` componentwise >= ``target``?"""
    start, target = tuple(start), tuple(target)
    if prune is None:
        basis = _cached_basis(net, target)
    else:
        basis, _ = backward_basis(net, target, prune, stop_at=start)
    return any(_dominates(start, b) for b in basis)


def production(net: PetriNet, start: Sequence[int], dish, prune=None) -> bool:
    """Can a token ever appear in ``dish``?"""
    return coverable(net, start, net.unit(dish), prune)


@dataclass(frozen=True)
class ExactResult:
    found: bool
    path: tuple | None = None  # rule indices
    complete: bool = False  # search covered the whole reach set, so "not found" is a real no

    @property
    def verdict(self) -> str:
        if self.found:
            return "yes"
        return "no" if self.complete else "no-within-bounds"


def reachable_exact(net: PetriNet, start: Sequence[int], target: Sequence[int], volume_cap: int,
                    state_cap: int) -> ExactResult:
    """Bounded forward search for an exact marking, returning a witness path."""
    start, target = tuple(start), tuple(target)
    if start == target:
        return ExactResult(True, ())
    if sum(target) > volume_cap:
        return ExactResult(False)
    parent = {start: None}
    queue = deque([start])
    pruned = False
    while queue:
        m = queue.popleft()
        for k, n in _successors(net, m):
            if n in parent:
                continue
            if sum(n) > volume_cap:
                pruned = True
                continue
            if len(parent) >= state_cap:
                return ExactResult(False)
            parent[n] = (m, k)
            if n == target:
                path = []
                while parent[n] is not None:
                    n, k = parent[n]
                    path.append(k)
                return ExactResult(True, tuple(reversed(path)))
            queue.append(n)
    return ExactResult(False, None, not pruned)


def replay_rules(net: PetriNet, start: Sequence[int], path: Sequence[int]) -> tuple:
    m = tuple(start)
    for k in path:
        m = apply_rule(net, m, k)
    return m


def coverage_to_production(net: PetriNet, start: Sequence[int], cover_target: Sequence[int], dish="T"):
    """Add a dish ``T`` and one rule consuming ``cover_target`` to put a token in ``T``.

    Production of ``T`` in the new net holds exactly when ``cover_target`` is
    coverable in the old one. This does not carry over to exact targets.
    """
    if dish in net.dishes:
        raise ValueError(f"dish {dish!r} already exists")
    rules = [(u + (0,), v + (0,)) for u, v in net.rules]
    rules.append((tuple(cover_target) + (0,), (0,) * len(net.dishes) + (1,)))
    return PetriNet(net.dishes + (dish,), rules), tuple(start) + (0,), dish
