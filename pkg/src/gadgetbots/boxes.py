"""Boxed subsystems that simulate one gadget with copies of another under the
ko rule, and an exhaustive verifier for them.

A box is a system with designated port locations, one per location of the
target gadget. Under the ko rule a traversal of the target must become an
odd-length forced run of internal traversals, so the same player makes the
first and the last one; a closed target tunnel must stall after an even
number of internal traversals, so the player who tried it is the one stuck.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import GadgetError, GadgetInstance, GadgetType, SystemOfGadgets
from .library import locking_2_toggle, one_toggle


class CertificateMismatch(GadgetError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Two interacting tunnels of a reversible deterministic gadget.

    In ``s1`` tunnel ``t1`` is open from ``a`` to ``b`` (leading to ``s2``)
    and ``t2`` is closed from ``c``; in ``s2`` both ``b -> a`` (back to
    ``s1``) and ``c -> d`` (to ``s3``) are open, and ``d -> c`` leads back.
    """

    s1: object
    s2: object
    s3: object
    t1: tuple  # (a, b)
    t2: tuple  # (c, d)

    def check(self, gtype: GadgetType):
        a, b = self.t1
        c, d = self.t2
        edges = set(gtype.transitions)
        need = [
            (self.s1, a, b, self.s2), (self.s2, b, a, self.s1),
            (self.s2, c, d, self.s3), (self.s3, d, c, self.s2),
        ]
        missing = [t for t in need if t not in edges]
        if missing:
            raise CertificateMismatch(f"{gtype.name} lacks transitions {missing}")
        if any(t[0] == self.s1 and t[1] == c and t[2] == d for t in edges):
            raise CertificateMismatch(f"{gtype.name}: tunnel {self.t2} is not closed in state {self.s1!r}")


def l2t_certificate() -> Certificate:
    return Certificate(1, 2, 3, ("B", "A"), ("C", "D"))


@dataclass(frozen=True)
class Box:
    system: SystemOfGadgets
    ports: dict  # target location -> global location in the box
    target: GadgetType
    target_state: object
    parity: str = "odd"  # parity required of every crossing


def identity_box(gtype: GadgetType, state) -> Box:
    inst = GadgetInstance(gtype, state, tuple(f"g.{x}" for x in gtype.locations), "g")
    system = SystemOfGadgets((inst,))
    return Box(system, {x: f"g.{x}" for x in gtype.locations}, gtype, state)


class _Wiring:
    def __init__(self, base: GadgetType):
        self.base = base
        self.instances, self.edges = [], []

    def copy(self, state, name: str) -> str:
        self.instances.append(GadgetInstance(self.base, state, tuple(f"{name}.{x}" for x in self.base.locations), name))
        return name

    def join(self, a: str, b: str):
        self.edges.append((a, b))

    def directed(self, cert: Certificate, name: str) -> tuple[str, str]:
        """Two copies in s1 joined through t1: entry and exit locations."""
        a, b = cert.t1
        x, y = self.copy(cert.s1, f"{name}.x"), self.copy(cert.s1, f"{name}.y")
        self.join(f"{x}.{b}", f"{y}.{a}")
        return f"{x}.{a}", f"{y}.{b}"


def build_directed_tunnel_sim(base: GadgetType, cert: Certificate) -> Box:
    """A 1-toggle from two copies in series; every crossing takes 2 traversals."""
    cert.check(base)
    w = _Wiring(base)
    left, right = w.directed(cert, "D")
    return Box(SystemOfGadgets(tuple(w.instances), tuple(w.edges)), {"A": left, "B": right},
               one_toggle(), 1, parity="even")


def build_l2t_sim(base: GadgetType, cert: Certificate) -> Box:
    """A locking 2-toggle (nonleaf state) from three end/centre copies and six
    directed-tunnel pairs; each open path takes 9 traversals."""
    cert.check(base)
    a, b = cert.t1
    c, d = cert.t2
    w = _Wiring(base)
    gl, gc, gr = (w.copy(cert.s2, n) for n in ("GL", "GC", "GR"))
    ds = [w.directed(cert, f"D{k}") for k in range(1, 7)]

    def chain(start: str, sims: list, end: str):
        cur = start
        for entry, exit_ in sims:
            w.join(cur, entry)
            cur = exit_
        w.join(cur, end)

    # top path: GR.t2 forward, D1, D2, GC.t1 backward, D3, GL.t1 backward
    chain(f"{gr}.{d}", ds[0:2], f"{gc}.{b}")
    chain(f"{gc}.{a}", ds[2:3], f"{gl}.{b}")
    # bottom path: GL.t2 forward, D4, D5, GC.t2 forward, D6, GR.t1 backward
    chain(f"{gl}.{d}", ds[3:5], f"{gc}.{c}")
    chain(f"{gc}.{d}", ds[5:6], f"{gr}.{b}")
    ports = {"A": f"{gr}.{c}", "B": f"{gl}.{a}", "C": f"{gl}.{c}", "D": f"{gr}.{a}"}
    return Box(SystemOfGadgets(tuple(w.instances), tuple(w.edges)), ports, locking_2_toggle(), 2)


def without_connection(box: Box, index: int) -> Box:
    edges = box.system.connections[:index] + box.system.connections[index + 1:]
    s = box.system
    return Box(SystemOfGadgets(s.instances, edges, s.spawners, s.destroyers, s.nodes, s.directed),
               box.ports, box.target, box.target_state, box.parity)


@dataclass
class BoxReport:
    ok: bool
    violations: list = field(default_factory=list)
    crossings: dict = field(default_factory=dict)  # (target state, from, to) -> set of lengths
    stalls: dict = field(default_factory=dict)  # (target state, from) -> set of lengths
    box_states: int = 0

    def crossing_lengths(self) -> set:
        return set().union(*self.crossings.values()) if self.crossings else set()

    def stall_lengths(self) -> set:
        return set().union(*self.stalls.values()) if self.stalls else set()


def _run(system: SystemOfGadgets, states: tuple, cls: int, last, port_classes: dict, limit: int):
    """Follow the unique play from ``cls``. Returns (kind, length, states, data)."""
    seen = set()
    k = 0
    while True:
        key = (states, cls, last)
        if key in seen or k > limit:
            return "cycle", k, states, None
        seen.add(key)
        moves = [(i, t) for i, t in system.moves_by_class.get(cls, ()) if i != last and states[i] == t[0]]
        if not moves:
            return "stall", k, states, None
        if len(moves) > 1:
            return "choice", k, states, moves
        (i, t), = moves
        ns = list(states)
        ns[i] = t[3]
        states, cls, last = tuple(ns), system.transition_classes[(i, t)][1], i
        k += 1
        if cls in port_classes:
            return "cross", k, states, (port_classes[cls], last)


def verify_box(box: Box, expected_length: int | None = None, max_states: int = 100_000) -> BoxReport:
    """Exhaustively check that ``box`` behaves like its target under the ko rule."""
    system, target = box.system, box.target
    rep = BoxReport(True)
    port_classes = {}
    for loc, g in box.ports.items():
        c = system.class_of.get(g)
        if c is None:
            rep.violations.append(f"port {loc} is not a location of the box")
            continue
        if c in port_classes:
            rep.violations.append(f"ports {port_classes[c]} and {loc} share a location class")
        port_classes[c] = loc
    if rep.violations:
        rep.ok = False
        return rep
    want_odd = box.parity == "odd"
    limit = 4 * len(system.instances) + 4
    start = system.initial_states()
    mapped = {start: box.target_state}
    queue = deque([start])

    def violation(msg):
        rep.violations.append(msg)

    while queue and len(mapped) <= max_states:
        bs = queue.popleft()
        ts = mapped[bs]
        for p, g in box.ports.items():
            opens = target.open_from.get((ts, p), ())
            kind, k, ns, data = _run(system, bs, system.class_of[g], None, port_classes, limit)
            if kind == "cross":
                q, last = data
                tr = [t for t in opens if t[2] == q]
                if (k % 2 == 1) != want_odd:
                    violation(f"state {ts!r}: crossing {p}->{q} takes {k} traversals (wrong parity)")
                if expected_length is not None and k != expected_length:
                    violation(f"state {ts!r}: crossing {p}->{q} takes {k} traversals, expected {expected_length}")
                if not tr:
                    violation(f"state {ts!r}: box lets {p}->{q} through but the target does not")
                    continue
                rep.crossings.setdefault((ts, p, q), set()).add(k)
                nts = tr[0][3]
                if ns in mapped and mapped[ns] != nts:
                    violation(f"box state reached as both target state {mapped[ns]!r} and {nts!r}")
                elif ns not in mapped:
                    mapped[ns] = nts
                    queue.append(ns)
                # the opponent, standing at the exit, must not get back in
                kind2, k2, _, _ = _run(system, ns, system.class_of[box.ports[q]], last, port_classes, limit)
                if kind2 != "stall" or k2 % 2:
                    violation(f"state {nts!r}: re-entry at {q} right after a crossing gives {kind2} after {k2}")
            elif kind == "stall":
                if opens:
                    violation(f"state {ts!r}: {p} should cross to {opens[0][2]} but stalls after {k}")
                elif k % 2:
                    violation(f"state {ts!r}: attempt from {p} stalls after odd {k}")
                rep.stalls.setdefault((ts, p), set()).add(k)
            elif kind == "choice":
                violation(f"state {ts!r}: attempt from {p} meets a choice after {k} traversals")
            else:
                violation(f"state {ts!r}: attempt from {p} cycles inside the box")
    if queue:
        violation(f"more than {max_states} box states")
    rep.box_states = len(mapped)
    rep.ok = not rep.violations
    return rep
