"""Round-robin simulation of 0-player directed-edge motion planning with spawners.

Each round every robot takes a turn in spawn order, then every spawner adds a
robot at its location. On its turn a robot follows directed edges until it
either traverses one gadget or gets stuck.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import GadgetError, SystemOfGadgets, is_deterministic, validate_system


class CycleWithoutGadget(GadgetError):
    pass


@dataclass(frozen=True)
class WorldState:
    states: tuple
    robots: tuple  # node of each robot, in spawn order
    round: int = 0

    @staticmethod
    def initial(system: SystemOfGadgets, robots=()) -> "WorldState":
        return WorldState(system.initial_states(), tuple(robots), 0)


@dataclass(frozen=True)
class TurnEvent:
    robot: int
    path: tuple
    traversal: tuple | None  # (instance index, transition) or None when stuck


@dataclass
class RoundRecord:
    round: int
    turns: list = field(default_factory=list)
    spawns: list = field(default_factory=list)  # (robot id, node)


@dataclass
class Trace:
    """Per-round events. Robots that stay put without traversing are omitted."""

    initial: WorldState
    rounds: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "initial": {"states": list(self.initial.states), "robots": list(self.initial.robots),
                        "round": self.initial.round},
            "rounds": [
                {
                    "round": r.round,
                    "turns": [
                        {"robot": e.robot, "path": list(e.path),
                         "traversal": None if e.traversal is None
                         else [e.traversal[0], list(e.traversal[1])]}
                        for e in r.turns
                    ],
                    "spawns": [list(s) for s in r.spawns],
                }
                for r in self.rounds
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "Trace":
        init = data["initial"]
        trace = Trace(WorldState(tuple(init["states"]), tuple(init["robots"]), init.get("round", 0)))
        for r in data["rounds"]:
            rec = RoundRecord(r["round"])
            for e in r["turns"]:
                tr = e["traversal"]
                rec.turns.append(TurnEvent(e["robot"], tuple(e["path"]),
                                           None if tr is None else (tr[0], tuple(tr[1]))))
            rec.spawns = [tuple(s) for s in r["spawns"]]
            trace.rounds.append(rec)
        return trace

    def to_text(self) -> str:
        lines = []
        for r in self.rounds:
            for e in r.turns:
                tr = "stuck" if e.traversal is None else f"{e.traversal[0]}:{'/'.join(map(str, e.traversal[1]))}"
                lines.append(f"{r.round}\t{e.robot}\t{' '.join(map(str, e.path))}\t{tr}")
            for rid, node in r.spawns:
                lines.append(f"{r.round}\t{rid}\tspawn {node}\t-")
        return "\n".join(lines) + ("\n" if lines else "")


def validate_directed(system: SystemOfGadgets) -> list[str]:
    """Diagnostics for the directed-edge rules; empty when the system is valid."""
    out = [d for d in validate_system(system) if "both a spawner and a destroyer" not in d]
    if system.destroyers:
        out.append("0-player systems have no destroyers")
    for t in {inst.type for inst in system.instances}:
        if not is_deterministic(t):
            out.append(f"gadget type {t.name} is not deterministic")
    outs, indeg, owner = system.out_edges, system.in_degree, system.owner
    entrances = set()
    for inst in system.instances:
        for t in inst.type.transitions:
            entrances.add(inst.global_of[t[1]])
    for node in system.all_locations:
        k = len(outs.get(node, ()))
        if node in owner:
            if k and indeg.get(node, 0):
                out.append(f"gadget location {node!r} has both incoming and outgoing edges")
            if k > 1:
                out.append(f"gadget location {node!r} has {k} outgoing edges")
            if k and node in entrances:
                out.append(f"gadget location {node!r} is an entrance with an outgoing edge")
        elif k > 1:
            out.append(f"free node {node!r} has {k} outgoing edges")
    # free-node cycles would trap a robot without it ever traversing a gadget
    colour = {}
    for start in system.all_locations:
        if start in owner or start in colour:
            continue
        path, node = [], start
        while node is not None and node not in owner and node not in colour:
            colour[node] = start
            path.append(node)
            nxt = outs.get(node, ())
            node = nxt[0] if len(nxt) == 1 else None
        if node is not None and colour.get(node) == start and node not in owner:
            out.append(f"free nodes form a cycle through {node!r}")
    return out


class _Runner:
    """Mutable simulation kernel shared by the public functions."""

    def __init__(self, system: SystemOfGadgets):
        self.system = system
        self.owner = system.owner
        self.out = {k: v[0] for k, v in system.out_edges.items() if v}
        self.inst_types = [inst.type for inst in system.instances]
        self.inst_global = [inst.global_of for inst in system.instances]

    def turn(self, states: list, node, robot: int) -> TurnEvent:
        path = [node]
        visited = {node}
        while True:
            hit = self.owner.get(node)
            if hit is not None:
                i, loc = hit
                ts = self.inst_types[i].open_from.get((states[i], loc))
                if ts:
                    t = ts[0]
                    states[i] = t[3]
                    exit_node = self.inst_global[i][t[2]]
                    path.append(exit_node)
                    return TurnEvent(robot, tuple(path), (i, t))
            nxt = self.out.get(node)
            if nxt is None:
                return TurnEvent(robot, tuple(path), None)
            if nxt in visited:
                raise CycleWithoutGadget(f"robot {robot} revisits {nxt!r} without traversing a gadget")
            visited.add(nxt)
            path.append(nxt)
            node = nxt

    def round(self, states: list, robots: list, round_no: int, record: bool):
        rec = RoundRecord(round_no) if record else None
        touched = set()
        for rid in range(len(robots)):
            ev = self.turn(states, robots[rid], rid)
            robots[rid] = ev.path[-1]
            touched.update(ev.path)
            if record and (len(ev.path) > 1 or ev.traversal is not None):
                rec.turns.append(ev)
        for node in self.system.spawners:
            robots.append(node)
            touched.add(node)
            if record:
                rec.spawns.append((len(robots) - 1, node))
        return rec, touched


def robot_turn(system: SystemOfGadgets, world: WorldState, robot: int) -> tuple[WorldState, TurnEvent]:
    """Move one robot until it traverses a gadget or gets stuck."""
    if not 0 <= robot < len(world.robots):
        raise IndexError(f"no robot {robot}")
    states = list(world.states)
    ev = _Runner(system).turn(states, world.robots[robot], robot)
    robots = list(world.robots)
    robots[robot] = ev.path[-1]
    return WorldState(tuple(states), tuple(robots), world.round), ev


def step_round(system: SystemOfGadgets, world: WorldState) -> tuple[WorldState, RoundRecord]:
    states, robots = list(world.states), list(world.robots)
    rec, _ = _Runner(system).round(states, robots, world.round + 1, True)
    return WorldState(tuple(states), tuple(robots), world.round + 1), rec


def simulate(system: SystemOfGadgets, world: WorldState, rounds: int, record: bool = True):
    """Run ``rounds`` rounds; return the final world and its trace."""
    runner = _Runner(system)
    states, robots = list(world.states), list(world.robots)
    trace = Trace(world)
    for k in range(rounds):
        rec, _ = runner.round(states, robots, world.round + k + 1, record)
        if record:
            trace.rounds.append(rec)
    return WorldState(tuple(states), tuple(robots), world.round + rounds), trace


def replay(system: SystemOfGadgets, trace: Trace) -> WorldState:
    """Apply recorded events to the trace's initial world."""
    states = list(trace.initial.states)
    robots = list(trace.initial.robots)
    rnd = trace.initial.round
    for rec in trace.rounds:
        for ev in rec.turns:
            robots[ev.robot] = ev.path[-1]
            if ev.traversal is not None:
                i, t = ev.traversal
                states[i] = t[3]
        for rid, node in rec.spawns:
            if rid != len(robots):
                raise ValueError(f"spawn of robot {rid} out of order")
            robots.append(node)
        rnd = rec.round
    return WorldState(tuple(states), tuple(robots), rnd)


@dataclass(frozen=True)
class ReachResult:
    reached: bool
    round: int | None = None
    world: WorldState | None = None


def reach_within(system: SystemOfGadgets, world: WorldState, target, max_rounds: int) -> ReachResult:
    """Semi-decide whether some robot touches ``target`` within ``max_rounds`` rounds.

    Passing through the target mid-turn counts. A negative answer only means
    the budget ran out.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    if target in world.robots:
        return ReachResult(True, world.round, world)
    runner = _Runner(system)
    states, robots = list(world.states), list(world.robots)
    for k in range(1, max_rounds + 1):
        _, touched = runner.round(states, robots, world.round + k, False)
        if target in touched:
            return ReachResult(True, world.round + k, WorldState(tuple(states), tuple(robots), world.round + k))
    return ReachResult(False, None, WorldState(tuple(states), tuple(robots), world.round + max_rounds))

