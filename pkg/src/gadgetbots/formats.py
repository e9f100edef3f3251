"""JSON and text forms for systems, nets, programs, G4 instances, traces and witnesses.

Every JSON document carries ``"format": 1``. Parse errors report the line
and column for malformed JSON and a path such as ``instances[2].state`` for
schema problems.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .core import Configuration, GadgetError, GadgetInstance, GadgetType, Move, SystemOfGadgets
from .counter import CounterProgram, ProgramParseError, parse_program
from .g4 import G4Instance, Var
from .library import standard_library
from .petri import PetriNet
from .zero_player import Trace, WorldState

FORMAT = 1


class FormatError(GadgetError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if path:
            where.append(path)
        super().__init__(f"{': '.join(where + [message]) if where else message}")
        self.line, self.column, self.path = line, column, path


def load_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise FormatError("top level must be an object", path="$")
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise FormatError(f"unsupported format {fmt!r}", path="format")
    return data


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=1, sort_keys=False) + "\n"


def _need(data: dict, key: str, kind, path: str):
    if key not in data:
        raise FormatError(f"missing field {key!r}", path=path or "$")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(f"expected {getattr(kind, '__name__', kind)}", path=f"{path}.{key}" if path else key)
    return value


def _tuplify(x):
    return tuple(_tuplify(y) for y in x) if isinstance(x, list) else x


def _listify(x):
    return [_listify(y) for y in x] if isinstance(x, tuple) else x


# gadget types and systems


def gadget_type_to_json(t: GadgetType) -> dict:
    out = {"name": t.name, "states": list(t.states), "locations": list(t.locations),
           "transitions": [list(x) for x in t.transitions]}
    if t.tunnels is not None:
        out["tunnels"] = [list(p) for p in t.tunnels]
    return out


def gadget_type_from_json(data, path: str = "gadget_type") -> GadgetType:
    if isinstance(data, str):
        lib = standard_library()
        if data not in lib:
            raise FormatError(f"unknown library gadget {data!r}", path=path)
        return lib[data]
    if not isinstance(data, dict):
        raise FormatError("expected an object or a library gadget name", path=path)
    name = _need(data, "name", str, path)
    states = _tuplify(_need(data, "states", list, path))
    locations = _tuplify(_need(data, "locations", list, path))
    trs = _need(data, "transitions", list, path)
    for k, t in enumerate(trs):
        if not isinstance(t, list) or len(t) != 4:
            raise FormatError("transition must be [state, from, to, next_state]", path=f"{path}.transitions[{k}]")
    tunnels = data.get("tunnels")
    t = GadgetType(name, states, locations, _tuplify(trs), _tuplify(tunnels) if tunnels is not None else None)
    problems = t.diagnostics()
    if problems:
        raise FormatError("; ".join(problems), path=path)
    return t


def system_to_json(system: SystemOfGadgets, robots: dict | None = None) -> dict:
    types = {}
    for inst in system.instances:
        types.setdefault(inst.type.name, inst.type)
    out = {
        "format": FORMAT,
        "gadget_types": [gadget_type_to_json(t) for t in types.values()],
        "instances": [
            {"type": inst.type.name, "state": inst.state, "locations": list(inst.locations),
             **({"name": inst.name} if inst.name is not None else {})}
            for inst in system.instances
        ],
        "connections": [list(e) for e in system.connections],
        "spawners": list(system.spawners),
        "destroyers": list(system.destroyers),
        "nodes": list(system.nodes),
        "directed": system.directed,
    }
    if robots:
        out["robots"] = dict(robots)
    return out


@dataclass
class SystemDoc:
    system: SystemOfGadgets
    robots: dict  # location -> count, from the optional "robots" field


def system_from_json(data: dict) -> SystemDoc:
    types = {}
    for k, t in enumerate(_need(data, "gadget_types", list, "")):
        gt = gadget_type_from_json(t, f"gadget_types[{k}]")
        types[gt.name] = gt
    lib = standard_library()
    instances = []
    for k, d in enumerate(_need(data, "instances", list, "")):
        path = f"instances[{k}]"
        if not isinstance(d, dict):
            raise FormatError("expected an object", path=path)
        tname = _need(d, "type", str, path)
        gt = types.get(tname) or lib.get(tname)
        if gt is None:
            raise FormatError(f"unknown gadget type {tname!r}", path=f"{path}.type")
        state = _tuplify(_need(d, "state", None, path))
        if state not in gt.states:
            raise FormatError(f"{state!r} is not a state of {tname}", path=f"{path}.state")
        locs = _tuplify(_need(d, "locations", list, path))
        if len(locs) != len(gt.locations):
            raise FormatError(f"expected {len(gt.locations)} locations", path=f"{path}.locations")
        instances.append(GadgetInstance(gt, state, locs, d.get("name")))
    conns = data.get("connections", [])
    for k, e in enumerate(conns):
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError("connection must be a pair", path=f"connections[{k}]")
    system = SystemOfGadgets(
        tuple(instances), _tuplify(conns), _tuplify(data.get("spawners", [])),
        _tuplify(data.get("destroyers", [])), _tuplify(data.get("nodes", [])), bool(data.get("directed", False)),
    )
    robots = data.get("robots", {})
    if isinstance(robots, list):
        counts: dict = {}
        for r in robots:
            counts[r] = counts.get(r, 0) + 1
        robots = counts
    known = set(system.all_locations)
    for loc in robots:
        if loc not in known:
            raise FormatError(f"unknown robot location {loc!r}", path="robots")
    return SystemDoc(system, dict(robots))


def parse_system(text: str) -> SystemDoc:
    return system_from_json(load_json(text))


# configurations and witnesses


def config_to_json(system: SystemOfGadgets, config: Configuration) -> dict:
    robots = {}
    for c, n in enumerate(config.counts):
        if n:
            robots[system.classes[c][0]] = n
    return {"format": FORMAT, "states": list(config.states), "robots": robots}


def config_from_json(system: SystemOfGadgets, data: dict) -> Configuration:
    states = _tuplify(data.get("states", list(system.initial_states())))
    if len(states) != len(system.instances):
        raise FormatError(f"expected {len(system.instances)} states", path="states")
    for k, (s, inst) in enumerate(zip(states, system.instances)):
        if s not in inst.type.states:
            raise FormatError(f"{s!r} is not a state of {inst.type.name}", path=f"states[{k}]")
    robots = data.get("robots", {})
    for loc in robots:
        if loc not in system.class_of:
            raise FormatError(f"unknown location {loc!r}", path="robots")
    return system.configuration(robots, states)


def move_to_json(mv: Move) -> dict:
    if mv.kind == "spawn":
        return {"kind": "spawn", "class": mv.cls}
    return {"kind": "traverse", "instance": mv.instance, "transition": list(mv.transition)}


def move_from_json(d: dict, path: str = "moves") -> Move:
    kind = _need(d, "kind", str, path)
    if kind == "spawn":
        return Move.spawn(_need(d, "class", int, path))
    if kind == "traverse":
        return Move.traverse(_need(d, "instance", int, path), _tuplify(_need(d, "transition", list, path)))
    raise FormatError(f"unknown move kind {kind!r}", path=f"{path}.kind")


def witness_to_json(moves) -> dict:
    return {"format": FORMAT, "moves": [move_to_json(m) for m in moves]}


def witness_from_json(data: dict) -> tuple:
    return tuple(move_from_json(d, f"moves[{k}]") for k, d in enumerate(_need(data, "moves", list, "")))


# nets


def net_to_json(net: PetriNet, start=None) -> dict:
    out = {"format": FORMAT, "dishes": list(net.dishes),
           "rules": [{"u": list(u), "v": list(v)} for u, v in net.rules]}
    if start is not None:
        out["start"] = list(start)
    return out


def net_from_json(data: dict) -> tuple[PetriNet, tuple]:
    dishes = _need(data, "dishes", list, "")
    n = len(dishes)
    rules = []
    for k, r in enumerate(_need(data, "rules", list, "")):
        path = f"rules[{k}]"
        if not isinstance(r, dict):
            raise FormatError("expected an object", path=path)
        u, v = _need(r, "u", list, path), _need(r, "v", list, path)
        for key, vec in (("u", u), ("v", v)):
            if len(vec) != n or not all(isinstance(x, int) and x >= 0 for x in vec):
                raise FormatError(f"expected {n} nonnegative integers", path=f"{path}.{key}")
        rules.append((tuple(u), tuple(v)))
    start = data.get("start", [0] * n)
    if len(start) != n or not all(isinstance(x, int) and x >= 0 for x in start):
        raise FormatError(f"expected {n} nonnegative integers", path="start")
    return PetriNet(tuple(dishes), tuple(rules)), tuple(start)


def net_to_text(net: PetriNet, start=None) -> str:
    lines = ["dishes: " + " ".join(map(str, net.dishes))]
    if start is not None:
        lines.append("start: " + " ".join(map(str, start)))
    for u, v in net.rules:
        lines.append(" ".join(map(str, u)) + " -> " + " ".join(map(str, v)))
    return "\n".join(lines) + "\n"


def net_from_text(text: str) -> tuple[PetriNet, tuple]:
    """Lines ``dishes: a b``, ``start: 1 0`` and ``u1 u2 -> v1 v2``; ``#`` starts a comment."""
    dishes, start, rules = None, None, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dishes:"):
            dishes = tuple(line[7:].split())
            continue
        if line.startswith("start:"):
            start = _ints(line[6:], lineno, raw.index(":") + 2)
            continue
        if "->" not in line:
            raise FormatError("expected 'u ... -> v ...'", lineno, 1)
        left, right = line.split("->", 1)
        rules.append((_ints(left, lineno, 1), _ints(right, lineno, raw.index("->") + 3)))
    n = len(dishes) if dishes is not None else (len(rules[0][0]) if rules else len(start or ()))
    if dishes is None:
        dishes = tuple(f"d{k}" for k in range(n))
    start = start if start is not None else (0,) * n
    for k, (u, v) in enumerate(rules):
        if len(u) != n or len(v) != n:
            raise FormatError(f"rule {k} does not have {n} entries per side")
    if len(start) != n:
        raise FormatError(f"start does not have {n} entries")
    return PetriNet(dishes, tuple(rules)), start


def _ints(s: str, line: int, col: int) -> tuple:
    out = []
    for tok in s.split():
        if not tok.isdigit():
            raise FormatError(f"expected a nonnegative integer, found {tok!r}", line, col)
        out.append(int(tok))
    return tuple(out)


def parse_net(text: str) -> tuple[PetriNet, tuple]:
    return net_from_json(load_json(text)) if text.lstrip().startswith("{") else net_from_text(text)


# counter programs


def parse_counter_program(text: str) -> CounterProgram:
    try:
        return parse_program(text)
    except ProgramParseError as e:
        raise FormatError(str(e).split(": ", 1)[-1], e.line or None, 1) from None


# G4


def g4_to_json(inst: G4Instance) -> dict:
    return {
        "format": FORMAT,
        "vars": [{"name": v.name, "owner": v.owner, "init": v.init} for v in inst.vars],
        "clauses": [[n if p else f"~{n}" for n, p in c] for c in inst.clauses],
        "width": inst.width,
    }


def g4_from_json(data: dict) -> G4Instance:
    vs = []
    for k, d in enumerate(_need(data, "vars", list, "")):
        path = f"vars[{k}]"
        vs.append(Var(_need(d, "name", str, path), _need(d, "owner", int, path), bool(d.get("init", False))))
    clauses = []
    for k, c in enumerate(_need(data, "clauses", list, "")):
        if not isinstance(c, list) or not all(isinstance(x, str) for x in c):
            raise FormatError("clause must be a list of literals", path=f"clauses[{k}]")
        clauses.append(tuple((x[1:], False) if x.startswith("~") else (x, True) for x in c))
    width = data.get("width", len(clauses[0]) if clauses else 1)
    inst = G4Instance(tuple(vs), tuple(clauses), width)
    if inst.problems():
        raise FormatError("; ".join(inst.problems()))
    return inst


# traces


def parse_trace(text: str) -> Trace:
    data = load_json(text)
    try:
        return Trace.from_json(data)
    except (KeyError, TypeError, IndexError) as e:
        raise FormatError(f"malformed trace: {e!r}") from None


def world_hash(world: WorldState) -> str:
    doc = json.dumps({"states": list(world.states), "robots": list(world.robots), "round": world.round},
                     sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(doc.encode()).hexdigest()
