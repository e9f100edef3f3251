"""Command-line interface.

Exit codes: 0 yes/pass, 1 no/fail, 2 inconclusive (budget or bounds), 3 input error.
A JSON result goes to stdout and a one-line summary to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import boxes, counter, g4, one_player, petri, translate, two_player, zero_player
from .core import GadgetError, apply_move, validate_system
from .formats import (
    FormatError,
    config_from_json,
    config_to_json,
    dump_json,
    g4_from_json,
    gadget_type_from_json,
    load_json,
    net_to_json,
    parse_counter_program,
    parse_net,
    parse_system,
    parse_trace,
    system_to_json,
    witness_from_json,
    witness_to_json,
    world_hash,
)

YES, NO, UNKNOWN, BAD_INPUT = 0, 1, 2, 3


class InputError(Exception):
    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError([f"{path}: {e.strerror}"]) from None


def _parse(path: str, parser):
    try:
        return parser(_read(path))
    except FormatError as e:
        raise InputError([f"{path}: {e}"]) from None


def _write(path: str | None, data: dict):
    if path:
        Path(path).write_text(dump_json(data), encoding="utf-8")


def _robots(doc, extra: list | None) -> dict:
    robots = dict(doc.robots)
    for item in extra or ():
        loc, _, n = item.partition("=")
        if loc not in doc.system.class_of:
            raise InputError([f"unknown location {loc!r}"])
        robots[loc] = robots.get(loc, 0) + (int(n) if n else 1)
    return robots


def _vector(text: str, n: int, what: str) -> tuple:
    parts = text.replace(",", " ").split()
    if len(parts) != n or not all(p.isdigit() for p in parts):
        raise InputError([f"{what} needs {n} nonnegative integers"])
    return tuple(int(p) for p in parts)


# commands; each returns (exit code, result dict, summary line)


def cmd_check(a):
    doc = _parse(a.system, parse_system)
    diags = validate_system(doc.system)
    if doc.system.directed:
        diags = zero_player.validate_directed(doc.system)
    return (YES if not diags else NO), {"diagnostics": diags}, f"{len(diags)} problem(s)"


def cmd_sim0(a):
    doc = _parse(a.system, parse_system)
    diags = zero_player.validate_directed(doc.system)
    if diags:
        raise InputError(diags)
    robots = [loc for loc, n in _robots(doc, a.robot).items() for _ in range(n)]
    world = zero_player.WorldState.initial(doc.system, robots)
    if a.target:
        res = zero_player.reach_within(doc.system, world, a.target, a.rounds)
        out = {"reached": res.reached, "round": res.round, "hash": world_hash(res.world)}
        return (YES if res.reached else UNKNOWN), out, (
            f"reached {a.target} in round {res.round}" if res.reached else f"no arrival within {a.rounds} rounds")
    final, trace = zero_player.simulate(doc.system, world, a.rounds, record=bool(a.trace or a.text))
    if a.trace:
        _write(a.trace, trace.to_json())
    if a.text:
        Path(a.text).write_text(trace.to_text(), encoding="utf-8")
    out = {"round": final.round, "robots": len(final.robots), "states": list(final.states), "hash": world_hash(final)}
    return YES, out, f"simulated {a.rounds} rounds, {len(final.robots)} robots"


def cmd_compile_counter(a):
    prog = _parse(a.program, parse_counter_program)
    m = counter.compile_program(prog)
    data = system_to_json(m.system)
    _write(a.output, data)
    out = {"win": m.win, "spawner": m.spawner, "instances": len(m.system.instances),
           "warnings": prog.warnings(), "system": None if a.output else data}
    return YES, out, f"{len(m.system.instances)} gadgets, win location {m.win!r}"


def cmd_equiv_counter(a):
    prog = _parse(a.program, parse_counter_program)
    rep = counter.equivalence_check(prog, a.steps)
    out = {"verdict": rep.verdict, "halted": rep.halted, "steps": rep.steps, "reached": rep.reached,
           "win_round": rep.win_round, "round_budget": rep.round_budget}
    summary = f"{rep.verdict}: interpreter {'halts' if rep.halted else 'does not halt'} within {a.steps} steps, " \
              f"system {'reaches' if rep.reached else 'does not reach'} win within {rep.round_budget} rounds"
    return (YES if rep.agree else NO), out, summary


def cmd_solve1(a):
    doc = _parse(a.system, parse_system)
    start = doc.system.configuration(_robots(doc, a.robot))
    if a.target not in doc.system.class_of:
        raise InputError([f"unknown location {a.target!r}"])
    ok = one_player.robot_reachability(doc.system, start, a.target)
    return (YES if ok else NO), {"reachable": ok}, f"{a.target} {'is' if ok else 'is not'} reachable"


def cmd_reconfig(a):
    doc = _parse(a.system, parse_system)
    system = doc.system
    start = system.configuration(_robots(doc, a.robot))
    target = _parse(a.target, lambda t: config_from_json(system, load_json(t)))
    if system.destroyers:
        res = one_player.reconfigure_with_destroyer(system, start, target, a.robot_cap, a.state_cap)
        code = YES if res.found else UNKNOWN
    else:
        res = one_player.reconfigure_no_destroyer(system, start, target)
        code = YES if res.found else NO
    if res.found:
        _write(a.witness, witness_to_json(res.moves))
    out = {"verdict": res.verdict, "stats": res.stats,
           "moves": witness_to_json(res.moves)["moves"] if res.found else None}
    return code, out, res.verdict


def cmd_to_petri(a):
    doc = _parse(a.system, parse_system)
    net, gmap = translate.gadgets_to_petri(doc.system)
    start = translate.config_to_marking(gmap, doc.system.configuration(doc.robots))
    data = net_to_json(net, start)
    _write(a.output, data)
    aux = {"format": 1,
           "state_dishes": [[i, s, d] for (i, s), d in gmap.state_dish.items()],
           "robot_dishes": [[list(doc.system.classes[c]), d] for c, d in gmap.robot_dish.items()],
           "rules": [[i, list(t)] for i, t in gmap.transition_of]}
    _write(a.map, aux)
    return YES, {"dishes": len(net.dishes), "rules": len(net.rules), "net": None if a.output else data}, \
        f"{len(net.dishes)} dishes, {len(net.rules)} rules"


def cmd_from_petri(a):
    net, start = _parse(a.net, parse_net)
    system, nmap, config = translate.petri_to_gadgets(net, start)
    robots = {system.classes[c][0]: n for c, n in enumerate(config.counts) if n}
    data = system_to_json(system, robots)
    _write(a.output, data)
    aux = {"format": 1, "dish_locations": list(nmap.dish_node), "control_room": nmap.control_room,
           "spawner": nmap.spawner, "holding": nmap.holding,
           "rules": [{"inputs": list(i), "outputs": list(o)} for i, o in zip(nmap.input_doors, nmap.output_doors)]}
    _write(a.map, aux)
    return YES, {"doors": nmap.door_count(), "system": None if a.output else data}, f"{nmap.door_count()} doors"


def cmd_cover(a):
    net, start = _parse(a.net, parse_net)
    target = _vector(a.target, len(net.dishes), "--target")
    ok = petri.coverable(net, start, target)
    return (YES if ok else NO), {"coverable": ok}, f"{target} {'is' if ok else 'is not'} coverable"


def cmd_produce(a):
    net, start = _parse(a.net, parse_net)
    if a.dish not in net.dishes:
        raise InputError([f"unknown dish {a.dish!r}"])
    ok = petri.production(net, start, a.dish)
    return (YES if ok else NO), {"producible": ok}, f"dish {a.dish} {'can' if ok else 'cannot'} get a token"


def cmd_reach_exact(a):
    net, start = _parse(a.net, parse_net)
    target = _vector(a.target, len(net.dishes), "--target")
    res = petri.reachable_exact(net, start, target, a.volume_cap, a.state_cap)
    code = YES if res.found else (NO if res.complete else UNKNOWN)
    return code, {"verdict": res.verdict, "path": list(res.path) if res.path is not None else None}, res.verdict


def cmd_solve2(a):
    doc = _parse(a.system, parse_system)
    if a.at not in doc.system.class_of:
        raise InputError([f"unknown location {a.at!r}"])
    start = two_player.GameState.initial(doc.system, a.at)
    wins = {}
    for p, loc in ((1, a.win1), (2, a.win2)):
        if loc:
            wins[p] = doc.system.class_of[loc]
    sol = two_player.solve(doc.system, start, wins or None, a.budget)
    if a.strategy:
        _write(a.strategy, sol.strategy_json())
    value = sol.value
    return (YES if value is two_player.GameValue.WIN else NO), \
        {"value": str(value), "states": len(sol.graph)}, f"Player 1: {value}"


def cmd_g4(a):
    inst = _parse(a.instance, lambda t: g4_from_json(load_json(t)))
    value = g4.g4_solve(inst, a.budget)
    out = {"value": str(value)}
    if a.via_gadgets or a.emit_system:
        system, start, _ = g4.g4_to_gadgets(inst)
        _write(a.emit_system, system_to_json(system, {system.classes[start.robot][0]: 1}))
        if a.via_gadgets:
            gv = two_player.solve(system, start, budget=a.budget).value
            out["gadget_value"] = str(gv)
            out["agree"] = gv is value
    return (YES if value is g4.GameValue.WIN else NO), out, f"Player 1: {value}"


def cmd_verify_box(a):
    base = _parse(a.base, lambda t: gadget_type_from_json(load_json(t))) if a.base.endswith(".json") else None
    if base is None:
        try:
            base = gadget_type_from_json(a.base)
        except FormatError as e:
            raise InputError([str(e)]) from None
    cert = boxes.l2t_certificate()
    if a.construction == "identity":
        box = boxes.identity_box(base, base.states[0] if a.state is None else _coerce(a.state, base.states))
        expect = 1
    elif a.construction == "directed":
        box, expect = boxes.build_directed_tunnel_sim(base, cert), 2
    else:
        box, expect = boxes.build_l2t_sim(base, cert), 9
    rep = boxes.verify_box(box, expect)
    out = {"ok": rep.ok, "violations": rep.violations, "crossing_lengths": sorted(rep.crossing_lengths()),
           "stall_lengths": sorted(rep.stall_lengths()), "box_states": rep.box_states}
    return (YES if rep.ok else NO), out, "pass" if rep.ok else f"{len(rep.violations)} violation(s)"


def _coerce(text: str, states):
    for s in states:
        if str(s) == text:
            return s
    raise InputError([f"unknown state {text!r}"])


def cmd_replay(a):
    doc = _parse(a.system, parse_system)
    data = _parse(a.file, load_json)
    if "rounds" in data:
        trace = _parse(a.file, parse_trace)
        final = zero_player.replay(doc.system, trace)
        h = world_hash(final)
        ok = a.expect_hash is None or a.expect_hash == h
        return (YES if ok else NO), {"hash": h, "round": final.round}, f"replayed to round {final.round}"
    try:
        moves = witness_from_json(data)
    except FormatError as e:
        raise InputError([f"{a.file}: {e}"]) from None
    config = doc.system.configuration(_robots(doc, a.robot))
    try:
        for mv in moves:
            config = apply_move(doc.system, config, mv)
    except GadgetError as e:
        return NO, {"error": str(e)}, "witness does not replay"
    out = config_to_json(doc.system, config)
    ok = True
    if a.target:
        target = _parse(a.target, lambda t: config_from_json(doc.system, load_json(t)))
        ok = target == config
        out["matches_target"] = ok
    return (YES if ok else NO), out, "replayed" if ok else "final configuration differs from target"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gadgetbots", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        return s

    s = add("check", cmd_check, "validate a system file")
    s.add_argument("system")
    s = add("sim0", cmd_sim0, "round-robin 0-player simulation")
    s.add_argument("system")
    s.add_argument("--rounds", type=int, required=True)
    s.add_argument("--robot", action="append", help="LOC[=N] initial robots")
    s.add_argument("--target", help="stop once a robot reaches this location")
    s.add_argument("--trace", help="write a JSON trace")
    s.add_argument("--text", help="write a text trace")
    s = add("compile-counter", cmd_compile_counter, "compile a counter program to a 0-player system")
    s.add_argument("program")
    s.add_argument("-o", "--output")
    s = add("equiv-counter", cmd_equiv_counter, "compare the interpreter with the compiled system")
    s.add_argument("program")
    s.add_argument("--steps", type=int, default=200)
    s = add("solve1", cmd_solve1, "1-player robot reachability")
    s.add_argument("system")
    s.add_argument("--target", required=True)
    s.add_argument("--robot", action="append")
    s = add("reconfig", cmd_reconfig, "multi-robot targeted reconfiguration")
    s.add_argument("system")
    s.add_argument("--target", required=True, help="target configuration JSON")
    s.add_argument("--robot", action="append")
    s.add_argument("--robot-cap", type=int, default=6)
    s.add_argument("--state-cap", type=int, default=200_000)
    s.add_argument("--witness", help="write the move sequence here")
    s = add("to-petri", cmd_to_petri, "translate a system to a Petri net")
    s.add_argument("system")
    s.add_argument("-o", "--output")
    s.add_argument("--map")
    s = add("from-petri", cmd_from_petri, "translate a Petri net to a door system")
    s.add_argument("net")
    s.add_argument("-o", "--output")
    s.add_argument("--map")
    s = add("cover", cmd_cover, "Petri coverability")
    s.add_argument("net")
    s.add_argument("--target", required=True)
    s = add("produce", cmd_produce, "Petri production")
    s.add_argument("net")
    s.add_argument("--dish", required=True)
    s = add("reach-exact", cmd_reach_exact, "bounded exact Petri reachability")
    s.add_argument("net")
    s.add_argument("--target", required=True)
    s.add_argument("--volume-cap", type=int, default=10)
    s.add_argument("--state-cap", type=int, default=200_000)
    s = add("solve2", cmd_solve2, "solve the 2-player ko game")
    s.add_argument("system")
    s.add_argument("--at", required=True, help="robot location")
    s.add_argument("--win1")
    s.add_argument("--win2")
    s.add_argument("--budget", type=int, default=1_000_000)
    s.add_argument("--strategy", help="write the strategy table here")
    s = add("g4", cmd_g4, "solve a G4 instance")
    s.add_argument("instance")
    s.add_argument("--via-gadgets", action="store_true")
    s.add_argument("--emit-system")
    s.add_argument("--budget", type=int, default=1_000_000)
    s = add("verify-box", cmd_verify_box, "verify a simulation box")
    s.add_argument("--base", default="locking 2-toggle", help="library gadget name or gadget JSON file")
    s.add_argument("--construction", choices=("l2t", "directed", "identity"), default="l2t")
    s.add_argument("--state")
    s = add("replay", cmd_replay, "replay a witness or a 0-player trace")
    s.add_argument("system")
    s.add_argument("file")
    s.add_argument("--robot", action="append")
    s.add_argument("--target")
    s.add_argument("--expect-hash")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code else YES
    try:
        code, out, summary = args.fn(args)
    except InputError as e:
        print(json.dumps({"error": "input", "diagnostics": e.diagnostics}, indent=1))
        print("input error: " + "; ".join(e.diagnostics), file=sys.stderr)
        return BAD_INPUT
    except two_player.StateSpaceBudgetExceeded as e:
        print(json.dumps({"error": "budget", "message": str(e)}, indent=1))
        print(f"budget exceeded: {e}", file=sys.stderr)
        return UNKNOWN
    except (g4.InvalidInstance, counter.UnsupportedProgram, GadgetError, ValueError) as e:
        print(json.dumps({"error": "input", "diagnostics": [str(e)]}, indent=1))
        print(f"input error: {e}", file=sys.stderr)
        return BAD_INPUT
    print(json.dumps({"command": args.command, "exit": code, **out}, indent=1, default=str))
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
