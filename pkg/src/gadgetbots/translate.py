"""Translations between multi-robot gadget systems and Petri nets.

``gadgets_to_petri`` turns every gadget state and every ordinary location
class into a dish and every transition into a rule. ``petri_to_gadgets``
builds a system of symmetric self-closing doors driven by a single control
robot that fires one rule per trip around its control path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Configuration,
    GadgetError,
    GadgetInstance,
    NondeterministicGadget,
    SystemOfGadgets,
    is_deterministic,
)
from .library import symmetric_self_closing_door
from .petri import PetriNet, forward_reach


class NotAConfigurationMarking(GadgetError):
    pass


@dataclass(frozen=True)
class GadgetNetMap:
    system: SystemOfGadgets
    state_dish: dict  # (instance, state) -> dish index
    robot_dish: dict  # class -> dish index (spawner and destroyer classes excluded)
    rule_of: dict  # (instance, transition) -> rule index
    transition_of: tuple  # rule index -> (instance, transition)

    @property
    def groups(self) -> tuple:
        """Dish indices of each instance's state dishes."""
        out = []
        for i, inst in enumerate(self.system.instances):
            out.append(tuple(self.state_dish[(i, s)] for s in inst.type.states))
        return tuple(out)


def _class_label(system: SystemOfGadgets, c: int) -> str:
    return "@" + "|".join(map(str, system.classes[c]))


def gadgets_to_petri(system: SystemOfGadgets) -> tuple[PetriNet, GadgetNetMap]:
    for inst in system.instances:
        if not is_deterministic(inst.type):
            raise NondeterministicGadget(f"{inst.type.name} is not deterministic")
    dishes, state_dish, robot_dish = [], {}, {}
    for i, inst in enumerate(system.instances):
        label = inst.name or f"g{i}"
        for s in inst.type.states:
            state_dish[(i, s)] = len(dishes)
            dishes.append(f"{label}:{s}")
    special = system.spawner_classes | system.destroyer_classes
    for c in range(len(system.classes)):
        if c not in special:
            robot_dish[c] = len(dishes)
            dishes.append(_class_label(system, c))
    n = len(dishes)
    rules, rule_of, transition_of = [], {}, []
    for i, inst in enumerate(system.instances):
        for t in inst.type.transitions:
            src, dst = system.transition_classes[(i, t)]
            if src in system.destroyer_classes:
                continue  # no robot ever rests in a destroyer class
            u, v = [0] * n, [0] * n
            u[state_dish[(i, t[0])]] += 1
            v[state_dish[(i, t[3])]] += 1
            if src not in system.spawner_classes:
                u[robot_dish[src]] += 1
            if dst not in special:
                v[robot_dish[dst]] += 1
            rule_of[(i, t)] = len(rules)
            transition_of.append((i, t))
            rules.append((tuple(u), tuple(v)))
    net = PetriNet(tuple(dishes), tuple(rules))
    return net, GadgetNetMap(system, state_dish, robot_dish, rule_of, tuple(transition_of))


def config_to_marking(gmap: GadgetNetMap, config: Configuration) -> tuple:
    """Robots resting in spawner classes are not represented."""
    m = [0] * (len(gmap.state_dish) + len(gmap.robot_dish))
    for i, s in enumerate(config.states):
        m[gmap.state_dish[(i, s)]] = 1
    for c, d in gmap.robot_dish.items():
        m[d] = config.counts[c]
    return tuple(m)


def marking_to_config(gmap: GadgetNetMap, marking) -> Configuration:
    states = []
    for i, inst in enumerate(gmap.system.instances):
        held = [(s, marking[gmap.state_dish[(i, s)]]) for s in inst.type.states]
        if sum(k for _, k in held) != 1 or max(k for _, k in held) != 1:
            raise NotAConfigurationMarking(f"instance {i} state dishes hold {[k for _, k in held]}")
        states.append(next(s for s, k in held if k == 1))
    counts = [0] * len(gmap.system.classes)
    for c, d in gmap.robot_dish.items():
        counts[c] = marking[d]
    return Configuration(tuple(states), tuple(counts))


@dataclass(frozen=True)
class NetGadgetMap:
    net: PetriNet
    dish_node: tuple  # dish index -> global location of its class
    control_room: str
    spawner: str
    holding: str
    input_doors: tuple  # per rule: instance indices of input doors
    output_doors: tuple  # per rule: instance indices of output doors
    intermediates: tuple  # per rule: intermediate nodes (token side)
    control_nodes: tuple  # per rule: control-path nodes between doors

    def door_count(self) -> int:
        return sum(len(a) + len(b) for a, b in zip(self.input_doors, self.output_doors))


def _expand(vec) -> list[int]:
    return [d for d, k in enumerate(vec) for _ in range(k)]


def petri_to_gadgets(net: PetriNet, start) -> tuple[SystemOfGadgets, NetGadgetMap, Configuration]:
    """Simulate ``net`` with symmetric self-closing doors, one control robot and a spawner.

    Input door ``j`` of a rule lets a token robot cross from its dish into a
    rule-private intermediate node, opening the door's control tunnel. The
    control robot then passes every input door and opens every output door,
    whose other tunnel leads from intermediate ``j`` (or from the spawner, for
    surplus outputs) into the output dish. Surplus inputs lead into a holding
    node with no way out.
    """
    door = symmetric_self_closing_door()
    control, spawn, holding = "control", "spawn", "holding"
    dish_node = tuple(f"dish:{d}" for d in net.dishes)
    instances, edges = [], []
    in_doors, out_doors, mids, ctrl_nodes = [], [], [], []
    for k, (u, v) in enumerate(net.rules):
        ins, outs = _expand(u), _expand(v)
        mid = [f"r{k}.mid{j}" if j < len(outs) else holding for j in range(len(ins))]
        rule_in, rule_out, path = [], [], []
        for j, d in enumerate(ins):
            name = f"r{k}.in{j}"
            inst = GadgetInstance(door, 1, tuple(f"{name}.{x}" for x in "ABCD"), name)
            edges += [(dish_node[d], f"{name}.A"), (f"{name}.B", mid[j])]
            rule_in.append(len(instances))
            instances.append(inst)
            path.append((f"{name}.C", f"{name}.D"))
        for j, d in enumerate(outs):
            name = f"r{k}.out{j}"
            inst = GadgetInstance(door, 1, tuple(f"{name}.{x}" for x in "ABCD"), name)
            feed = mid[j] if j < len(ins) else spawn
            edges += [(feed, f"{name}.C"), (f"{name}.D", dish_node[d])]
            rule_out.append(len(instances))
            instances.append(inst)
            path.append((f"{name}.A", f"{name}.B"))
        nodes = []
        if path:
            edges.append((control, path[0][0]))
            for j in range(len(path) - 1):
                node = f"r{k}.ctl{j}"
                nodes.append(node)
                edges += [(path[j][1], node), (node, path[j + 1][0])]
            edges.append((path[-1][1], control))
        in_doors.append(tuple(rule_in))
        out_doors.append(tuple(rule_out))
        mids.append(tuple(dict.fromkeys(m for m in mid if m != holding)))
        ctrl_nodes.append(tuple(nodes))
    free = (control, spawn, holding) + dish_node
    system = SystemOfGadgets(tuple(instances), tuple(edges), spawners=(spawn,), nodes=free)
    nmap = NetGadgetMap(net, dish_node, control, spawn, holding, tuple(in_doors), tuple(out_doors),
                        tuple(mids), tuple(ctrl_nodes))
    robots = {control: 1}
    for d, k in enumerate(start):
        if k:
            robots[dish_node[d]] = k
    return system, nmap, system.configuration(robots)


def project_net_config(system: SystemOfGadgets, nmap: NetGadgetMap, config: Configuration):
    """Marking represented by a gadget configuration, or None if a rule is mid-firing.

    A configuration counts only when every door is closed back to state 1,
    the control robot is home and every intermediate node is empty.
    """
    if any(s != 1 for s in config.states):
        return None
    cls = system.class_of
    if config.counts[cls[nmap.control_room]] != 1:
        return None
    for group in nmap.intermediates + nmap.control_nodes:
        if any(config.counts[cls[x]] for x in group):
            return None
    return tuple(config.counts[cls[x]] for x in nmap.dish_node)


def with_holding_as_destroyer(system: SystemOfGadgets, nmap: NetGadgetMap) -> SystemOfGadgets:
    """Robots sent to the holding node can never move again; for exact targets
    it is equivalent (and finite) to delete them on arrival."""
    return SystemOfGadgets(system.instances, system.connections, system.spawners, (nmap.holding,),
                           system.nodes, system.directed)


@dataclass
class SimulationReport:
    ok: bool
    gadget_side: int
    net_side: int
    exhaustive: bool
    missing_in_net: list = field(default_factory=list)  # gadget configs with no matching marking
    missing_in_gadgets: list = field(default_factory=list)  # markings no gadget config represents
    invariant_violations: list = field(default_factory=list)


def verify_gadgets_to_petri(system: SystemOfGadgets, start: Configuration, robot_cap: int,
                            state_cap: int = 200_000, net: PetriNet | None = None) -> SimulationReport:
    """Compare brute-force gadget reach sets with Petri forward reach sets.

    ``robot_cap`` bounds robots outside spawner classes; the Petri side uses
    the matching volume cap (robots plus one state token per instance).
    Passing ``net`` substitutes a different net for the translated one.
    """
    from .one_player import brute_reach_set

    tnet, gmap = gadgets_to_petri(system)
    net = net or tnet
    brute = brute_reach_set(system, start, robot_cap, state_cap)
    fwd = forward_reach(net, config_to_marking(gmap, start), robot_cap + len(system.instances), state_cap)
    gside = {config_to_marking(gmap, c) for c in brute.configs}
    groups = gmap.groups
    bad = [m for m in fwd.markings if any(sum(m[d] for d in g) != 1 for g in groups)]
    missing_net = sorted(gside - fwd.markings)
    missing_g = sorted(fwd.markings - gside)
    exhaustive = brute.exhausted and fwd.exhausted
    return SimulationReport(not missing_net and not missing_g and not bad, len(gside), len(fwd.markings),
                            exhaustive, missing_net, missing_g, bad)


def verify_petri_to_gadgets(net: PetriNet, start, volume_cap: int, state_cap: int = 200_000,
                            system: SystemOfGadgets | None = None) -> SimulationReport:
    """Compare a net's bounded reach set with the door system's completed firings.

    The gadget side allows one extra robot (the control robot). Markings seen
    on the gadget side are checked against a Petri search with a slightly
    larger volume cap, since the firing order behind a gadget run may pass
    through larger intermediate volumes.
    """
    from .one_player import brute_reach_set

    gsys, nmap, gstart = petri_to_gadgets(net, start)
    gsys = with_holding_as_destroyer(system or gsys, nmap)
    gstart = Configuration(gstart.states, tuple(
        0 if c in gsys.destroyer_classes else k for c, k in enumerate(gstart.counts)))
    brute = brute_reach_set(gsys, gstart, volume_cap + 1, state_cap)
    gside = set()
    for c in brute.configs:
        m = project_net_config(gsys, nmap, c)
        if m is not None:
            gside.add(m)
    fwd = forward_reach(net, start, volume_cap, state_cap)
    # a surplus input door may hand its token to the holding node long before
    # the rule fires, so the Petri side may need one extra token per such door
    slack = sum(max(0, sum(u) - sum(v)) for u, v in net.rules)
    wide = forward_reach(net, start, volume_cap + slack, state_cap)
    missing_g = sorted(fwd.markings - gside)
    missing_net = sorted(m for m in gside if m not in wide.markings)
    return SimulationReport(not missing_g and not missing_net, len(gside), len(fwd.markings),
                            brute.exhausted and fwd.exhausted, missing_net, missing_g)


def verify_simulation(subject, start, cap: int, state_cap: int = 200_000) -> SimulationReport:
    """Check either translation on ``subject``: a system (``cap`` bounds robots)
    or a net (``cap`` bounds volume)."""
    if isinstance(subject, PetriNet):
        return verify_petri_to_gadgets(subject, start, cap, state_cap)
    return verify_gadgets_to_petri(subject, start, cap, state_cap)
