from __future__ import annotations

from hypothesis import given, settings, strategies as st

from gadgetbots.core import GadgetInstance, SystemOfGadgets
from gadgetbots.counter import CounterProgram, HALT, INC, JZ, compile_program
from gadgetbots.library import one_toggle, register_gadget, us_switch
from gadgetbots.zero_player import (
    Trace, WorldState, reach_within, replay, robot_turn, simulate, step_round, validate_directed,
)


def wire_toggle():
    t = one_toggle()
    inst = GadgetInstance(t, 1, ("t.A", "t.B"), "t")
    return SystemOfGadgets((inst,), (("in", "t.A"), ("t.B", "out")), nodes=("in", "out"), directed=True)


def test_empty_system_is_valid():
    assert validate_directed(SystemOfGadgets((), directed=True)) == []


def test_exit_with_two_edges():
    s = wire_toggle()
    s = SystemOfGadgets(s.instances, s.connections + (("t.B", "elsewhere"),), nodes=s.nodes, directed=True)
    assert any("outgoing edges" in d for d in validate_directed(s))


def test_free_cycle_rejected():
    s = SystemOfGadgets((), (("a", "b"), ("b", "a")), directed=True)
    assert any("cycle" in d for d in validate_directed(s))


def test_robot_crosses_open_toggle():
    s = wire_toggle()
    w, ev = robot_turn(s, WorldState.initial(s, ["in"]), 0)
    assert w.robots == ("t.B",) and w.states == (2,) and ev.traversal == (0, (1, "A", "B", 2))


def test_robot_at_closed_register_stays():
    reg = register_gadget()
    inst = GadgetInstance(reg, "O", tuple(f"r.{x}" for x in reg.locations), "r")
    s = SystemOfGadgets((inst,), directed=True)
    w, ev = robot_turn(s, WorldState.initial(s, ["r.proc_in"]), 0)
    assert w.robots == ("r.proc_in",) and ev.traversal is None


def test_free_chain_to_dead_end():
    s = SystemOfGadgets((), (("a", "b"), ("b", "c"), ("c", "d")), directed=True)
    w, ev = robot_turn(s, WorldState.initial(s, ["a"]), 0)
    assert w.robots == ("d",) and ev.path == ("a", "b", "c", "d")


def test_spawner_counts():
    s = SystemOfGadgets((), spawners=("s1", "s2", "s3"), nodes=("s1", "s2", "s3"), directed=True)
    w, _ = step_round(s, WorldState.initial(s))
    assert len(w.robots) == 3
    w, _ = simulate(s, WorldState.initial(s), 5)
    assert len(w.robots) == 15


def test_first_executor_takes_bottom_of_us():
    m = compile_program(CounterProgram([HALT]))
    w, _ = simulate(m.system, m.initial_world(), 2)
    us = m.system.instances[m.us_gadget]
    assert w.states[m.us_gadget] == "up"
    # the robot spawned in round 1 went through O_down on its round-2 turn
    _, trace = simulate(m.system, m.initial_world(), 2)
    first = [e for e in trace.rounds[1].turns if e.robot == 0][0]
    assert us.global_of["O_down"] in first.path


def test_reach_spawner_location():
    s = SystemOfGadgets((), spawners=("s",), nodes=("s",), directed=True)
    assert reach_within(s, WorldState.initial(s), "s", 5).round == 1


def test_unreachable_target():
    s = wire_toggle()
    s = SystemOfGadgets(s.instances, s.connections, nodes=s.nodes + ("island",), directed=True)
    assert not reach_within(s, WorldState.initial(s, ["in"]), "island", 50).reached


def test_halt_program_reaches_win():
    m = compile_program(CounterProgram([HALT]))
    assert validate_directed(m.system) == []
    assert reach_within(m.system, m.initial_world(), m.win, 100).reached


PROGRAMS = [
    CounterProgram([HALT]),
    CounterProgram([INC(1), INC(2), HALT]),
    CounterProgram([INC(1), JZ(2, 1)]),
]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PROGRAMS), st.integers(0, 40))
def test_determinism_replay_conservation(program, rounds):
    m = compile_program(program)
    w1, t1 = simulate(m.system, m.initial_world(), rounds)
    w2, t2 = simulate(m.system, m.initial_world(), rounds)
    assert w1 == w2 and t1.to_json() == t2.to_json()
    assert replay(m.system, Trace.from_json(t1.to_json())) == w1
    assert len(w1.robots) == rounds
    for rec in t1.rounds:
        for e in rec.turns:
            assert e.traversal is None or len(e.path) >= 2


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(PROGRAMS[:2]), st.integers(0, 30))
def test_reachability_is_monotone(program, extra):
    m = compile_program(program)
    first = reach_within(m.system, m.initial_world(), m.win, 200)
    assert first.reached
    again = reach_within(m.system, m.initial_world(), m.win, first.round + extra)
    assert again.round == first.round


def test_us_switch_first_down_then_up():
    us = us_switch()
    inst = GadgetInstance(us, "down", ("u.I", "u.O_up", "u.O_down"), "u")
    s = SystemOfGadgets((inst,), (("src", "u.I"),), spawners=("src",), nodes=("src",), directed=True)
    w, _ = simulate(s, WorldState.initial(s), 4)
    assert w.robots[0] == "u.O_down" and w.robots[1] == "u.O_up"
