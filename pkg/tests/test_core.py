from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from gadgetbots.core import (
    GadgetInstance, GadgetType, IllegalMove, Move, SystemOfGadgets, apply_move, is_dag,
    is_deterministic, is_k_tunnel, is_legal, is_reversible, legal_moves, validate_system,
)
from gadgetbots.corpus import small_gadget_systems
from gadgetbots.library import (
    increment_gadget, locking_2_toggle, one_toggle, register_gadget, standard_library,
    symmetric_self_closing_door, two_tunnel_toggle, updsds,
)


def single(gtype, state, **kw):
    inst = GadgetInstance(gtype, state, tuple(f"g.{x}" for x in gtype.locations), "g")
    return SystemOfGadgets((inst,), **kw)


def test_well_formed_l2t_system_has_no_diagnostics():
    assert validate_system(single(locking_2_toggle(), 2)) == []


def test_undeclared_state_is_named():
    bad = GadgetType("bad", (1,), ("A", "B"), [(1, "A", "B", 7)])
    out = validate_system(single(bad, 1))
    assert len(out) == 1 and "7" in out[0]


def test_spawner_and_destroyer_sharing_a_class():
    s = single(one_toggle(), 1, spawners=("g.A",), destroyers=("g.A",))
    assert len(validate_system(s)) == 1


def test_location_shared_by_two_instances():
    t = one_toggle()
    s = SystemOfGadgets((GadgetInstance(t, 1, ("x", "y")), GadgetInstance(t, 1, ("y", "z"))))
    assert any("more than one instance" in d for d in validate_system(s))


def test_tunnel_violation_reported():
    g = GadgetType("leaky", (1,), ("A", "B", "C", "D"), [(1, "A", "C", 1)], (("A", "B"), ("C", "D")))
    assert any("tunnel" in d for d in g.diagnostics())


def test_determinism():
    assert is_deterministic(locking_2_toggle())
    assert is_deterministic(symmetric_self_closing_door())
    fork = GadgetType("fork", (1, 2), ("A", "B", "C"), [(1, "A", "B", 2), (1, "A", "C", 2)])
    assert not is_deterministic(fork)


def test_reversibility():
    assert is_reversible(one_toggle())
    assert not is_reversible(symmetric_self_closing_door())
    assert is_reversible(GadgetType("empty", (1,), ("A",), []))


def test_tunnels():
    assert is_k_tunnel(locking_2_toggle()) == (("A", "B"), ("C", "D"))
    assert is_k_tunnel(symmetric_self_closing_door()) == (("A", "B"), ("C", "D"))
    assert is_k_tunnel(GadgetType("odd", (1,), ("A", "B", "C"), [])) is None


def test_dag():
    assert not is_dag(locking_2_toggle())
    assert is_dag(GadgetType("still", (1,), ("A",), []))
    assert is_dag(GadgetType("once", (1, 2), ("A", "B"), [(1, "A", "B", 2)]))


def test_library_sizes():
    assert (len(increment_gadget().states), len(increment_gadget().locations)) == (4, 10)
    assert (len(register_gadget().states), len(register_gadget().locations)) == (3, 10)
    assert (len(symmetric_self_closing_door().states), len(symmetric_self_closing_door().locations)) == (2, 4)
    assert len(updsds().locations) == 8


def test_library_properties():
    lib = standard_library()
    for g in lib.values():
        assert g.diagnostics() == []
        assert is_deterministic(g)
        # exhaustive reversibility check, written independently of is_reversible
        inverse = all(any(u == (s2, b, a, s) for u in g.transitions) for s, a, b, s2 in g.transitions)
        assert is_reversible(g) == inverse
    assert is_reversible(lib["locking 2-toggle"])
    for name in ("increment", "register", "UPDSDS", "symmetric self-closing door"):
        assert not is_reversible(lib[name])


def test_l2t_nonleaf_move_from_tunnel_one():
    s = single(locking_2_toggle(), 2)
    moves = legal_moves(s, s.configuration(["g.A"]))
    assert moves == [Move.traverse(0, (2, "A", "B", 1))]


def test_no_robots_no_moves():
    s = single(locking_2_toggle(), 2)
    assert legal_moves(s, s.configuration()) == []


def test_spawner_always_enabled():
    s = single(one_toggle(), 1, spawners=("g.A",))
    assert legal_moves(s, s.configuration())[-1] == Move.spawn(s.class_of["g.A"])


def test_toggle_traversal():
    s = single(one_toggle(), 1)
    c = s.configuration(["g.A"])
    n = apply_move(s, c, Move.traverse(0, (1, "A", "B", 2)))
    assert n.states == (2,) and n.counts[s.class_of["g.B"]] == 1 and n.counts[s.class_of["g.A"]] == 0


def test_spawn_increments():
    s = single(one_toggle(), 1, spawners=("g.A",))
    c = s.configuration({"g.A": 3})
    assert apply_move(s, c, Move.spawn(s.class_of["g.A"])).counts[s.class_of["g.A"]] == 4


def test_destroyer_swallows():
    s = single(one_toggle(), 1, destroyers=("g.B",))
    n = apply_move(s, s.configuration(["g.A"]), Move.traverse(0, (1, "A", "B", 2)))
    assert n.counts[s.class_of["g.B"]] == 0 and n.robots == 0


def test_illegal_move_raises():
    s = single(one_toggle(), 2)
    with pytest.raises(IllegalMove):
        apply_move(s, s.configuration(["g.A"]), Move.traverse(0, (1, "A", "B", 2)))


def test_classes_partition_locations():
    t = two_tunnel_toggle()
    s = SystemOfGadgets((GadgetInstance(t, 1, ("a", "b", "c", "d")),), (("b", "c"),))
    flat = [x for c in s.classes for x in c]
    assert sorted(flat) == sorted(s.all_locations)
    assert s.class_of["b"] == s.class_of["c"]


CASES = list(small_gadget_systems(max_locations=4, max_robots=2))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CASES), st.integers(0, 10_000))
def test_apply_move_conserves_and_is_pure(case, pick):
    s, c = case.system, case.start
    moves = legal_moves(s, c)
    if not moves:
        return
    mv = moves[pick % len(moves)]
    before = (c.states, c.counts)
    n = apply_move(s, c, mv)
    assert (c.states, c.counts) == before
    if mv.kind == "spawn":
        delta = 1
    else:
        delta = -1 if s.transition_classes[(mv.instance, mv.transition)][1] in s.destroyer_classes else 0
    assert n.robots == c.robots + delta
    assert all(is_legal(s, c, m) for m in moves)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CASES))
def test_same_class_same_moves(case):
    s = case.system
    for c, locs in enumerate(s.classes):
        if c in s.destroyer_classes:
            continue
        views = {tuple(legal_moves(s, s.configuration([x], case.start.states))) for x in locs}
        assert len(views) == 1
