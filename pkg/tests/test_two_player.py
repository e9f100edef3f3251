from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from gadgetbots.core import GadgetError, GadgetInstance, SystemOfGadgets
from gadgetbots.corpus import small_gadget_systems
from gadgetbots.library import locking_2_toggle, one_toggle
from gadgetbots.two_player import (
    GameState, GameValue, StateSpaceBudgetExceeded, build_graph, fixed_point_violations, game_moves,
    negamax_oracle, play, retrograde, solve,
)


def toggles(k):
    t = one_toggle()
    insts = tuple(GadgetInstance(t, 1, (f"t{i}.A", f"t{i}.B"), f"t{i}") for i in range(k))
    edges = tuple((f"t{i}.A", "hub") for i in range(k))
    return SystemOfGadgets(insts, edges, nodes=("hub",))


def corridor():
    """Two locking 2-toggles in a 2-cycle: each one's exits feed the other's entrances."""
    l2t = locking_2_toggle()
    a = GadgetInstance(l2t, 2, ("a.A", "a.B", "a.C", "a.D"), "a")
    b = GadgetInstance(l2t, 2, ("b.A", "b.B", "b.C", "b.D"), "b")
    edges = (("a.B", "b.A"), ("b.B", "a.C"), ("a.D", "b.C"), ("b.D", "a.A"))
    return SystemOfGadgets((a, b), edges)


def test_no_gadgets_no_moves():
    s = SystemOfGadgets((), nodes=("x",))
    st0 = GameState.initial(s, "x")
    assert game_moves(s, st0) == []
    assert solve(s, st0).value is GameValue.LOSE


def test_ko_blocks_the_only_gadget():
    s = toggles(1)
    after = play(s, GameState.initial(s, "hub"), (0, (1, "A", "B", 2)))
    assert after.robot == s.class_of["t0.B"]
    assert game_moves(s, after) == []


def test_ko_filters_one_of_two():
    s = toggles(2)
    st0 = GameState(s.initial_states(), s.class_of["hub"], 0)
    assert game_moves(s, st0) == [(1, (1, "A", "B", 2))]


def test_one_toggle_wins():
    s = toggles(1)
    assert solve(s, GameState.initial(s, "hub")).value is GameValue.WIN


def test_illegal_play_raises():
    s = toggles(1)
    with pytest.raises(GadgetError):
        play(s, GameState.initial(s, "hub"), (0, (2, "B", "A", 1)))


def test_spawners_rejected():
    s = SystemOfGadgets(toggles(1).instances, spawners=("t0.A",))
    with pytest.raises(GadgetError):
        solve(s, GameState.initial(s, "t0.A"))


def test_budget():
    s = corridor()
    with pytest.raises(StateSpaceBudgetExceeded):
        solve(s, GameState.initial(s, "a.A"), budget=2)


def test_corridor_matches_oracle():
    s = corridor()
    start = GameState.initial(s, "a.A")
    sol = solve(s, start)
    oracle = negamax_oracle(s, start)
    assert {st_: sol.label_of(st_) for st_ in oracle} == oracle
    assert fixed_point_violations(sol.graph, sol.labels) == []


def test_win_classes():
    s = toggles(1)
    start = GameState.initial(s, "hub")
    win = {1: s.class_of["t0.B"], 2: s.class_of["hub"]}
    sol = solve(s, start, win)
    assert sol.value is GameValue.WIN and sol.graph.winning[0]
    assert negamax_oracle(s, start, win)[sol.graph.states[0]] is GameValue.WIN


def test_strategy_export():
    s = corridor()
    sol = solve(s, GameState.initial(s, "a.A"))
    doc = sol.strategy_json()
    assert doc["format"] == 1 and len(doc["strategy"]) == len(sol.graph)
    for k, row in enumerate(doc["strategy"]):
        if sol.labels[k] is GameValue.LOSE:
            continue
        assert row["move"] is not None


GAMES = []
for case in small_gadget_systems(max_locations=6, max_robots=1):
    s = case.system
    if s.spawners or s.destroyers or case.start.robots != 1:
        continue
    GAMES.append((s, GameState(case.start.states, case.start.counts.index(1))))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(GAMES))
def test_retrograde_matches_negamax(game):
    s, start = game
    sol = solve(s, start)
    assert fixed_point_violations(sol.graph, sol.labels) == []
    oracle = negamax_oracle(s, start)
    assert len(oracle) == len(sol.graph)
    for state, value in oracle.items():
        assert sol.label_of(state) is value


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(GAMES))
def test_ko_invariance(game):
    s, start = game
    g = build_graph(s, start)
    for state in g.states:
        assert all(i != state.last for i, _ in game_moves(s, state))


def test_retrograde_labels_length():
    s = corridor()
    g = build_graph(s, GameState.initial(s, "a.A"))
    assert len(retrograde(g)) == len(g)
