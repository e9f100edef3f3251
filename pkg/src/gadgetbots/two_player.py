"""The impartial 2-player game with the ko rule: both players steer one robot.

A move carries the robot through exactly one open transition reachable from
its location class; a player may not traverse the instance the opponent
traversed on the previous move. A player with no legal move loses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import GadgetError, SystemOfGadgets


class StateSpaceBudgetExceeded(GadgetError):
    pass


class GameValue(Enum):
    WIN = "WIN"
    LOSE = "LOSE"
    DRAW = "DRAW"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GameState:
    states: tuple
    robot: int  # location class
    last: int | None = None  # instance traversed by the previous move
    mover: int = 1

    @staticmethod
    def initial(system: SystemOfGadgets, location, mover: int = 1) -> "GameState":
        return GameState(system.initial_states(), system.class_of[location], None, mover)


def validate_game(system: SystemOfGadgets) -> list[str]:
    out = []
    if system.spawners:
        out.append("2-player games have no spawners")
    if system.destroyers:
        out.append("2-player games have no destroyers")
    return out


def game_moves(system: SystemOfGadgets, state: GameState) -> list[tuple]:
    """Open ``(instance, transition)`` pairs from the robot's class, minus the ko instance."""
    return [
        (i, t) for i, t in system.moves_by_class.get(state.robot, ())
        if i != state.last and state.states[i] == t[0]
    ]


def play(system: SystemOfGadgets, state: GameState, move: tuple) -> GameState:
    i, t = move
    if move not in game_moves(system, state):
        raise GadgetError(f"illegal move {move!r}")
    states = list(state.states)
    states[i] = t[3]
    return GameState(tuple(states), system.transition_classes[(i, t)][1], i, 3 - state.mover)


@dataclass
class GameGraph:
    """Reachable game states with successor lists.

    With ``win_classes`` set, a move landing the robot in the mover's win
    class ends the game at once; those moves are listed in ``winning``.
    """

    states: list
    index: dict
    succ: list  # per state: list of (move, successor index)
    winning: list  # per state: moves that win on the spot
    track_mover: bool = False

    def __len__(self):
        return len(self.states)


def _key(state: GameState, track_mover: bool):
    return state if track_mover else GameState(state.states, state.robot, state.last, 1)


def build_graph(system: SystemOfGadgets, start: GameState, win_classes: dict | None = None,
                budget: int = 1_000_000) -> GameGraph:
    track = bool(win_classes)
    start = _key(start, track)
    states, index, succ, winning = [start], {start: 0}, [], []
    queue = deque([start])
    tc = system.transition_classes
    while queue:
        s = queue.popleft()
        row, wins = [], []
        for mv in game_moves(system, s):
            i, t = mv
            dst = tc[mv][1]
            if track and win_classes.get(s.mover) == dst:
                wins.append(mv)
                continue
            ns = list(s.states)
            ns[i] = t[3]
            n = _key(GameState(tuple(ns), dst, i, 3 - s.mover), track)
            k = index.get(n)
            if k is None:
                if len(states) >= budget:
                    raise StateSpaceBudgetExceeded(f"more than {budget} game states")
                k = index[n] = len(states)
                states.append(n)
                queue.append(n)
            row.append((mv, k))
        succ.append(row)
        winning.append(wins)
    return GameGraph(states, index, succ, winning, track)


@dataclass
class Solution:
    graph: GameGraph
    labels: list  # GameValue per state, for the player to move

    @property
    def value(self) -> GameValue:
        return self.labels[0]

    def label_of(self, state: GameState) -> GameValue:
        return self.labels[self.graph.index[_key(state, self.graph.track_mover)]]

    def best_move(self, k: int):
        """A move realizing the label of state ``k`` (None when the mover has no move)."""
        g = self.graph
        if g.winning[k]:
            return g.winning[k][0]
        want = {GameValue.WIN: GameValue.LOSE, GameValue.DRAW: GameValue.DRAW}.get(self.labels[k])
        for mv, n in g.succ[k]:
            if want is None or self.labels[n] == want:
                return mv
        return None

    def strategy(self) -> dict:
        return {s: self.best_move(k) for k, s in enumerate(self.graph.states)}

    def strategy_json(self) -> dict:
        rows = []
        for k, s in enumerate(self.graph.states):
            mv = self.best_move(k)
            rows.append({
                "states": list(s.states), "robot": s.robot, "last": s.last, "mover": s.mover,
                "value": str(self.labels[k]),
                "move": None if mv is None else [mv[0], list(mv[1])],
            })
        return {"format": 1, "value": str(self.value), "strategy": rows}


def retrograde(graph: GameGraph) -> list:
    """Win/lose/draw labels by backward induction from terminal states."""
    n = len(graph)
    preds = [[] for _ in range(n)]
    remaining = [0] * n
    label = [None] * n
    queue = deque()
    for k in range(n):
        for _, m in graph.succ[k]:
            preds[m].append(k)
        remaining[k] = len(graph.succ[k])
        if graph.winning[k]:
            label[k] = GameValue.WIN
            queue.append(k)
        elif not graph.succ[k]:
            label[k] = GameValue.LOSE
            queue.append(k)
    while queue:
        m = queue.popleft()
        for k in preds[m]:
            if label[k] is not None:
                continue
            if label[m] is GameValue.LOSE:
                label[k] = GameValue.WIN
                queue.append(k)
            else:
                remaining[k] -= 1
                if remaining[k] == 0:
                    label[k] = GameValue.LOSE
                    queue.append(k)
    return [x if x is not None else GameValue.DRAW for x in label]


def solve(system: SystemOfGadgets, start: GameState, win_classes: dict | None = None,
          budget: int = 1_000_000) -> Solution:
    problems = validate_game(system)
    if problems:
        raise GadgetError("; ".join(problems))
    graph = build_graph(system, start, win_classes, budget)
    return Solution(graph, retrograde(graph))


def negamax_oracle(system: SystemOfGadgets, start: GameState, win_classes: dict | None = None,
                   depth: int | None = None, budget: int = 10_000) -> dict:
    """Depth-bounded negamax by value iteration, independent of ``retrograde``.

    Explores with ``play`` and evaluates v_d(s) = +1 if s has an immediately
    winning move, -1 if s has no move, otherwise max over successors of
    -v_{d-1}, with v_0 = 0. Values still 0 at depth ``depth`` (default twice
    the state count) are draws. Returns a map from state to value.
    """
    track = bool(win_classes)
    order = [_key(start, track)]
    pos = {order[0]: 0}
    src, dst, instant = [], [], []
    k = 0
    while k < len(order):
        s = order[k]
        won = False
        for mv in game_moves(system, s):
            n = play(system, s, mv)
            if track and win_classes.get(s.mover) == n.robot:
                won = True
                continue
            n = _key(n, track)
            if n not in pos:
                if len(order) >= budget:
                    raise StateSpaceBudgetExceeded(f"more than {budget} game states")
                pos[n] = len(order)
                order.append(n)
            src.append(k)
            dst.append(pos[n])
        instant.append(won)
        k += 1
    n = len(order)
    depth = 2 * n if depth is None else depth
    src, dst = np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)
    instant = np.array(instant, dtype=bool)
    v = np.zeros(n, dtype=np.int8)
    for _ in range(depth):
        best = np.full(n, -1, dtype=np.int8)
        if len(src):
            np.maximum.at(best, src, -v[dst])
        nv = np.where(instant, 1, best).astype(np.int8)
        if np.array_equal(nv, v):
            break
        v = nv
    names = {1: GameValue.WIN, -1: GameValue.LOSE, 0: GameValue.DRAW}
    return {s: names[int(x)] for s, x in zip(order, v)}


def fixed_point_violations(graph: GameGraph, labels: list) -> list[int]:
    """States whose label is inconsistent with their successors' labels."""
    bad = []
    for k, row in enumerate(graph.succ):
        kids = [labels[m] for _, m in row]
        if graph.winning[k]:
            ok = labels[k] is GameValue.WIN
        elif labels[k] is GameValue.WIN:
            ok = GameValue.LOSE in kids
        elif labels[k] is GameValue.LOSE:
            ok = all(x is GameValue.WIN for x in kids)
        else:
            ok = GameValue.LOSE not in kids and GameValue.DRAW in kids
        if not ok:
            bad.append(k)
    return bad
