"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (about six minutes on one
core) or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import time

import pytest

from gadgetbots import cli
from gadgetbots.boxes import build_directed_tunnel_sim, build_l2t_sim, l2t_certificate, verify_box
from gadgetbots.core import Configuration, GadgetInstance, SystemOfGadgets
from gadgetbots.corpus import markings, random_nets, sampled_gadget_systems, small_gadget_systems, small_nets
from gadgetbots.g4 import g4_corpus, g4_solve, g4_to_gadgets
from gadgetbots.library import locking_2_toggle, one_toggle
from gadgetbots.one_player import (
    brute_reach_set, reconfigure_no_destroyer, reconfigure_with_destroyer, replay_moves, robot_reachability,
)
from gadgetbots.petri import coverable, forward_reach, production, reachable_exact
from gadgetbots.translate import (
    petri_to_gadgets, verify_gadgets_to_petri, verify_petri_to_gadgets, with_holding_as_destroyer,
)
from gadgetbots.two_player import (
    GameState, GameValue, StateSpaceBudgetExceeded, fixed_point_violations, negamax_oracle, solve,
)

HALTING = {
    "halt": "1: HALT\n",
    "six": "1: INC 1\n2: INC 1\n3: DEC 1\n4: JZ 1 6\n5: JZ 3 3\n6: HALT\n",
    "fill": "1: INC 1\n2: INC 2\n3: INC 2\n4: INC 3\n5: HALT\n",
    "transfer": "1: INC 1\n2: INC 1\n3: INC 1\n4: JZ 1 8\n5: DEC 1\n6: INC 2\n7: JZ 3 4\n8: HALT\n",
    "countdown": "1: INC 2\n2: INC 2\n3: JZ 2 6\n4: DEC 2\n5: JZ 1 3\n6: HALT\n",
}
RUNNING = {
    "spin": "1: INC 1\n2: JZ 2 1\n",
    "pump": "1: INC 1\n2: DEC 1\n3: JZ 1 1\n",
}
STEPS = 60


def report(capsys, k: int, ok: bool, detail: str):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    assert ok, detail


def equiv_counter(tmp_path, capsys, name: str, text: str):
    path = tmp_path / f"{name}.txt"
    path.write_text(text)
    t = time.perf_counter()
    code = cli.main(["equiv-counter", str(path), "--steps", str(STEPS)])
    out = json.loads(capsys.readouterr().out)
    return code, out, time.perf_counter() - t


def test_counter_machine_equivalence(tmp_path, capsys):
    bad, worst = [], 0.0
    for name, text in {**HALTING, **RUNNING}.items():
        code, out, secs = equiv_counter(tmp_path, capsys, name, text)
        worst = max(worst, secs)
        halts = name in HALTING
        if code != 0 or out["verdict"] != "agree" or out["halted"] != halts or out["reached"] != halts or secs > 60:
            bad.append((name, code, out, round(secs, 1)))
    report(capsys, 1, not bad,
           f"{len(HALTING)} halting + {len(RUNNING)} running programs agree, slowest {worst:.1f}s"
           if not bad else f"disagreements {bad}")


def test_gadgets_to_petri_faithful(capsys):
    n = bad = open_ = 0
    for case in small_gadget_systems():
        r = verify_gadgets_to_petri(case.system, case.start, 6 - len(case.system.instances))
        n += 1
        bad += not r.ok
        open_ += not r.exhaustive
    sampled = 0
    for case in sampled_gadget_systems(200, seed=0):
        r = verify_gadgets_to_petri(case.system, case.start, 6 - len(case.system.instances), 20_000)
        sampled += 1
        bad += not r.ok
    report(capsys, 2, bad == 0 and open_ == 0,
           f"{n} exhaustive + {sampled} sampled cases, {bad} counterexamples, {open_} not exhausted")


def test_petri_to_gadgets_faithful(capsys):
    nets = list(small_nets())
    prod = prod_bad = sets = sets_bad = exact = exact_bad = 0
    for net in nets:
        slack = sum(max(0, sum(u) - sum(v)) for u, v in net.rules)
        for s in markings(len(net.dishes), 2):
            system, nmap, cfg = petri_to_gadgets(net, s)
            for d in net.dishes:
                got = robot_reachability(system, cfg, nmap.dish_node[net.index(d)])
                prod += 1
                prod_bad += got != production(net, s, d)
            r = verify_petri_to_gadgets(net, s, 3)
            sets += 1
            sets_bad += not (r.ok and r.exhaustive)
            # targeted reconfiguration: P(V) => G(V+1) => P(V+slack)
            g = with_holding_as_destroyer(system, nmap)
            for tg in markings(len(net.dishes), 2):
                counts = [0] * len(g.classes)
                counts[g.class_of[nmap.control_room]] = 1
                for i, k in enumerate(tg):
                    counts[g.class_of[nmap.dish_node[i]]] += k
                target = Configuration(cfg.states, tuple(counts))
                rec = reconfigure_with_destroyer(g, cfg, target, 3)
                lo = reachable_exact(net, s, tg, 2, 10**6).found
                hi = reachable_exact(net, s, tg, 2 + slack, 10**6).found
                exact += 1
                if (lo and not rec.found) or (rec.found and not hi) or (
                        rec.found and replay_moves(g, cfg, rec.moves) != target):
                    exact_bad += 1
    report(capsys, 3, prod_bad == sets_bad == exact_bad == 0,
           f"{len(nets)} nets: production {prod} checks/{prod_bad} bad, reach sets {sets}/{sets_bad}, "
           f"targeted reconfiguration {exact}/{exact_bad}")


def test_coverability_matches_forward(capsys):
    decided = bad = 0
    for net, start, target in random_nets(300, seed=0):
        fwd = forward_reach(net, start, 8, 200_000)
        hit = any(all(x >= y for x, y in zip(m, target)) for m in fwd.markings)
        if not hit and not fwd.exact:
            continue  # neither a witness nor a closed reach set under the cap
        decided += 1
        bad += coverable(net, start, target) != hit
    report(capsys, 4, decided >= 100 and bad == 0, f"{decided} decisive random nets, {bad} disagreements")


def _games():
    for case in small_gadget_systems(max_locations=6, max_robots=1):
        s = case.system
        if not (s.spawners or s.destroyers) and case.start.robots == 1:
            yield s, GameState(case.start.states, case.start.counts.index(1))
    for case in sampled_gadget_systems(300, seed=1, max_robots=1):
        s = case.system
        if not (s.spawners or s.destroyers) and case.start.robots == 1:
            yield s, GameState(case.start.states, case.start.counts.index(1))
    for inst in g4_corpus():
        system, start, _ = g4_to_gadgets(inst)
        yield system, start
    l2t = locking_2_toggle()
    a = GadgetInstance(l2t, 2, ("a.A", "a.B", "a.C", "a.D"), "a")
    b = GadgetInstance(l2t, 2, ("b.A", "b.B", "b.C", "b.D"), "b")
    corridor = SystemOfGadgets((a, b), (("a.B", "b.A"), ("b.B", "a.C"), ("a.D", "b.C"), ("b.D", "a.A")))
    yield corridor, GameState.initial(corridor, "a.A")


def test_two_player_solver(capsys):
    n = bad = skipped = largest = 0
    for system, start in _games():
        try:
            oracle = negamax_oracle(system, start, budget=10_000)
        except StateSpaceBudgetExceeded:
            skipped += 1
            continue
        sol = solve(system, start)
        n += 1
        largest = max(largest, len(oracle))
        bad += (len(oracle) != len(sol.graph) or fixed_point_violations(sol.graph, sol.labels) != []
                or any(sol.label_of(s) is not v for s, v in oracle.items()))
    toggle = SystemOfGadgets((GadgetInstance(one_toggle(), 1, ("A", "B"), "t"),))
    empty = SystemOfGadgets((), nodes=("x",))
    forced = (solve(toggle, GameState.initial(toggle, "A")).value is GameValue.WIN
              and solve(empty, GameState.initial(empty, "x")).value is GameValue.LOSE)
    report(capsys, 5, bad == 0 and forced and n > 0,
           f"{n} games (largest {largest} states, {skipped} over budget), {bad} disagreements, "
           f"1-toggle WIN and empty LOSE: {forced}")


def test_g4_reduction(capsys):
    t = time.perf_counter()
    n = bad = 0
    for inst in g4_corpus(2, 2, 2):
        system, start, _ = g4_to_gadgets(inst)
        n += 1
        bad += solve(system, start).value is not g4_solve(inst)
    secs = time.perf_counter() - t
    report(capsys, 6, bad == 0 and secs <= 300, f"{n} instances, {bad} mismatches, {secs:.1f}s")


def test_simulation_constraints(capsys):
    cert = l2t_certificate()
    l2t = verify_box(build_l2t_sim(locking_2_toggle(), cert), expected_length=9)
    directed = verify_box(build_directed_tunnel_sim(locking_2_toggle(), cert), expected_length=2)
    ok = (l2t.ok and l2t.crossing_lengths() == {9} and all(k % 2 == 0 for k in l2t.stall_lengths())
          and directed.ok and directed.crossing_lengths() == {2})
    report(capsys, 7, ok, f"L2T crossings {sorted(l2t.crossing_lengths())}, stalls {sorted(l2t.stall_lengths())}; "
                          f"directed crossings {sorted(directed.crossing_lengths())}")


def test_reconfiguration_bound(capsys):
    searches = found = bad = 0
    for case in small_gadget_systems(max_locations=4, max_robots=2):
        s = case.system
        if s.destroyers:
            continue
        reach = brute_reach_set(s, case.start, case.start.robots + 1, 5_000).configs
        for target in sorted(reach, key=lambda c: (c.states, c.counts)):
            r = reconfigure_no_destroyer(s, case.start, target)
            searches += 1
            if r.stats["max_total"] > target.robots:
                bad += 1
            if r.found:
                found += 1
                bad += replay_moves(s, case.start, r.moves) != target
            else:
                bad += 1  # every target here is reachable
    report(capsys, 8, bad == 0, f"{searches} searches, {found} witnesses replayed, {bad} violations")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
