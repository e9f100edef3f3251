"""Two players share one robot and may not undo each other's last gadget.

    python3 demos/ko_games.py
"""

from __future__ import annotations

from gadgetbots.boxes import build_l2t_sim, l2t_certificate, verify_box
from gadgetbots.core import GadgetInstance, SystemOfGadgets
from gadgetbots.g4 import G4Instance, Var, g4_solve, g4_to_gadgets
from gadgetbots.library import locking_2_toggle, one_toggle
from gadgetbots.two_player import GameState, negamax_oracle, solve

# three 1-toggles around a hub: each move burns one, the ko rule forbids reuse
t = one_toggle()
hub = SystemOfGadgets(
    tuple(GadgetInstance(t, 1, (f"t{i}.A", f"t{i}.B"), f"t{i}") for i in range(3)),
    tuple((f"t{i}.A", "hub") for i in range(3)), nodes=("hub",))
sol = solve(hub, GameState.initial(hub, "hub"))
print(f"hub of three toggles: {sol.value} in {len(sol.graph)} states")
oracle = negamax_oracle(hub, GameState.initial(hub, "hub"))
print("negamax oracle agrees:", all(sol.label_of(s) is v for s, v in oracle.items()))

# player 1 can flip x to satisfy (x and not y) before player 2 reacts
inst = G4Instance((Var("x", 1), Var("y", 2)), ((("x", True), ("y", False)),), 2)
system, start, gmap = g4_to_gadgets(inst)
print(f"G4 value {g4_solve(inst)}; gadget game value {solve(system, start).value} "
      f"on {gmap.size['instances']} gadgets")

# a locking 2-toggle built from nine-step corridors of locking 2-toggles
rep = verify_box(build_l2t_sim(locking_2_toggle(), l2t_certificate()), expected_length=9)
print(f"simulation box ok={rep.ok}: crossings {sorted(rep.crossing_lengths())}, "
      f"stalls {sorted(rep.stall_lengths())}, {rep.box_states} box states")
