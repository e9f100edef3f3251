"""Petri nets both ways: a net becomes a door system and back again.

    python3 demos/petri_doors.py
"""

from __future__ import annotations

from gadgetbots.one_player import robot_reachability
from gadgetbots.petri import PetriNet, backward_basis, coverable, production, reachable_exact
from gadgetbots.translate import gadgets_to_petri, petri_to_gadgets, verify_petri_to_gadgets

# two tokens in a make one in b; one in b makes one in c
net = PetriNet(("a", "b", "c"), (((2, 0, 0), (0, 1, 0)), ((0, 1, 0), (0, 0, 1))))
start = (3, 0, 0)

print("cover c:", coverable(net, start, (0, 0, 1)))
print("cover 2c:", coverable(net, start, (0, 0, 2)), "(three tokens only pay for one firing of rule 0)")
basis, history = backward_basis(net, (0, 0, 1))
print("minimal markings that cover c:", basis, f"after {len(history)} rounds")
ex = reachable_exact(net, start, (1, 0, 1), 3, 10_000)
print("exact (1,0,1):", ex.found, "via rules", ex.path)

system, nmap, config = petri_to_gadgets(net, start)
print(f"door system: {nmap.door_count()} doors, {len(system.classes)} location classes")
for d in net.dishes:
    dish = nmap.dish_node[net.index(d)]
    print(f"  robot reaches {dish}: {robot_reachability(system, config, dish)}, "
          f"production of {d}: {production(net, start, d)}")

rep = verify_petri_to_gadgets(net, start, 3)
print(f"reach sets agree up to volume 3: {rep.ok} ({rep.net_side} markings)")

back, gmap = gadgets_to_petri(system)
print(f"translated back: {len(back.dishes)} dishes, {len(back.rules)} rules")
