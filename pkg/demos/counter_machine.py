"""Compile a small counter program into a 0-player gadget system and watch it run.

    python3 demos/counter_machine.py
"""

from __future__ import annotations

from gadgetbots.counter import DEC, HALT, INC, JZ, CounterProgram, compile_program, equivalence_check, interpret
from gadgetbots.zero_player import reach_within

program = CounterProgram([INC(1), INC(1), DEC(1), JZ(1, 6), JZ(3, 3), HALT])
print(program.to_text())

run = interpret(program, 100, record=True)
print(f"interpreter: halted={run.halted} after {run.steps} steps")

machine = compile_program(program)
print(f"compiled system: {len(machine.system.instances)} gadgets, "
      f"{len(machine.system.classes)} location classes")

res = reach_within(machine.system, machine.initial_world(), machine.win, 500)
print(f"a robot reaches the win location in round {res.round}")
print(f"robots queued at the registers then: {machine.register_values(res.world)}")

# a loop that never halts: the system never reaches win either
spin = CounterProgram([INC(1), JZ(2, 1)])
rep = equivalence_check(spin, 40)
print(f"spin: halted={rep.halted}, reached={rep.reached} within {rep.round_budget} rounds -> {rep.verdict}")
