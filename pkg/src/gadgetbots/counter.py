"""Three-counter machines: an interpreter and a compiler to 0-player gadget systems.

The compiled system has one spawner, one US switch, one increment gadget,
three register gadgets and one UPDSDS gadget per instruction. The first
spawned robot becomes the executor; every later robot queues at the
increment gadget's lock branch, ready to be released into a register.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import GadgetError, GadgetInstance, SystemOfGadgets
from .library import increment_gadget, register_gadget, updsds, us_switch
from .zero_player import WorldState, reach_within

REGISTERS = (1, 2, 3)
# Rounds per interpreted step are O(program length); this constant was
# calibrated once against the acceptance programs and then frozen.
ROUND_BUDGET_FACTOR = 2


class NegativeRegister(GadgetError):
    pass


class UnsupportedProgram(GadgetError):
    pass


class ProgramParseError(GadgetError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Instruction:
    op: str  # INC | DEC | JZ | HALT
    reg: int | None = None
    target: int | None = None

    def __str__(self):
        if self.op == "HALT":
            return "HALT"
        if self.op == "JZ":
            return f"JZ {self.reg} {self.target}"
        return f"{self.op} {self.reg}"


def INC(r):
    return Instruction("INC", r)


def DEC(r):
    return Instruction("DEC", r)


def JZ(r, z):
    return Instruction("JZ", r, z)


HALT = Instruction("HALT")


@dataclass(frozen=True)
class CounterProgram:
    instructions: tuple

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))

    def __len__(self):
        return len(self.instructions)

    def problems(self) -> list[str]:
        out = []
        if not self.instructions:
            out.append("program has no instructions")
        for i, ins in enumerate(self.instructions, 1):
            if ins.op not in ("INC", "DEC", "JZ", "HALT"):
                out.append(f"instruction {i}: unknown op {ins.op!r}")
                continue
            if ins.op != "HALT" and ins.reg not in REGISTERS:
                out.append(f"instruction {i}: register {ins.reg!r} not in 1..3")
            if ins.op == "JZ" and not (isinstance(ins.target, int) and 1 <= ins.target <= len(self.instructions)):
                out.append(f"instruction {i}: jump target {ins.target!r} out of range")
        return out

    def warnings(self) -> list[str]:
        """DEC instructions not directly preceded by a JZ on the same register."""
        out = []
        for i, ins in enumerate(self.instructions, 1):
            prev = self.instructions[i - 2] if i > 1 else None
            if ins.op == "DEC" and not (prev is not None and prev.op == "JZ" and prev.reg == ins.reg):
                out.append(f"instruction {i}: DEC {ins.reg} is not guarded by a JZ on register {ins.reg}")
        return out

    def to_text(self) -> str:
        return "".join(f"{i}: {ins}\n" for i, ins in enumerate(self.instructions, 1))


_LINE = re.compile(r"^\s*(\d+)\s*:\s*(INC|DEC|JZ|HALT)\b\s*(.*?)\s*$", re.IGNORECASE)


def parse_program(text: str) -> CounterProgram:
    """Parse ``i: INC r`` / ``i: DEC r`` / ``i: JZ r z`` / ``i: HALT`` lines."""
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ProgramParseError(lineno, f"cannot parse {raw!r}")
        idx, op, rest = int(m.group(1)), m.group(2).upper(), m.group(3).split()
        if idx != len(instructions) + 1:
            raise ProgramParseError(lineno, f"expected instruction {len(instructions) + 1}, found {idx}")
        want = {"INC": 1, "DEC": 1, "JZ": 2, "HALT": 0}[op]
        if len(rest) != want or not all(x.isdigit() for x in rest):
            raise ProgramParseError(lineno, f"{op} takes {want} integer argument(s)")
        args = [int(x) for x in rest]
        instructions.append(Instruction(op, *args))
    prog = CounterProgram(instructions)
    if prog.problems():
        raise ProgramParseError(0, "; ".join(prog.problems()))
    return prog


@dataclass(frozen=True)
class MachineState:
    pc: int
    registers: tuple = (0, 0, 0)
    halted: bool = False


@dataclass(frozen=True)
class RunResult:
    halted: bool
    steps: int
    state: MachineState
    boundaries: tuple = ()  # (pc, registers) before each executed instruction


def interpret(program: CounterProgram, max_steps: int, record: bool = False) -> RunResult:
    """Small-step execution; HALT counts as a step."""
    if program.problems():
        raise UnsupportedProgram("; ".join(program.problems()))
    pc, regs = 1, [0, 0, 0]
    trail = []
    for step in range(1, max_steps + 1):
        ins = program.instructions[pc - 1]
        if record:
            trail.append((pc, tuple(regs)))
        if ins.op == "HALT":
            return RunResult(True, step, MachineState(pc, tuple(regs), True), tuple(trail))
        r = ins.reg - 1
        if ins.op == "INC":
            regs[r] += 1
            pc += 1
        elif ins.op == "DEC":
            if regs[r] == 0:
                raise NegativeRegister(f"DEC {ins.reg} at instruction {pc} with register 0")
            regs[r] -= 1
            pc += 1
        else:
            pc = ins.target if regs[r] == 0 else pc + 1
        if pc > len(program):
            # falling off the end: the executor walks into a dead end
            return RunResult(False, step, MachineState(pc, tuple(regs)), tuple(trail))
    return RunResult(False, max_steps, MachineState(pc, tuple(regs)), tuple(trail))


@dataclass(frozen=True)
class CompiledMachine:
    system: SystemOfGadgets
    win: str
    spawner: str
    instruction_gadgets: tuple  # instance index of each instruction's UPDSDS
    register_gadgets: tuple  # instance index of registers 1..3
    increment_gadget: int
    us_gadget: int

    def initial_world(self) -> WorldState:
        return WorldState.initial(self.system)

    def register_values(self, world: WorldState) -> tuple:
        """Robots queued at each register's processing entrance."""
        out = []
        for r in REGISTERS:
            node = self.system.instances[self.register_gadgets[r - 1]].global_of["proc_in"]
            out.append(sum(1 for x in world.robots if x == node))
        return tuple(out)


def compile_program(program: CounterProgram) -> CompiledMachine:
    if program.problems():
        raise UnsupportedProgram("; ".join(program.problems()))
    instances, edges = [], []

    def add(gtype, state, prefix):
        inst = GadgetInstance(gtype, state, tuple(f"{prefix}.{loc}" for loc in gtype.locations), prefix)
        instances.append(inst)
        return len(instances) - 1, inst.global_of

    spawn, win, sink = "spawn", "win", "sink"
    us_i, us = add(us_switch(), "down", "us")
    inc_i, inc = add(increment_gadget(), 0, "inc")
    regs = [add(register_gadget(), "O", f"reg{r}") for r in REGISTERS]
    ins_g = [add(updsds(), "down", f"ins{k}") for k in range(1, len(program) + 1)]

    edges.append((spawn, us["I"]))
    edges.append((us["O_up"], inc["lock_in"]))
    edges.append((us["O_down"], ins_g[0][1]["T_in"]))
    pass_head, jump_head = ins_g[0][1]["S1_in"], ins_g[0][1]["S2_in"]
    for r, (_, g) in zip(REGISTERS, regs):
        edges.append((inc[f"lock_out_{r}"], g["proc_in"]))
        edges.append((inc[f"sel_out_{r}"], pass_head))
        edges.append((g["dec_out"], pass_head))
        edges.append((g["jz_out"], g["resp_in"]))
        edges.append((g["proc_top_out"], g["proc_in"]))
        edges.append((g["proc_sink_out"], sink))
        edges.append((g["resp_top_out"], pass_head))
        edges.append((g["resp_bot_out"], jump_head))
    for k, ins in enumerate(program.instructions):
        g = ins_g[k][1]
        if ins.op == "INC":
            edges.append((g["T_out"], inc[f"sel_in_{ins.reg}"]))
        elif ins.op == "DEC":
            edges.append((g["T_out"], regs[ins.reg - 1][1]["dec_in"]))
        elif ins.op == "JZ":
            edges.append((g["T_out"], regs[ins.reg - 1][1]["jz_in"]))
            edges.append((g["S2_up"], ins_g[ins.target - 1][1]["T_in"]))
        else:
            edges.append((g["T_out"], win))
        if k + 1 < len(program):
            nxt = ins_g[k + 1][1]
            edges.append((g["S1_up"], nxt["T_in"]))
            edges.append((g["S1_down"], nxt["S1_in"]))
            edges.append((g["S2_down"], nxt["S2_in"]))
    system = SystemOfGadgets(tuple(instances), tuple(edges), spawners=(spawn,), nodes=(spawn, win, sink),
                             directed=True)
    return CompiledMachine(
        system, win, spawn,
        tuple(i for i, _ in ins_g), tuple(i for i, _ in regs), inc_i, us_i,
    )


def round_budget(program: CounterProgram, step_budget: int) -> int:
    return ROUND_BUDGET_FACTOR * (step_budget + 4) * (len(program) + 4)


@dataclass(frozen=True)
class EquivalenceReport:
    agree: bool
    halted: bool
    steps: int
    reached: bool
    win_round: int | None
    round_budget: int

    @property
    def verdict(self) -> str:
        return "agree" if self.agree else "disagree"


def equivalence_check(program: CounterProgram, step_budget: int) -> EquivalenceReport:
    """Run the interpreter and the compiled system side by side.

    Non-halting programs can only be reported as "no win within budget".
    """
    run = interpret(program, step_budget)
    machine = compile_program(program)
    budget = round_budget(program, step_budget)
    res = reach_within(machine.system, machine.initial_world(), machine.win, budget)
    return EquivalenceReport(run.halted == res.reached, run.halted, run.steps, res.reached, res.round, budget)
