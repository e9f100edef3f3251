"""Transition tables for the gadgets used throughout the package."""

from __future__ import annotations

from .core import GadgetType


def one_toggle() -> GadgetType:
    return GadgetType("1-toggle", (1, 2), ("A", "B"), [(1, "A", "B", 2), (2, "B", "A", 1)], (("A", "B"),))


def two_tunnel_toggle() -> GadgetType:
    return GadgetType(
        "2-tunnel toggle",
        (1, 2),
        ("A", "B", "C", "D"),
        [(1, "A", "B", 2), (1, "C", "D", 2), (2, "B", "A", 1), (2, "D", "C", 1)],
        (("A", "B"), ("C", "D")),
    )


def locking_2_toggle() -> GadgetType:
    # state 2 is the nonleaf state: both tunnels open, crossing one locks the other
    return GadgetType(
        "locking 2-toggle",
        (1, 2, 3),
        ("A", "B", "C", "D"),
        [(2, "A", "B", 1), (2, "C", "D", 3), (1, "B", "A", 2), (3, "D", "C", 2)],
        (("A", "B"), ("C", "D")),
    )


def symmetric_self_closing_door() -> GadgetType:
    return GadgetType(
        "symmetric self-closing door",
        (1, 2),
        ("A", "B", "C", "D"),
        [(1, "A", "B", 2), (2, "C", "D", 1)],
        (("A", "B"), ("C", "D")),
    )


def us_switch() -> GadgetType:
    """Set-up switch: the first robot takes the down output, every later one the up output."""
    return GadgetType(
        "US switch",
        ("up", "down"),
        ("I", "O_up", "O_down"),
        [("up", "I", "O_up", "up"), ("down", "I", "O_down", "up")],
    )


def updsds() -> GadgetType:
    """Directed set-up tunnel plus two set-down switches sharing one up/down state."""
    transitions = [(s, "T_in", "T_out", "up") for s in ("up", "down")]
    for k in ("S1", "S2"):
        transitions.append(("up", f"{k}_in", f"{k}_up", "down"))
        transitions.append(("down", f"{k}_in", f"{k}_down", "down"))
    return GadgetType(
        "UPDSDS",
        ("up", "down"),
        ("T_in", "T_out", "S1_in", "S1_up", "S1_down", "S2_in", "S2_up", "S2_down"),
        transitions,
    )


def increment_gadget() -> GadgetType:
    locations = tuple(f"sel_in_{i}" for i in (1, 2, 3)) + tuple(f"sel_out_{i}" for i in (1, 2, 3))
    locations += ("lock_in",) + tuple(f"lock_out_{i}" for i in (1, 2, 3))
    transitions = []
    for i in (1, 2, 3):
        transitions.append((0, f"sel_in_{i}", f"sel_out_{i}", i))
        transitions.append((i, "lock_in", f"lock_out_{i}", 0))
    return GadgetType("increment", (0, 1, 2, 3), locations, transitions)


def register_gadget() -> GadgetType:
    return GadgetType(
        "register",
        ("O", "D", "J"),
        (
            "dec_in", "dec_out", "jz_in", "jz_out",
            "proc_in", "proc_top_out", "proc_sink_out",
            "resp_in", "resp_top_out", "resp_bot_out",
        ),
        [
            ("O", "dec_in", "dec_out", "D"),
            ("O", "jz_in", "jz_out", "J"),
            ("D", "proc_in", "proc_sink_out", "O"),
            ("J", "proc_in", "proc_top_out", "O"),
            ("J", "resp_in", "resp_bot_out", "O"),
            ("O", "resp_in", "resp_top_out", "O"),
        ],
    )


def standard_library() -> dict[str, GadgetType]:
    gadgets = [
        one_toggle(), two_tunnel_toggle(), locking_2_toggle(), symmetric_self_closing_door(),
        us_switch(), updsds(), increment_gadget(), register_gadget(),
    ]
    return {g.name: g for g in gadgets}
