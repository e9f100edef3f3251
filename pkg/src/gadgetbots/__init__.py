"""Motion planning through gadgets with many robots.

Core model, 0-player round-robin simulation, counter-machine compilation,
Petri-net bridges for the 1-player problems, and the 2-player ko game.
"""

from .core import (
    Configuration,
    GadgetError,
    GadgetInstance,
    GadgetType,
    IllegalMove,
    Move,
    NondeterministicGadget,
    SystemOfGadgets,
    apply_move,
    is_dag,
    is_deterministic,
    is_k_tunnel,
    is_legal,
    is_reversible,
    legal_moves,
    validate_system,
)
from .library import standard_library
from .petri import PetriNet, apply_rule, coverable, forward_reach, production, reachable_exact

__version__ = "0.1.0"
