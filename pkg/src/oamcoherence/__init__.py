"""Quantum coherence and entanglement of OAM-multiplexed continuous-variable EPR states."""

from .channel import (
    ChannelParams,
    EprParams,
    apply_channel,
    epr_from_db,
    initial_state,
    sudden_death_threshold,
)
from .gaussian import (
    GaussianState,
    g_entropy,
    is_physical,
    ppt_value,
    relative_entropy_coherence,
    symplectic_eigenvalues,
    thermal_reference,
    two_mode_symplectic_eigenvalues,
    von_neumann_entropy,
)
from .multiplex import MultiplexedState, OamPair, apply_channel_all, build_multiplexed, report

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "EprParams",
    "GaussianState",
    "MultiplexedState",
    "OamPair",
    "apply_channel",
    "apply_channel_all",
    "build_multiplexed",
    "epr_from_db",
    "g_entropy",
    "initial_state",
    "is_physical",
    "ppt_value",
    "relative_entropy_coherence",
    "report",
    "sudden_death_threshold",
    "symplectic_eigenvalues",
    "thermal_reference",
    "two_mode_symplectic_eigenvalues",
    "von_neumann_entropy",
]
