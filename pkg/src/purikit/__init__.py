"""Simulation and analysis of a recurrence entanglement-purification protocol
built on a rank-two Bell-basis projector."""

__version__ = "0.1.0"

from .bell_core import (  # noqa: E402
    XState,
    bell_to_computational,
    computational_to_bell,
    random_density,
    validate_density,
    x_state_eigenvalues,
)
from .errors import DegenerateNormalization, InvalidStateError  # noqa: E402
from .purification_map import MapOutcome, apply_general, apply_x, iterate  # noqa: E402

__all__ = [
    "DegenerateNormalization",
    "InvalidStateError",
    "MapOutcome",
    "XState",
    "apply_general",
    "apply_x",
    "bell_to_computational",
    "computational_to_bell",
    "iterate",
    "random_density",
    "validate_density",
    "x_state_eigenvalues",
]
