"""State-vector simulation of quantum circuits, with emulation shortcuts.

States are 1-d complex128 numpy arrays, qubit 0 is the least significant bit of the index.
"""

from ._qcemu import *  # noqa: F401,F403
from ._qcemu import (
    Circuit,
    Error,
    Strategy,
    apply_circuit,
    basis_state,
    build_qft,
    emulate_qft,
)

__version__ = "0.1.0"


def simulate_and_emulate_qft(n, state=None):
    """Run the QFT both ways on the same input; returns (simulated, emulated)."""
    if state is None:
        state = basis_state(n, 0)
    return apply_circuit(build_qft(n), state), emulate_qft(state)
