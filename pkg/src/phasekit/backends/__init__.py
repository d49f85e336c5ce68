"""Simulation backends sharing one gate-level surface.

``ProductPhaseState`` tracks one relative phase per workspace qubit and is
exact for eigenvector-oracle runs; ``StateVectorState`` holds dense
amplitudes and additionally supports a modular work register for order
finding.  Both mirror the same qubit lifecycle (fresh -> prepared ->
measured -> fresh) and feed the same ``GateTally``.
"""

from __future__ import annotations

from ..errors import ConfigurationError
from ..tally import GateTally
from .product import ProductPhaseState, QubitStatus
from .statevector import MAX_DENSE_QUBITS, StateVectorState

__all__ = [
    "ProductPhaseState",
    "StateVectorState",
    "QubitStatus",
    "MAX_DENSE_QUBITS",
    "make_state",
]


def make_state(backend: str, workspace_qubits: int, tally: GateTally | None = None):
    """Instantiate a phase-estimation state for the named backend."""
    if backend == "product":
        return ProductPhaseState(workspace_qubits, tally=tally)
    if backend == "statevector":
        return StateVectorState(workspace_qubits, tally=tally)
    raise ConfigurationError(f"unknown backend {backend!r}")
