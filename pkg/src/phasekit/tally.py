"""Gate and measurement accounting.

A single mutable tally travels with a simulation state; every primitive the
backends execute increments exactly one bucket (plus ``u_applications`` for
the oracle power a controlled-U hides).  Rotations are split by role:
``qft_rotations`` are the feedback rotations inside the recursive inverse
QFT, ``reset_rotations`` the inter-stage corrections.  ``qft_hadamards``
counts the Hadamards belonging to the QFT itself (its single-qubit base
cases), which the closed-form rotation counts include as unit cost.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass
class GateTally:
    hadamards: int = 0
    qft_hadamards: int = 0
    qft_rotations: int = 0
    reset_rotations: int = 0
    controlled_u: int = 0
    u_applications: int = 0
    measurements: int = 0
    stages: int = 0

    def qft_count(self) -> int:
        """Rotation-equivalent cost of the inverse QFTs alone."""
        return self.qft_hadamards + self.qft_rotations

    def rotation_count(self) -> int:
        """QFT cost plus inter-stage reset rotations."""
        return self.qft_hadamards + self.qft_rotations + self.reset_rotations

    def copy(self) -> "GateTally":
        return GateTally(**asdict(self))

    def as_dict(self) -> dict[str, int]:
        d = asdict(self)
        d["qft_count"] = self.qft_count()
        d["rotation_count"] = self.rotation_count()
        return d
