"""Product-state backend: one relative phase per workspace qubit.

Under an eigenvector oracle every controlled-U reduces to a phase kick on
its control, so the workspace never entangles and qubit t is fully
described by ``|0> + exp(2 pi i theta_t) |1>`` (unnormalized notation).
With ``BinaryPhase`` inputs the evolution is exact integer arithmetic,
which is what makes the noiseless algorithm's determinism visible: a
measurement is random only if its Pr(1) is strictly between 0 and 1.
"""

from __future__ import annotations

from enum import Enum

from ..errors import ContractViolation
from ..phases import (
    BinaryPhase,
    PhaseLike,
    add_mod1,
    prob_one_after_hadamard,
    shift_mod1,
    sub_mod1,
)
from ..tally import GateTally


class QubitStatus(Enum):
    FRESH = "fresh"
    PREPARED = "prepared"
    MEASURED = "measured"


class ProductPhaseState:
    """Workspace of ``num_qubits`` independently tracked phase qubits."""

    backend_name = "product"
    supports_modular = False

    def __init__(self, num_qubits: int, tally: GateTally | None = None):
        if num_qubits < 1:
            raise ValueError("need at least one qubit")
        self.num_qubits = num_qubits
        self.tally = tally if tally is not None else GateTally()
        self._theta: list[PhaseLike | None] = [None] * num_qubits
        self._status = [QubitStatus.FRESH] * num_qubits
        self._outcome: list[int | None] = [None] * num_qubits
        self.nondeterministic_measurements = 0

    # -- lifecycle helpers ---------------------------------------------------

    def _require(self, q: int, status: QubitStatus, op: str) -> None:
        if not 0 <= q < self.num_qubits:
            raise IndexError(f"qubit {q} out of range")
        if self._status[q] is not status:
            raise ContractViolation(
                f"{op} needs qubit {q} {status.value}, found {self._status[q].value}"
            )

    def status(self, q: int) -> QubitStatus:
        return self._status[q]

    def theta(self, q: int) -> PhaseLike:
        """Current relative phase of a prepared qubit, in turns."""
        self._require(q, QubitStatus.PREPARED, "theta")
        return self._theta[q]

    def outcome(self, q: int) -> int:
        self._require(q, QubitStatus.MEASURED, "outcome")
        return self._outcome[q]

    # -- gates ----------------------------------------------------------------

    def prepare_plus(self, q: int) -> None:
        """H on a fresh |0> qubit: phase 0, ready for kicks."""
        self._require(q, QubitStatus.FRESH, "prepare_plus")
        self._status[q] = QubitStatus.PREPARED
        self._theta[q] = BinaryPhase.zero()
        self.tally.hadamards += 1

    def kickback(self, q: int, phi: PhaseLike, l: int) -> None:
        """Controlled-U^(2^l) against the oracle's eigenvector: theta += 2^l phi."""
        self._require(q, QubitStatus.PREPARED, "kickback")
        self._theta[q] = add_mod1(self._theta[q], shift_mod1(phi, l))
        self.tally.controlled_u += 1
        self.tally.u_applications += 1 << l

    def inverse_rotation(self, q: int, angle: PhaseLike, kind: str = "reset") -> None:
        """Diagonal rotation by -angle turns on the |1> component."""
        self._require(q, QubitStatus.PREPARED, "inverse_rotation")
        self._theta[q] = sub_mod1(self._theta[q], angle)
        if kind == "qft":
            self.tally.qft_rotations += 1
        elif kind == "reset":
            self.tally.reset_rotations += 1
        else:
            raise ValueError(f"unknown rotation kind {kind!r}")

    def prob_one(self, q: int) -> float:
        self._require(q, QubitStatus.PREPARED, "prob_one")
        return prob_one_after_hadamard(self._theta[q])

    def hadamard_measure(self, q: int, source) -> int:
        """H then computational-basis measurement; collapses the qubit."""
        p_one = self.prob_one(q)
        bit = source.draw(p_one)
        if 0.0 < p_one < 1.0:
            self.nondeterministic_measurements += 1
        self._theta[q] = None
        self._status[q] = QubitStatus.MEASURED
        self._outcome[q] = bit
        self.tally.hadamards += 1
        self.tally.measurements += 1
        return bit

    def reset(self, q: int) -> None:
        """Classically controlled X back to |0>; the qubit becomes fresh."""
        self._require(q, QubitStatus.MEASURED, "reset")
        self._status[q] = QubitStatus.FRESH
        self._outcome[q] = None
