"""Dense statevector backend with an optional modular work register.

Basis states are indexed ``(w << modular_bits) | y`` where ``w`` reads the
workspace qubits most-significant-first (workspace qubit 0 is the top bit)
and ``y`` is the modular register value.  Mid-circuit measurement collapses
and renormalizes; reset applies a classically controlled X, so workspace
qubits can be recycled across stages while staying entangled with the
modular register in between.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigurationError, ContractViolation, ResourceLimitError
from ..phases import PhaseLike, shift_mod1
from ..tally import GateTally
from .product import QubitStatus

MAX_DENSE_QUBITS = 22

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_DETERMINISTIC_TOL = 1e-12


class StateVectorState:
    """Amplitudes over ``workspace_qubits + modular_bits`` qubits."""

    backend_name = "statevector"

    def __init__(
        self,
        workspace_qubits: int,
        modular_bits: int = 0,
        modular_init: int = 0,
        tally: GateTally | None = None,
    ):
        if workspace_qubits < 1:
            raise ValueError("need at least one workspace qubit")
        if modular_bits < 0:
            raise ValueError("modular_bits must be non-negative")
        total = workspace_qubits + modular_bits
        if total > MAX_DENSE_QUBITS:
            raise ResourceLimitError(
                f"{total} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}"
            )
        if not 0 <= modular_init < (1 << modular_bits) or (
            modular_bits == 0 and modular_init != 0
        ):
            raise ValueError("modular_init out of range")
        self.num_qubits = workspace_qubits
        self.modular_bits = modular_bits
        self.total_qubits = total
        self.tally = tally if tally is not None else GateTally()
        self._amps = np.zeros(1 << total, dtype=np.complex128)
        self._amps[modular_init] = 1.0
        self._status = [QubitStatus.FRESH] * workspace_qubits
        self._outcome: list[int | None] = [None] * workspace_qubits
        self._index = np.arange(1 << total)
        self.nondeterministic_measurements = 0

    @property
    def supports_modular(self) -> bool:
        return self.modular_bits > 0

    # -- helpers ---------------------------------------------------------------

    def _require(self, q: int, status: QubitStatus, op: str) -> None:
        if not 0 <= q < self.num_qubits:
            raise IndexError(f"qubit {q} out of range")
        if self._status[q] is not status:
            raise ContractViolation(
                f"{op} needs qubit {q} {status.value}, found {self._status[q].value}"
            )

    def _bitpos(self, q: int) -> int:
        return self.total_qubits - 1 - q

    def _branches(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        mask = (self._index >> self._bitpos(q)) & 1
        return self._amps[mask == 0], self._amps[mask == 1]

    def _branch_masks(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        bit = (self._index >> self._bitpos(q)) & 1
        return bit == 0, bit == 1

    def status(self, q: int) -> QubitStatus:
        return self._status[q]

    def outcome(self, q: int) -> int:
        self._require(q, QubitStatus.MEASURED, "outcome")
        return self._outcome[q]

    def amplitudes(self) -> np.ndarray:
        return self._amps.copy()

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self._amps) ** 2)))

    def reduced_density_matrix(self, keep: list[int]) -> np.ndarray:
        """Density matrix of the given qubit axes (workspace first, then
        modular bits), tracing everything else out."""
        psi = self._amps.reshape([2] * self.total_qubits)
        drop = [a for a in range(self.total_qubits) if a not in keep]
        rho = np.tensordot(psi, psi.conj(), axes=(drop, drop))
        dim = 1 << len(keep)
        return rho.reshape(dim, dim)

    # -- gates -------------------------------------------------------------------

    def prepare_plus(self, q: int) -> None:
        self._require(q, QubitStatus.FRESH, "prepare_plus")
        self._hadamard(q)
        self._status[q] = QubitStatus.PREPARED
        self.tally.hadamards += 1

    def _hadamard(self, q: int) -> None:
        m0, m1 = self._branch_masks(q)
        a0 = self._amps[m0]
        a1 = self._amps[m1]
        self._amps[m0] = (a0 + a1) * _SQRT_HALF
        self._amps[m1] = (a0 - a1) * _SQRT_HALF

    def _phase(self, q: int, turns: float) -> None:
        _, m1 = self._branch_masks(q)
        self._amps[m1] *= np.exp(2j * np.pi * turns)

    def kickback(self, q: int, phi: PhaseLike, l: int) -> None:
        """Phase-oracle controlled-U^(2^l): e^(2 pi i 2^l phi) on |1>_q."""
        self._require(q, QubitStatus.PREPARED, "kickback")
        self._phase(q, float(shift_mod1(phi, l)))
        self.tally.controlled_u += 1
        self.tally.u_applications += 1 << l

    def inverse_rotation(self, q: int, angle: PhaseLike, kind: str = "reset") -> None:
        self._require(q, QubitStatus.PREPARED, "inverse_rotation")
        self._phase(q, -float(angle))
        if kind == "qft":
            self.tally.qft_rotations += 1
        elif kind == "reset":
            self.tally.reset_rotations += 1
        else:
            raise ValueError(f"unknown rotation kind {kind!r}")

    def controlled_modular_multiply(
        self, q: int, a: int, modulus: int, u_count: int = 1
    ) -> None:
        """|y> -> |a y mod modulus> on the modular register when qubit q is 1.

        States with y >= modulus are left alone, keeping the map unitary.
        ``u_count`` is how many oracle applications this controlled power
        stands for (2^l for a squared-multiplier ladder).
        """
        if not self.supports_modular:
            raise ConfigurationError("state has no modular register")
        self._require(q, QubitStatus.PREPARED, "controlled_modular_multiply")
        if modulus < 2 or modulus > (1 << self.modular_bits):
            raise ValueError("modulus does not fit the modular register")
        if math.gcd(a, modulus) != 1:
            raise ValueError(f"multiplier {a} shares a factor with {modulus}")
        y = self._index & ((1 << self.modular_bits) - 1)
        ctrl = (self._index >> self._bitpos(q)) & 1
        move = (ctrl == 1) & (y < modulus)
        new_y = np.where(move, (a % modulus) * y % modulus, y)
        target = (self._index & ~((1 << self.modular_bits) - 1)) | new_y
        new_amps = np.zeros_like(self._amps)
        new_amps[target] = self._amps
        self._amps = new_amps
        self.tally.controlled_u += 1
        self.tally.u_applications += u_count

    def prob_one(self, q: int) -> float:
        self._require(q, QubitStatus.PREPARED, "prob_one")
        _, m1 = self._branch_masks(q)
        # measurement in the X-eigenbasis picture: H first, then read out
        a0 = self._amps[~m1]
        a1 = self._amps[m1]
        p1 = float(np.sum(np.abs((a0 - a1) * _SQRT_HALF) ** 2))
        return min(max(p1, 0.0), 1.0)

    def hadamard_measure(self, q: int, source) -> int:
        """H then measure qubit q, collapsing and renormalizing."""
        self._require(q, QubitStatus.PREPARED, "hadamard_measure")
        self._hadamard(q)
        m0, m1 = self._branch_masks(q)
        p1 = float(np.sum(np.abs(self._amps[m1]) ** 2))
        p1 = min(max(p1, 0.0), 1.0)
        bit = source.draw(p1)
        if _DETERMINISTIC_TOL < p1 < 1.0 - _DETERMINISTIC_TOL:
            self.nondeterministic_measurements += 1
        dead = m0 if bit else m1
        self._amps[dead] = 0.0
        kept = float(np.sqrt(np.sum(np.abs(self._amps) ** 2)))
        self._amps /= kept
        self._status[q] = QubitStatus.MEASURED
        self._outcome[q] = bit
        self.tally.hadamards += 1
        self.tally.measurements += 1
        return bit

    def reset(self, q: int) -> None:
        """Classically controlled X returning a measured qubit to |0>."""
        self._require(q, QubitStatus.MEASURED, "reset")
        if self._outcome[q] == 1:
            m0, m1 = self._branch_masks(q)
            a0 = self._amps[m0].copy()
            self._amps[m0] = self._amps[m1]
            self._amps[m1] = a0
        self._status[q] = QubitStatus.FRESH
        self._outcome[q] = None
