"""Recursive semiclassical inverse QFT and rotation-count arithmetic.

The inverse QFT on m qubits is evaluated measurement-first: the last
ceil(m/2) qubits are transformed and read out recursively, the measured
bits drive one classically controlled rotation on each remaining qubit,
and the first floor(m/2) qubits are then transformed recursively in turn.
The single-qubit base case is a Hadamard plus measurement.

Counting rotations with the base-case Hadamard as unit cost gives

    T(1) = 1,   T(m) = T(ceil(m/2)) + T(floor(m/2)) + floor(m/2),

with closed form T(m) = m + (m/2) log2(m) when m is a power of two.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .phases import BitString, fraction_from_bits, phase_is_zero
from .tally import GateTally


def apply_feedback_rotations(
    state,
    remaining: Sequence[int],
    measured: BitString,
    skip_zero_rotations: bool = False,
) -> None:
    """Rotate each remaining qubit by -f(measured) / 2^(m_first - j + 1).

    ``remaining`` are the not-yet-measured qubits, most significant first;
    j is the 1-based position within them.  After these rotations every
    remaining qubit's phase has the measured block's contribution cleared.
    """
    f = fraction_from_bits(measured)
    m_first = len(remaining)
    for j0, q in enumerate(remaining):
        angle = f.div_pow2(m_first - j0)
        if skip_zero_rotations and phase_is_zero(angle):
            continue
        state.inverse_rotation(q, angle, kind="qft")


def rf_dagger(
    state,
    qubits: Sequence[int],
    source,
    skip_zero_rotations: bool = False,
) -> BitString:
    """Measure out ``qubits`` under the recursive inverse QFT.

    Returns the measured bits in qubit order (most significant first).
    In the default counting mode zero-angle feedback rotations are applied
    and tallied like any other; ``skip_zero_rotations`` elides them, which
    changes tallies but never outcomes.
    """
    qubits = list(qubits)
    m = len(qubits)
    if m == 0:
        raise ValueError("rf_dagger needs at least one qubit")
    if m == 1:
        bit = state.hadamard_measure(qubits[0], source)
        state.tally.qft_hadamards += 1
        return BitString((bit,))
    m_first = m // 2
    bits_last = rf_dagger(state, qubits[m_first:], source, skip_zero_rotations)
    apply_feedback_rotations(state, qubits[:m_first], bits_last, skip_zero_rotations)
    bits_first = rf_dagger(state, qubits[:m_first], source, skip_zero_rotations)
    return bits_first + bits_last


@lru_cache(maxsize=None)
def rotation_count(m: int) -> int:
    """T(m) by the recurrence; valid for every m >= 1."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 1
    first = m // 2
    last = m - first
    return rotation_count(last) + rotation_count(first) + first


def closed_form_T(m: int) -> int:
    """m + (m/2) log2(m), defined only at powers of two."""
    if m < 1 or m & (m - 1):
        raise ValueError(
            f"closed form requires a power of two, got {m}; "
            "use rotation_count() for general m"
        )
    return m + (m // 2) * (m.bit_length() - 1)


def conventional_counts(n: int) -> GateTally:
    """Gate tally of the textbook semiclassical inverse QFT on n qubits.

    Every measured bit conditions one rotation on each later qubit:
    n(n-1)/2 rotations, n Hadamards, n measurements.  Hadamards are kept
    out of the rotation column, matching how these circuits are usually
    quoted.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return GateTally(
        hadamards=n,
        qft_rotations=n * (n - 1) // 2,
        measurements=n,
    )
