"""Staged phase estimation with a k-qubit workspace.

An n-bit eigenphase is recovered in ceil(n/k) stages.  Stage j kicks the
phases 2^l phi (l from ``stage_exponents``) onto freshly prepared qubits,
subtracts the already-known tail F[j-1] via one rotation per qubit, applies
the recursive inverse QFT to measure k new bits, and folds them into the
feedback register:

    F[j] = f(c1...ck) + F[j-1] / 2^k.

Stage 1 recovers the least significant block, so the assembled bit string
is the stage blocks concatenated in reverse order of recovery, and F[last]
is exactly the n-bit phase estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .backends import make_state
from .errors import ConfigurationError
from .phases import (
    BinaryPhase,
    BitString,
    ClassicalAccumulator,
    PhaseLike,
    fraction_from_bits,
    phase_is_zero,
)
from .qft import rf_dagger, rotation_count
from .rng import Rng
from .tally import GateTally


def stage_count(n: int, k: int) -> int:
    """ceil(n/k) stages."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return -(-n // k)


def block_size(j: int, n: int, k: int) -> int:
    """Number of bits stage j recovers (k, except a short final stage)."""
    s = stage_count(n, k)
    if not 1 <= j <= s:
        raise ValueError(f"stage {j} out of range 1..{s}")
    if j < s:
        return k
    return n - (s - 1) * k


def stage_exponents(j: int, n: int, k: int) -> list[int]:
    """Oracle powers for stage j, one per workspace qubit in order.

    Qubit t (1-based) is kicked by 2^l phi with l = base + t - 1, where
    base = n - (j-1)k - k'_j; stage 1 therefore gets the largest powers
    and the final stage ends at l = 0.
    """
    kb = block_size(j, n, k)
    base = n - (j - 1) * k - kb
    return [base + t for t in range(kb)]


def reset_angles(f_prev: BinaryPhase, k_block: int) -> list[BinaryPhase]:
    """Per-qubit correction angles F[j-1] / 2^(k'-t+1) for stage j >= 2.

    Subtracting these clears the already-recovered tail from each qubit's
    phase, leaving exactly the bits this stage must measure.
    """
    if k_block < 1:
        raise ValueError("k_block must be positive")
    return [f_prev.div_pow2(k_block - t + 1) for t in range(1, k_block + 1)]


@dataclass(frozen=True)
class StagedConfig:
    """Run parameters for one staged estimation."""

    n: int
    k: int
    backend: str = "product"
    seed: int = 0
    paper_cost_mode: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.backend not in ("product", "statevector"):
            raise ConfigurationError(f"unknown backend {self.backend!r}")

    @property
    def k_effective(self) -> int:
        return min(self.k, self.n)

    @property
    def stages(self) -> int:
        return stage_count(self.n, self.k_effective)


@dataclass
class EstimateReport:
    """Outcome of one staged run."""

    n: int
    k: int
    k_effective: int
    backend: str
    bits: BitString
    phase: BinaryPhase
    f_trace: tuple[BinaryPhase, ...]
    tally: GateTally
    stage_count: int
    seed: Optional[int]
    deterministic: bool


def run_stage_loop(
    state,
    n: int,
    k: int,
    kick: Callable[[object, int, int], None],
    source,
    paper_cost_mode: bool = True,
    probe: Optional[Callable[[int, object], None]] = None,
) -> tuple[BitString, ClassicalAccumulator]:
    """Drive the full stage schedule on an existing state.

    ``kick(state, qubit, l)`` applies the controlled oracle power 2^l to
    the given workspace qubit; everything else (preparation, resets,
    inverse QFT, feedback accumulation) is common to all oracles.
    ``probe(j, state)`` is called after stage j's reset rotations, before
    its inverse QFT.  Stage 1 has no reset rotations (F[0] = 0); in paper
    cost mode every later reset rotation is applied even when its angle
    is zero, so tallies stay input-independent.
    """
    s = stage_count(n, k)
    acc = ClassicalAccumulator()
    skip_zero = not paper_cost_mode
    blocks: list[BitString] = []
    for j in range(1, s + 1):
        kb = block_size(j, n, k)
        exps = stage_exponents(j, n, k)
        for q in range(kb):
            state.prepare_plus(q)
        for q in range(kb):
            kick(state, q, exps[q])
        if j >= 2:
            for q, angle in enumerate(reset_angles(acc.current, kb)):
                if skip_zero and phase_is_zero(angle):
                    continue
                state.inverse_rotation(q, angle, kind="reset")
        if probe is not None:
            probe(j, state)
        bits = rf_dagger(state, range(kb), source, skip_zero_rotations=skip_zero)
        acc.advance(bits, kb)
        for q in range(kb):
            state.reset(q)
        state.tally.stages += 1
        blocks.append(bits)
    assembled = blocks[-1]
    for earlier in reversed(blocks[:-1]):
        assembled = assembled + earlier
    return assembled, acc


def run_staged(
    phi: PhaseLike,
    config: StagedConfig,
    source=None,
    probe: Optional[Callable[[int, object], None]] = None,
) -> EstimateReport:
    """Estimate the n-bit expansion of phi with a k-qubit workspace.

    ``phi`` may be a BinaryPhase (exact; the run is then deterministic
    whenever phi fits in n bits) or a float in [0, 1).  ``source``
    overrides the seeded randomness, e.g. for transcript enumeration.
    """
    if not isinstance(phi, BinaryPhase):
        phi = float(phi)
        if not 0.0 <= phi < 1.0:
            raise ValueError("phase must lie in [0, 1)")
    tally = GateTally()
    state = make_state(config.backend, config.k_effective, tally)
    used_seed: Optional[int] = None
    if source is None:
        source = Rng(config.seed)
        used_seed = config.seed
    bits, acc = run_stage_loop(
        state,
        config.n,
        config.k_effective,
        lambda st, q, l: st.kickback(q, phi, l),
        source,
        paper_cost_mode=config.paper_cost_mode,
        probe=probe,
    )
    return EstimateReport(
        n=config.n,
        k=config.k,
        k_effective=config.k_effective,
        backend=config.backend,
        bits=bits,
        phase=fraction_from_bits(bits),
        f_trace=tuple(acc.history),
        tally=tally,
        stage_count=config.stages,
        seed=used_seed,
        deterministic=state.nondeterministic_measurements == 0,
    )


@dataclass(frozen=True)
class StagedCost:
    """Predicted rotation budget of a staged run (paper cost mode)."""

    n: int
    k: int
    stages: int
    qft_rotations: int
    reset_rotations: int
    total: int
    paper_approx: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "stages": self.stages,
            "qft_rotations": self.qft_rotations,
            "reset_rotations": self.reset_rotations,
            "total": self.total,
            "paper_approx": self.paper_approx,
        }


def staged_cost(n: int, k: int) -> StagedCost:
    """Exact rotation counts for an (n, k) staged run, plus the k log k
    approximation they are usually quoted as.

    The exact total is sum_j T(k'_j) for the per-stage inverse QFTs plus
    k'_j reset rotations for every stage after the first; with k | n this
    collapses to T(k) + (ceil(n/k) - 1)(k + T(k)).  The approximation
    replaces T(k) by k log2 k.
    """
    k_eff = min(k, max(n, 1))
    s = stage_count(n, k_eff)
    last = block_size(s, n, k_eff)
    qft = (s - 1) * rotation_count(k_eff) + rotation_count(last)
    resets = (s - 2) * k_eff + last if s >= 2 else 0
    logk = math.log2(k_eff)
    if k_eff & (k_eff - 1) == 0:
        logk = k_eff.bit_length() - 1
    approx = k_eff * logk + (s - 1) * (k_eff + k_eff * logk)
    return StagedCost(
        n=n,
        k=k,
        stages=s,
        qft_rotations=qft,
        reset_rotations=resets,
        total=qft + resets,
        paper_approx=approx,
    )
