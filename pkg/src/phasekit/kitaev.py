"""Kitaev-style baseline: per-bit phase recovery from Hadamard tests.

For each l the circuit H - controlled-U^(2^(l-1)) - (S^dag) - H - measure
estimates phi_l = 2^(l-1) phi mod 1 through its cosine and sine:

    Pr(0 | plain)    = (1 + cos 2 pi phi_l) / 2
    Pr(1 | K=diag(1,i)) = (1 + sin 2 pi phi_l) / 2

With M trials of each test, phi_l_hat = atan2(S, C) / 2 pi where
C = 2 freq(0 | plain) - 1 and S = 2 freq(1 | K) - 1.  The standard trial
budget M = ceil(55 ln n) makes all n estimates simultaneously reliable
enough to reconstruct the bits from least significant upward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateEstimateError, ReconstructionError
from .phases import BinaryPhase, BitString, PhaseLike, shift_mod1
from .rng import Rng
from .tally import GateTally


def kitaev_trials(n: int) -> int:
    """ceil(55 ln n) trials per Hadamard test; needs n >= 2."""
    if n < 2:
        raise ValueError("trial budget is defined for n >= 2")
    return math.ceil(55.0 * math.log(n))


def cos_sin_2pi(phi: PhaseLike) -> tuple[float, float]:
    """(cos, sin) of 2 pi phi, exact at quarter turns of a dyadic phase."""
    if isinstance(phi, BinaryPhase):
        key = phi._key()
        exact = {
            (0, 0): (1.0, 0.0),
            (1, 1): (-1.0, 0.0),
            (1, 2): (0.0, 1.0),
            (3, 2): (0.0, -1.0),
        }
        if key in exact:
            return exact[key]
        t = float(phi)
    else:
        t = float(phi) % 1.0
    return math.cos(2.0 * math.pi * t), math.sin(2.0 * math.pi * t)


def hadamard_test(
    phi_l: PhaseLike,
    use_k: bool,
    trials: int,
    rng: Rng,
    tally: Optional[GateTally] = None,
    u_power: int = 1,
) -> np.ndarray:
    """Sample ``trials`` outcome bits of one Hadamard test on phi_l.

    ``use_k`` inserts the K = diag(1, i) gate, switching the test from
    cosine to sine.  ``u_power`` is the oracle power behind the single
    controlled-U, counted into ``u_applications``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    c, s = cos_sin_2pi(phi_l)
    p_one = (1.0 + s) / 2.0 if use_k else (1.0 - c) / 2.0
    bits = (rng.random(trials) < p_one).astype(np.uint8)
    if tally is not None:
        tally.hadamards += 2 * trials
        tally.controlled_u += trials
        tally.u_applications += trials * u_power
        tally.measurements += trials
    return bits


def estimate_phi_l(
    phi: PhaseLike,
    l: int,
    trials: int,
    rng: Rng,
    tally: Optional[GateTally] = None,
) -> float:
    """atan2 estimate of phi_l from ``trials`` cosine and sine tests each."""
    if l < 1:
        raise ValueError("l must be positive")
    target = shift_mod1(phi, l - 1)
    power = 1 << (l - 1)
    cos_bits = hadamard_test(target, False, trials, rng, tally, u_power=power)
    sin_bits = hadamard_test(target, True, trials, rng, tally, u_power=power)
    c_hat = 1.0 - 2.0 * float(np.mean(cos_bits))
    s_hat = 2.0 * float(np.mean(sin_bits)) - 1.0
    if c_hat == 0.0 and s_hat == 0.0:
        raise DegenerateEstimateError(
            f"both quadratures vanished at l={l}; no angle information"
        )
    return math.atan2(s_hat, c_hat) / (2.0 * math.pi) % 1.0


def analytic_phi_l(phi: PhaseLike, l: int) -> float:
    """Infinite-trial limit of ``estimate_phi_l``: phi_l itself."""
    if l < 1:
        raise ValueError("l must be positive")
    c, s = cos_sin_2pi(shift_mod1(phi, l - 1))
    return math.atan2(s, c) / (2.0 * math.pi) % 1.0


def _circular_distance(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def reconstruct_bits(estimates: Sequence[float]) -> BitString:
    """Recover phi's bits from per-level estimates (index i holds l = i+1).

    Works from l = n down to 1: given the already-recovered tail
    t = 0.b(l+1)...b(n), the candidates for phi_l are b/2 + t/2, and the
    estimate must land strictly within 1/8 of one of them (ties broken
    toward the smaller candidate).
    """
    n = len(estimates)
    if n == 0:
        raise ValueError("need at least one estimate")
    bits: list[Optional[int]] = [None] * n
    tail = 0.0
    for l in range(n, 0, -1):
        best: Optional[tuple[float, float, int]] = None
        for b in (0, 1):
            cand = (b / 2.0 + tail / 2.0) % 1.0
            d = _circular_distance(estimates[l - 1], cand)
            if best is None or (d, cand) < (best[0], best[1]):
                best = (d, cand, b)
        if best is None or best[0] >= 0.125:
            raise ReconstructionError(
                f"estimate for bit {l} is not within 1/8 of either candidate",
                bit_index=l,
            )
        bits[l - 1] = best[2]
        tail = best[1]
    return BitString(bits)


@dataclass
class KitaevReport:
    """Outcome of a full per-bit baseline run."""

    n: int
    trials_per_test: int
    shared_budget: bool
    estimates: tuple[float, ...]
    bits: Optional[BitString]
    failure_bit: Optional[int]
    tally: GateTally
    seed: Optional[int]


def run_kitaev(
    phi: PhaseLike,
    n: int,
    seed: int = 0,
    trials: Optional[int] = None,
    shared_budget: bool = False,
    rng: Optional[Rng] = None,
) -> KitaevReport:
    """Estimate n phase bits with 2n independent Hadamard-test batches.

    By default each of the cosine and sine tests gets the full
    ceil(55 ln n) budget (2 M n tests overall); ``shared_budget`` splits
    that budget across the pair instead, halving the cost at some
    accuracy loss.
    """
    if n < 1:
        raise ValueError("n must be positive")
    budget = trials if trials is not None else kitaev_trials(n)
    if budget < 1:
        raise ValueError("trials must be positive")
    per_test = max(1, budget // 2) if shared_budget else budget
    used_seed: Optional[int] = None
    if rng is None:
        rng = Rng(seed)
        used_seed = seed
    tally = GateTally()
    estimates = tuple(
        estimate_phi_l(phi, l, per_test, rng, tally) for l in range(1, n + 1)
    )
    bits: Optional[BitString] = None
    failure_bit: Optional[int] = None
    try:
        bits = reconstruct_bits(estimates)
    except ReconstructionError as exc:
        failure_bit = exc.bit_index
    return KitaevReport(
        n=n,
        trials_per_test=per_test,
        shared_budget=shared_budget,
        estimates=estimates,
        bits=bits,
        failure_bit=failure_bit,
        tally=tally,
        seed=used_seed,
    )
