"""Exact dyadic phase arithmetic.

Phases live on the unit circle and are written as binary fractions
``0.c1 c2 ... cm`` = sum_i c_i / 2^i, i.e. turns in [0, 1).  ``BinaryPhase``
stores the fraction exactly as ``numerator / 2**precision_bits`` with an
unbounded integer numerator, so the feedback arithmetic of semiclassical
phase estimation never rounds: doubling drops the leading bit, halving
appends precision, and addition is carried out modulo one turn.

``precision_bits`` is part of the representation, not noise: a phase
measured to m bits keeps m even when trailing bits are zero, and order
recovery uses that width as its tolerance.  Equality and hashing compare
values only, so ``1/2 == 2/4`` regardless of how either was produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import PrecisionError

PhaseLike = Union["BinaryPhase", float]


class BitString:
    """Immutable sequence of bits, most significant first."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[str, Iterable[int]]):
        if isinstance(bits, str):
            if not all(c in "01" for c in bits):
                raise ValueError(f"invalid bit string {bits!r}")
            self._bits = tuple(int(c) for c in bits)
        else:
            vals = tuple(int(b) for b in bits)
            if not all(b in (0, 1) for b in vals):
                raise ValueError(f"bits must be 0 or 1, got {vals!r}")
            self._bits = vals

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitString(self._bits[idx])
        return self._bits[idx]

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(self._bits + tuple(other))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BitString):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self._bits)

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"

    def as_int(self) -> int:
        """Value of the bits read as a big-endian integer (empty -> 0)."""
        n = 0
        for b in self._bits:
            n = (n << 1) | b
        return n


@dataclass(frozen=True, eq=False)
class BinaryPhase:
    """A phase ``numerator / 2**precision_bits`` turns, exact."""

    numerator: int
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 0:
            raise ValueError("precision_bits must be non-negative")
        if not 0 <= self.numerator < (1 << self.precision_bits):
            raise ValueError(
                f"numerator {self.numerator} out of range for "
                f"{self.precision_bits} bits"
            )

    @staticmethod
    def zero() -> "BinaryPhase":
        return BinaryPhase(0, 0)

    # -- value semantics ---------------------------------------------------

    def _key(self) -> tuple[int, int]:
        # reduced (numerator, precision) pair; unique per value
        num, p = self.numerator, self.precision_bits
        if num == 0:
            return (0, 0)
        shift = (num & -num).bit_length() - 1
        return (num >> shift, p - shift)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BinaryPhase):
            return self._key() == other._key()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key())

    def is_zero(self) -> bool:
        return self.numerator == 0

    # -- arithmetic, all modulo one turn -----------------------------------

    def __add__(self, other: "BinaryPhase") -> "BinaryPhase":
        if not isinstance(other, BinaryPhase):
            return NotImplemented
        p = max(self.precision_bits, other.precision_bits)
        a = self.numerator << (p - self.precision_bits)
        b = other.numerator << (p - other.precision_bits)
        return BinaryPhase((a + b) & ((1 << p) - 1), p)

    def __sub__(self, other: "BinaryPhase") -> "BinaryPhase":
        if not isinstance(other, BinaryPhase):
            return NotImplemented
        p = max(self.precision_bits, other.precision_bits)
        a = self.numerator << (p - self.precision_bits)
        b = other.numerator << (p - other.precision_bits)
        return BinaryPhase((a - b) & ((1 << p) - 1), p)

    def times_pow2(self, l: int) -> "BinaryPhase":
        """``2**l * self`` mod 1: the leading l fraction bits fall away."""
        if l < 0:
            raise ValueError("l must be non-negative")
        if l >= self.precision_bits:
            return BinaryPhase.zero()
        p = self.precision_bits - l
        return BinaryPhase(self.numerator & ((1 << p) - 1), p)

    def div_pow2(self, k: int) -> "BinaryPhase":
        """``self / 2**k``; gains k bits of precision, no value lost."""
        if k < 0:
            raise ValueError("k must be non-negative")
        return BinaryPhase(self.numerator, self.precision_bits + k)

    # -- conversions --------------------------------------------------------

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.precision_bits)

    def __float__(self) -> float:
        # int/int division rounds correctly even for very wide numerators
        return self.numerator / (1 << self.precision_bits)

    def to_bits(self, n: int) -> BitString:
        """First n fraction bits; exact, so the value must fit in n bits."""
        if n < 1:
            raise ValueError("n must be positive")
        num, p = self._key()
        if p > n:
            raise PrecisionError(
                f"{self.rational()} needs {p} bits, cannot expand to {n}"
            )
        scaled = num << (n - p)
        return BitString(format(scaled, f"0{n}b"))

    def rational(self) -> str:
        """Phase as an exact ``p/q`` literal (``q`` a power of two)."""
        return f"{self.numerator}/{1 << self.precision_bits}"

    def binary(self) -> str:
        """Phase as a ``0.b1b2...`` literal at its stored precision."""
        if self.precision_bits == 0:
            return "0"
        return "0." + format(self.numerator, f"0{self.precision_bits}b")

    def __str__(self) -> str:
        return self.binary()


def fraction_from_bits(bits: BitString | str) -> BinaryPhase:
    """f(c1...cm) = 0.c1c2...cm as an exact phase with m bits of precision."""
    if isinstance(bits, str):
        bits = BitString(bits)
    if len(bits) == 0:
        raise ValueError("bit string must be nonempty")
    return BinaryPhase(bits.as_int(), len(bits))


def phase_to_bits(phi: BinaryPhase, n: int) -> BitString:
    """Exact n-bit expansion of phi (raises if phi needs more than n bits)."""
    return phi.to_bits(n)


def accumulate(f_prev: BinaryPhase, stage_bits: BitString | str, k: int) -> BinaryPhase:
    """One feedback update: F = f(c1...ck) + F_prev / 2**k.

    ``stage_bits`` are the k bits measured this stage, most significant
    first.  The result's binary expansion is exactly ``stage_bits``
    followed by the expansion of ``f_prev``.
    """
    if isinstance(stage_bits, str):
        stage_bits = BitString(stage_bits)
    if len(stage_bits) != k:
        raise ValueError(f"expected {k} stage bits, got {len(stage_bits)}")
    return fraction_from_bits(stage_bits) + f_prev.div_pow2(k)


@dataclass
class ClassicalAccumulator:
    """The two classical feedback registers of a staged run.

    After ``advance`` for stage j, ``current`` holds F[j] and ``previous``
    holds F[j-1]; ``history`` records F[0], F[1], ... in order.
    """

    current: BinaryPhase = field(default_factory=BinaryPhase.zero)
    previous: BinaryPhase = field(default_factory=BinaryPhase.zero)
    history: list[BinaryPhase] = field(default_factory=lambda: [BinaryPhase.zero()])

    def advance(self, stage_bits: BitString | str, k: int) -> BinaryPhase:
        self.previous = self.current
        self.current = accumulate(self.current, stage_bits, k)
        self.history.append(self.current)
        return self.current


def parse_phase(text: str) -> BinaryPhase:
    """Parse a phase literal: ``0.b1b2...`` (binary) or ``p/q`` (q = 2^m).

    Plain ``0`` is accepted; anything else outside [0, 1) or with a
    non-power-of-two denominator is rejected.
    """
    token = text.strip()
    if not token:
        raise ValueError("empty phase literal")
    if "/" in token:
        num_s, _, den_s = token.partition("/")
        try:
            num, den = int(num_s), int(den_s)
        except ValueError:
            raise ValueError(f"invalid phase literal {text!r}") from None
        if den <= 0 or den & (den - 1):
            raise ValueError(f"denominator of {text!r} must be a power of two")
        if not 0 <= num < den:
            raise ValueError(f"phase {text!r} must lie in [0, 1)")
        return BinaryPhase(num, den.bit_length() - 1)
    if token == "0":
        return BinaryPhase.zero()
    if token.startswith("0."):
        frac = token[2:]
        if not frac or not all(c in "01" for c in frac):
            raise ValueError(f"invalid phase literal {text!r}")
        return fraction_from_bits(frac)
    raise ValueError(f"invalid phase literal {text!r}")


# -- helpers over BinaryPhase | float, used by the backends ----------------


def shift_mod1(phi: PhaseLike, l: int) -> PhaseLike:
    """``2**l * phi`` mod 1, exact for BinaryPhase."""
    if isinstance(phi, BinaryPhase):
        return phi.times_pow2(l)
    return (phi * (1 << l)) % 1.0


def add_mod1(a: PhaseLike, b: PhaseLike) -> PhaseLike:
    if isinstance(a, BinaryPhase) and isinstance(b, BinaryPhase):
        return a + b
    return (float(a) + float(b)) % 1.0


def sub_mod1(a: PhaseLike, b: PhaseLike) -> PhaseLike:
    if isinstance(a, BinaryPhase) and isinstance(b, BinaryPhase):
        return a - b
    return (float(a) - float(b)) % 1.0


def phase_is_zero(a: PhaseLike) -> bool:
    if isinstance(a, BinaryPhase):
        return a.is_zero()
    return float(a) % 1.0 == 0.0


def prob_one_after_hadamard(theta: PhaseLike) -> float:
    """Pr(1) = sin^2(pi*theta) for H applied to a relative-phase qubit.

    Exact 0.0 / 1.0 at theta = 0 and 1/2 so that resolved qubits measure
    deterministically.
    """
    if isinstance(theta, BinaryPhase):
        if theta.numerator == 0:
            return 0.0
        if theta._key() == (1, 1):
            return 1.0
        t = float(theta)
    else:
        t = float(theta) % 1.0
        if t == 0.0:
            return 0.0
        if t == 0.5:
            return 1.0
    s = math.sin(math.pi * t)
    return s * s
