"""Parameters and dyadic words: the exact geometry every engine builds on."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)


@dataclass(frozen=True, slots=True)
class CircleParameter:
    """Rotation parameter c on the torus with its phase and singularity.

    ``singularity`` is the zero of the potential, c + 1/2 mod 1. When the
    parameter was given exactly, ``rational_form`` holds ``(p, q)`` in lowest
    terms with ``0 <= p < q``.
    """

    c: float
    phase: complex
    singularity: float
    rational_form: tuple[int, int] | None = None

    @property
    def is_exact(self) -> bool:
        return self.rational_form is not None

    @property
    def c_exact(self) -> Fraction:
        """c as a rational (the binary value of the float when inexact)."""
        if self.rational_form is not None:
            return Fraction(*self.rational_form)
        return Fraction(self.c)

    @property
    def singularity_exact(self) -> Fraction:
        return (self.c_exact + HALF) % 1

    @property
    def cos2pic(self) -> float:
        """cos(2 pi c), exact at quarter turns."""
        return self.phase.real

    def label(self) -> str:
        if self.rational_form is not None:
            p, q = self.rational_form
            return str(p) if q == 1 else f"{p}/{q}"
        return repr(self.c)


@dataclass(frozen=True, slots=True)
class DyadicWord:
    """Binary word w of length n, stored as its integer value m.

    The cylinder is ``[m / 2^n, (m + 1) / 2^n]``.
    """

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"word length must be >= 0, got {self.length}")
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit {self.length} bits")

    @classmethod
    def from_bits(cls, bits: str | tuple[int, ...] | list[int]) -> DyadicWord:
        seq = [int(b) for b in bits]
        if any(b not in (0, 1) for b in seq):
            raise ValueError(f"not a binary word: {bits!r}")
        value = 0
        for b in seq:
            value = (value << 1) | b
        return cls(value, len(seq))

    @property
    def bits(self) -> tuple[int, ...]:
        n = self.length
        return tuple((self.value >> (n - 1 - i)) & 1 for i in range(n))

    @property
    def left(self) -> Fraction:
        return Fraction(self.value, 1 << self.length)

    @property
    def right(self) -> Fraction:
        return Fraction(self.value + 1, 1 << self.length)

    def shift(self) -> DyadicWord:
        """Drop the first letter; the doubling map sends the cylinder onto the result."""
        if self.length == 0:
            raise ValueError("cannot shift the empty word")
        return self.suffix(1)

    def suffix(self, k: int) -> DyadicWord:
        """``w_{k+1} ... w_n`` (drop the first k letters)."""
        if not 0 <= k <= self.length:
            raise ValueError(f"suffix offset {k} outside [0, {self.length}]")
        n = self.length - k
        return DyadicWord(self.value & ((1 << n) - 1), n)

    def prefix(self, k: int) -> DyadicWord:
        if not 0 <= k <= self.length:
            raise ValueError(f"prefix length {k} outside [0, {self.length}]")
        return DyadicWord(self.value >> (self.length - k), k)

    def factor(self, start: int, stop: int) -> DyadicWord:
        """Letters ``w_start .. w_stop`` (1-based, inclusive)."""
        return self.prefix(stop).suffix(start - 1)

    def extend(self, other: DyadicWord) -> DyadicWord:
        return DyadicWord((self.value << other.length) | other.value, self.length + other.length)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)
