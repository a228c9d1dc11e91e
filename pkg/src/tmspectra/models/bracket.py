"""Certified lower/upper pairs with outward rounding."""

from __future__ import annotations

import math
import sys
from collections.abc import Iterable
from dataclasses import dataclass


def down(x: float) -> float:
    """One ulp towards -inf; infinities are left alone."""
    if math.isinf(x):
        return x
    return math.nextafter(x, -math.inf)


def up(x: float) -> float:
    """One ulp towards +inf; infinities are left alone."""
    if math.isinf(x):
        return x
    return math.nextafter(x, math.inf)


def _add(a: float, b: float) -> float:
    # inf + (-inf) never arises from enclosures of a real sum; treat it as unbounded
    if math.isinf(a) and math.isinf(b) and a != b:
        return math.nan
    return a + b


@dataclass(frozen=True, slots=True)
class Bracket:
    """Closed interval ``[lo, hi]`` of extended reals enclosing a scalar.

    Every operation rounds outward, so the result encloses the exact value
    whenever the operands do.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("bracket endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"bracket lo {self.lo!r} exceeds hi {self.hi!r}")

    @classmethod
    def point(cls, value: float) -> Bracket:
        return cls(value, value)

    @classmethod
    def around(cls, value: float, radius: float) -> Bracket:
        """``value ± radius`` rounded outward."""
        return cls(down(value - radius), up(value + radius))

    @classmethod
    def hull_of(cls, values: Iterable[float]) -> Bracket:
        items = list(values)
        if not items:
            raise ValueError("hull of an empty set")
        return cls(min(items), max(items))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return self.hi if math.isinf(self.lo) else self.lo
        return 0.5 * (self.lo + self.hi)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack

    def overlaps(self, other: Bracket, slack: float = 0.0) -> bool:
        return self.lo <= other.hi + slack and other.lo <= self.hi + slack

    def gap(self, other: Bracket) -> float:
        """Distance between the two intervals (0 when they overlap)."""
        return max(0.0, self.lo - other.hi, other.lo - self.hi)

    def __add__(self, other: Bracket | float) -> Bracket:
        o = other if isinstance(other, Bracket) else Bracket.point(float(other))
        lo, hi = _add(self.lo, o.lo), _add(self.hi, o.hi)
        if math.isnan(lo):
            lo = -math.inf
        if math.isnan(hi):
            hi = math.inf
        return Bracket(down(lo), up(hi))

    __radd__ = __add__

    def __neg__(self) -> Bracket:
        return Bracket(-self.hi, -self.lo)

    def __sub__(self, other: Bracket | float) -> Bracket:
        o = other if isinstance(other, Bracket) else Bracket.point(float(other))
        return self + (-o)

    def scale(self, factor: float) -> Bracket:
        """Multiply by a real scalar; ``0 * inf`` is taken as 0."""
        if factor == 0:
            return Bracket(0.0, 0.0)
        a = self.lo * factor
        b = self.hi * factor
        lo, hi = (a, b) if factor > 0 else (b, a)
        return Bracket(down(lo), up(hi))

    def log(self) -> Bracket:
        """Natural log; ``log 0 = -inf``."""
        if self.lo < 0:
            raise ValueError(f"log of a bracket reaching below zero: {self}")
        lo = -math.inf if self.lo == 0 else down(math.log(self.lo))
        hi = -math.inf if self.hi == 0 else up(math.log(self.hi))
        return Bracket(lo, hi)

    def exp(self) -> Bracket:
        lo = _exp_down(self.lo)
        hi = _exp_up(self.hi)
        return Bracket(lo, hi)

    def hull(self, other: Bracket) -> Bracket:
        return Bracket(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: Bracket) -> Bracket | None:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Bracket(lo, hi)

    def clamp(self, window: Bracket) -> Bracket:
        """Project both endpoints into ``window``."""
        lo = min(max(self.lo, window.lo), window.hi)
        hi = min(max(self.hi, window.lo), window.hi)
        return Bracket(lo, hi)

    def widen(self, radius: float) -> Bracket:
        return Bracket(down(self.lo - radius), up(self.hi + radius))

    def __str__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _exp_down(x: float) -> float:
    if x == -math.inf:
        return 0.0
    try:
        return max(0.0, down(math.exp(x)))
    except OverflowError:
        return sys.float_info.max


def _exp_up(x: float) -> float:
    if x == math.inf:
        return math.inf
    try:
        return up(math.exp(x))
    except OverflowError:
        return math.inf


def bracket_max(items: Iterable[Bracket]) -> Bracket:
    """Enclosure of ``max`` over a finite family."""
    seq = list(items)
    if not seq:
        raise ValueError("max over an empty family")
    return Bracket(max(b.lo for b in seq), max(b.hi for b in seq))


def bracket_sum(items: Iterable[Bracket]) -> Bracket:
    """Enclosure of a finite sum, rounded outward once per term."""
    total = Bracket(0.0, 0.0)
    for b in items:
        total = total + b
    return total
