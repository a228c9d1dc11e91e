"""Parameter construction and dyadic cylinder lookup."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from tmspectra.models.domain import HALF, CircleParameter, DyadicWord

_QUARTER_PHASES: dict[Fraction, complex] = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}

ParameterInput = float | int | Fraction | tuple[int, int]


def make_parameter(c: ParameterInput) -> CircleParameter:
    """Build a CircleParameter from a float, an int, a Fraction or a ``(p, q)`` pair.

    Exact inputs (int, Fraction, pair) are reduced mod 1 exactly and keep their
    rational form; floats are reduced in floating point and carry none.
    """
    if isinstance(c, tuple):
        p, q = c
        if q == 0:
            raise ValueError("rational parameter with zero denominator")
        return _from_fraction(Fraction(p, q))
    if isinstance(c, (Fraction, int)) and not isinstance(c, bool):
        return _from_fraction(Fraction(c))
    value = float(c)
    if not math.isfinite(value):
        raise ValueError(f"parameter must be finite, got {c!r}")
    reduced = value % 1.0
    if reduced == 1.0:
        reduced = 0.0
    singularity = (reduced + 0.5) % 1.0
    return CircleParameter(
        c=reduced,
        phase=cmath.exp(2j * math.pi * reduced),
        singularity=singularity,
        rational_form=None,
    )


def _from_fraction(value: Fraction) -> CircleParameter:
    reduced = value % 1
    phase = _QUARTER_PHASES.get(reduced)
    if phase is None:
        phase = cmath.exp(2j * math.pi * float(reduced))
    return CircleParameter(
        c=float(reduced),
        phase=phase,
        singularity=float((reduced + HALF) % 1),
        rational_form=(reduced.numerator, reduced.denominator),
    )


def cylinder_of(x: float | Fraction, n: int) -> DyadicWord:
    """Depth-n word whose cylinder contains x.

    Dyadic ties go to the cylinder having x as its left endpoint, so
    ``cylinder_of(0.5, 1)`` is ``1``.
    """
    if n < 0:
        raise ValueError(f"depth must be >= 0, got {n}")
    exact = (Fraction(x) if not isinstance(x, Fraction) else x) % 1
    value = math.floor(exact * (1 << n))
    return DyadicWord(value, n)
