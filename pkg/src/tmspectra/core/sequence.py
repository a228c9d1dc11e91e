"""Generalized Thue-Morse sequence t_n = exp(2 pi i c S_2(n)) and its substitution."""

from __future__ import annotations

import cmath
import logging
import math
from fractions import Fraction

import numpy as np

from tmspectra.core.resources import ensure_capacity
from tmspectra.models.domain import CircleParameter
from tmspectra.models.results import TmPrefix

logger = logging.getLogger("tmspectra.sequence")

# Denominators up to this size get an exact phase lookup table.
_PHASE_TABLE_LIMIT = 1 << 16
_QUARTER = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}


def digit_sum(n: int) -> int:
    """Number of ones in the binary expansion of n."""
    if n < 0:
        raise ValueError(f"digit_sum needs n >= 0, got {n}")
    return n.bit_count()


def digit_sums(length: int) -> np.ndarray:
    """S_2(0..length-1), built by doubling: S on [2^k, 2^{k+1}) is S on [0, 2^k) plus one."""
    s = np.zeros(1, dtype=np.int64)
    while s.shape[0] < length:
        s = np.concatenate([s, s + 1])
    return s[:length]


def _phase_powers(param: CircleParameter, exponents: np.ndarray) -> np.ndarray:
    """phase**k for an integer array k, exact for rational parameters."""
    if param.rational_form is not None:
        p, q = param.rational_form
        if q <= _PHASE_TABLE_LIMIT:
            table = np.array([_unit(Fraction(k * p % q, q)) for k in range(q)], dtype=complex)
            return table[exponents % q]
        residues = (exponents % q) * p % q
        return np.exp(2j * np.pi * (residues / q))
    frac = np.mod(param.c * exponents, 1.0)
    return np.exp(2j * np.pi * frac)


def _unit(turns: Fraction) -> complex:
    quarter = turns * 4
    if quarter.denominator == 1:
        return _QUARTER[int(quarter) % 4]
    return cmath.exp(2j * math.pi * float(turns))


def tm_prefix(param: CircleParameter, length: int) -> TmPrefix:
    """t_0 .. t_{N-1} for the given parameter.

    Digit sums come from the doubling recursion; the phase is then looked up
    by S_2(n) mod q when c = p/q, so entries never drift off the finite alphabet.
    """
    if length < 1:
        raise ValueError(f"prefix length must be >= 1, got {length}")
    ensure_capacity(length * 24, f"sequence prefix of length {length}")
    values = _phase_powers(param, digit_sums(length))
    values.flags.writeable = False
    return TmPrefix(parameter=param, values=values)


def substitute(
    param: CircleParameter, word: np.ndarray | list[complex], iterations: int
) -> np.ndarray:
    """Apply z -> (z, phase * z) letterwise ``iterations`` times."""
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    current = np.asarray(word, dtype=complex)
    ensure_capacity(current.shape[0] * 16 << iterations, "substitution output")
    for _ in range(iterations):
        out = np.empty(current.shape[0] * 2, dtype=complex)
        out[0::2] = current
        out[1::2] = param.phase * current
        current = out
    return current


def concatenation_step(param: CircleParameter, block: np.ndarray) -> np.ndarray:
    """u -> u followed by phase * u, the fixed-point recursion on 2^n-blocks."""
    u = np.asarray(block, dtype=complex)
    return np.concatenate([u, param.phase * u])


def dirac_comb_transform(
    prefix: TmPrefix, x: float | np.ndarray, chunk: int = 1 << 20
) -> np.ndarray:
    """sum_{k<N} t_k exp(-2 pi i k x) at each point of x."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    k = np.arange(prefix.length, dtype=np.float64)
    out = np.empty(xs.shape[0], dtype=complex)
    rows = max(1, chunk // max(1, prefix.length))
    for start in range(0, xs.shape[0], rows):
        block = xs[start:start + rows]
        turns = np.mod(np.outer(block, k), 1.0)
        out[start:start + rows] = np.exp(-2j * np.pi * turns) @ prefix.values
    return out
