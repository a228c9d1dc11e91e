"""Riesz product densities, their Fourier coefficients and cylinder masses.

The order-N density is h_N(x) = prod_{k<N} (1 + cos(2 pi (2^k x - c))).
Coefficients are kept for m = 0 .. 2^N - 1; negative frequencies follow by
conjugation.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from tmspectra.core.potential import cylinder_extrema, depth_extrema
from tmspectra.core.resources import ensure_capacity
from tmspectra.errors import InvariantViolation, ResourceLimitError
from tmspectra.models.bracket import Bracket
from tmspectra.models.domain import CircleParameter, DyadicWord
from tmspectra.models.results import CylinderMeasure, PartialProduct

logger = logging.getLogger("tmspectra.measure")

DEFAULT_MAX_ORDER = 22
GAUSS_POINTS = 8
# Masses may leave the Gibbs window by this much before clamping is reported.
WINDOW_TOLERANCE = 1e-12


def _check_order(order: int, max_order: int) -> None:
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    if order > max_order:
        raise ResourceLimitError(f"order {order} exceeds the configured cap {max_order}")
    ensure_capacity(16 * 3 * (1 << order), f"partial product of order {order}")


def _advance(coefficients: np.ndarray, step: int, phase: complex) -> np.ndarray:
    """Coefficients of h_{n+1} from those of h_n (length 2^n)."""
    size = 1 << step
    half = phase.conjugate() / 2.0
    padded = np.concatenate([coefficients, np.zeros(1, dtype=complex)])
    out = np.empty(2 * size, dtype=complex)
    out[:size] = coefficients + half * np.conj(padded[:0:-1])
    out[size:] = half * coefficients
    return out


def partial_products(
    param: CircleParameter, orders: Iterable[int], max_order: int = DEFAULT_MAX_ORDER
) -> dict[int, PartialProduct]:
    """Build the coefficient recursion once and snapshot the requested orders."""
    wanted = sorted(set(orders))
    if not wanted:
        return {}
    _check_order(wanted[-1], max_order)
    out: dict[int, PartialProduct] = {}
    coefficients = np.ones(1, dtype=complex)
    for step in range(wanted[-1] + 1):
        if step in wanted:
            snap = coefficients.copy()
            snap.flags.writeable = False
            out[step] = PartialProduct(parameter=param, order=step, coefficients=snap)
        if step < wanted[-1]:
            coefficients = _advance(coefficients, step, param.phase)
    return out


@functools.lru_cache(maxsize=4)
def partial_product(
    param: CircleParameter, order: int, max_order: int = DEFAULT_MAX_ORDER
) -> PartialProduct:
    """Fourier coefficients of h_N, seeded from the constant 1."""
    return partial_products(param, [order], max_order)[order]


def product_density(param: CircleParameter, order: int, xs: np.ndarray) -> np.ndarray:
    """h_N by the direct product, written as 2 cos^2 to keep small values accurate."""
    points = np.asarray(xs, dtype=np.float64)
    out = np.ones_like(points)
    scaled = np.mod(points, 1.0)
    for _ in range(order):
        out *= 2.0 * np.cos(np.pi * (scaled - param.c)) ** 2
        scaled = np.mod(2.0 * scaled, 1.0)
    return out


def fourier_density(pp: PartialProduct, xs: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """h_N from its coefficients: a_0 + 2 Re sum_{m>=1} a_m exp(2 pi i m x)."""
    points = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    a = pp.coefficients
    m = np.arange(1, a.shape[0], dtype=np.float64)
    out = np.empty(points.shape[0])
    rows = max(1, chunk // max(1, m.shape[0]))
    for start in range(0, points.shape[0], rows):
        block = points[start:start + rows]
        turns = np.mod(np.outer(block, m), 1.0)
        series = np.exp(2j * np.pi * turns) @ a[1:]
        out[start:start + rows] = a[0].real + 2.0 * series.real
    return out


def density_at(pp: PartialProduct, x: float | np.ndarray) -> np.ndarray:
    """Order-N density at x by the product form, checked against the Fourier form."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    direct = product_density(pp.parameter, pp.order, xs)
    series = fourier_density(pp, xs)
    err = np.abs(direct - series) / (1.0 + np.abs(direct))
    if err.size and float(err.max()) > 1e-8:
        raise InvariantViolation(
            f"product and Fourier densities differ by {float(err.max()):.3g} "
            f"at order {pp.order}, c = {pp.parameter.label()}"
        )
    return direct


def _interval_weights(coefficients: np.ndarray, depth: int) -> tuple[np.ndarray, np.ndarray]:
    """b_m = a_m (omega^m - 1) / (2 pi i m) for m >= 1, with omega = exp(2 pi i / 2^depth)."""
    size = 1 << depth
    m = np.arange(1, coefficients.shape[0])
    residues = m % size
    omega = np.exp(2j * np.pi * residues / size)
    weights = coefficients[1:] * (omega - 1.0) / (2j * np.pi * m)
    return weights, residues


def cylinder_masses(pp: PartialProduct, depth: int) -> np.ndarray:
    """Integral of h_N over every depth-n cylinder, exact up to rounding.

    The interval weights are folded by frequency mod 2^n and summed for all
    cylinders at once with one inverse FFT.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    size = 1 << depth
    base = pp.coefficients[0].real / size
    if pp.coefficients.shape[0] == 1:
        return np.full(size, base)
    weights, residues = _interval_weights(pp.coefficients, depth)
    folded = np.bincount(residues, weights=weights.real, minlength=size) + 1j * np.bincount(
        residues, weights=weights.imag, minlength=size
    )
    sums = size * np.fft.ifft(folded)
    return base + 2.0 * sums.real


def cylinder_mass(pp: PartialProduct, word: DyadicWord) -> float:
    """Integral of h_N over one cylinder."""
    size = 1 << word.length
    base = pp.coefficients[0].real / size
    if pp.coefficients.shape[0] == 1:
        return base
    weights, residues = _interval_weights(pp.coefficients, word.length)
    turns = (residues * word.value % size) / size
    return float(base + 2.0 * np.real(np.exp(2j * np.pi * turns) @ weights))


def _buffer_orders(depth: int, buffer: int, max_order: int) -> list[int]:
    if buffer < 1:
        raise ValueError(f"buffer must be >= 1, got {buffer}")
    if depth + buffer > max_order:
        raise ValueError(f"depth {depth} + buffer {buffer} exceeds the order cap {max_order}")
    return [o for o in (depth + buffer - 1, depth + buffer, depth + buffer + 1) if o <= max_order]


def _clamp(raw: Bracket, window: Bracket, what: str) -> tuple[Bracket, bool]:
    outside = raw.lo < window.lo - WINDOW_TOLERANCE or raw.hi > window.hi + WINDOW_TOLERANCE
    if outside:
        logger.warning("Clamped %s estimate %s into Gibbs window %s", what, raw, window)
    return raw.clamp(window), outside


def cylinder_measure(
    param: CircleParameter,
    word: DyadicWord,
    buffer: int = 8,
    max_order: int = DEFAULT_MAX_ORDER,
    grid_depth: int = 3,
) -> CylinderMeasure:
    """Bracketed mass of one cylinder from buffered partial-product integrals.

    The spread over orders |w|+K-1, |w|+K, |w|+K+1 gives the bracket, which is
    then clamped into [exp(sum_of_infs), exp(sum_of_sups)].
    """
    orders = _buffer_orders(word.length, buffer, max_order)
    products = partial_products(param, orders, max_order)
    masses = [cylinder_mass(products[o], word) for o in orders]
    raw = Bracket.hull_of(masses)

    extrema = cylinder_extrema(param, word, grid_depth)
    window = Bracket(
        0.0 if extrema.sum_of_infs == -math.inf else math.exp(extrema.sum_of_infs),
        math.exp(extrema.sum_of_sups),
    )
    estimate, clamped = _clamp(raw, window, f"cylinder {word}")
    return CylinderMeasure(
        word=word,
        estimate=estimate,
        gibbs_lo=extrema.sum_of_infs,
        gibbs_hi=extrema.sum_of_sups,
        clamped=clamped,
    )


@dataclass(frozen=True, slots=True, eq=False)
class MeasurePartition:
    """Mass brackets for all 2^n cylinders, indexed by word value."""

    parameter: CircleParameter
    depth: int
    lo: np.ndarray
    hi: np.ndarray
    raw_lo: np.ndarray
    raw_hi: np.ndarray
    window_lo: np.ndarray
    window_hi: np.ndarray

    @property
    def violations(self) -> int:
        """Cylinders whose raw estimate left the Gibbs window beyond rounding."""
        below = self.raw_lo < self.window_lo - WINDOW_TOLERANCE
        above = self.raw_hi > self.window_hi + WINDOW_TOLERANCE
        return int(np.count_nonzero(below | above))


def measure_partition(
    param: CircleParameter,
    depth: int,
    buffer: int = 8,
    max_order: int = DEFAULT_MAX_ORDER,
    grid_depth: int = 3,
) -> MeasurePartition:
    """cylinder_measure for every word of length n at once."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    orders = _buffer_orders(depth, buffer, max_order)
    products = partial_products(param, orders, max_order)
    stack = np.vstack([cylinder_masses(products[o], depth) for o in orders])
    raw_lo, raw_hi = stack.min(axis=0), stack.max(axis=0)

    extrema = depth_extrema(param, depth, grid_depth)
    window_lo = np.exp(extrema.sum_of_infs)
    window_hi = np.exp(extrema.sum_of_sups)
    lo = np.clip(raw_lo, window_lo, window_hi)
    hi = np.clip(raw_hi, window_lo, window_hi)
    partition = MeasurePartition(
        parameter=param,
        depth=depth,
        lo=lo,
        hi=hi,
        raw_lo=raw_lo,
        raw_hi=raw_hi,
        window_lo=window_lo,
        window_hi=window_hi,
    )
    if partition.violations:
        logger.warning(
            "Clamped %d of %d cylinder estimates into their Gibbs windows (c = %s, n = %d)",
            partition.violations, 1 << depth, param.label(), depth,
        )
    return partition


def product_masses(
    param: CircleParameter, depth: int, order: int, words: np.ndarray | None = None
) -> np.ndarray:
    """Cylinder masses of h_N by Gauss-Legendre quadrature of the product form.

    Unlike the Fourier route this keeps relative accuracy for tiny masses.
    """
    if order < depth:
        raise ValueError(f"order {order} must be >= depth {depth}")
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    sub = 1 << (order - depth)
    cell = 1.0 / (1 << order)
    selected = np.arange(1 << depth) if words is None else np.asarray(words)
    out = np.empty(selected.shape[0])
    per_chunk = max(1, (1 << 20) // (sub * GAUSS_POINTS))
    offsets = (np.arange(sub)[:, None] + nodes[None, :]).ravel() * cell
    tiled = np.tile(weights, sub) * cell
    for start in range(0, selected.shape[0], per_chunk):
        block = selected[start:start + per_chunk]
        xs = block[:, None] * (sub * cell) + offsets[None, :]
        values = product_density(param, order, xs)
        out[start:start + per_chunk] = values @ tiled
    return out


def transfer_identity(
    param: CircleParameter, word: DyadicWord, order: int
) -> tuple[float, float]:
    """Both sides of mu_N(<w>) = int_0^1 exp(psi_n(x_w(y))) h_{N-n}(y) dy.

    Returns (Fourier mass of the cylinder, quadrature of the right-hand side).
    """
    n = word.length
    if order < n:
        raise ValueError(f"order {order} must be >= word length {n}")
    lhs = cylinder_mass(partial_product(param, order), word)
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    sub = 1 << max(order - n, 0)
    ys = ((np.arange(sub)[:, None] + 0.5 * (nodes[None, :] + 1.0)) / sub).ravel()
    ws = np.tile(0.5 * weights, sub) / sub
    xs = (word.value + ys) / (1 << n)
    weight = product_density(param, n, xs) / (1 << n)
    rhs = float((weight * product_density(param, order - n, ys)) @ ws)
    return lhs, rhs


def measure_decay_check(param: CircleParameter, depth: int, buffer: int = 8) -> float:
    """(1/n^2) min over w of log mu(<w>), from product quadrature at order n + K.

    Masses are taken inside their Gibbs windows, so a cylinder whose window
    is degenerate still yields a finite value.
    """
    if param.c_exact == 0:
        raise ValueError("c = 0 gives the point mass at 0; cylinder decay is not defined")
    if not 1 <= depth <= 14:
        raise ValueError(f"decay check needs 1 <= n <= 14, got {depth}")
    masses = product_masses(param, depth, depth + buffer)
    extrema = depth_extrema(param, depth, 1)
    clipped = np.clip(masses, np.exp(extrema.sum_of_infs), np.exp(extrema.sum_of_sups))
    smallest = float(clipped.min())
    if smallest <= 0.0:
        raise InvariantViolation(f"non-positive cylinder mass at depth {depth}")
    return math.log(smallest) / depth**2
