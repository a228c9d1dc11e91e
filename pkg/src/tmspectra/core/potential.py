"""The potential psi(x) = 2 log|cos(pi (x - c))|, its Birkhoff sums and cylinder extrema.

Cylinders are closed intervals on the torus, so the right end of the last
cylinder is identified with 0. Floats are dyadic rationals: iterating the
doubling map on a float reaches 0 after at most 53 steps.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from tmspectra.core.resources import ensure_capacity
from tmspectra.models.domain import CircleParameter, DyadicWord
from tmspectra.models.results import CylinderExtrema

logger = logging.getLogger("tmspectra.potential")

# Relative outward widening of closed-form extrema.
EXTREMA_SLACK = 1e-12


def torus_distance(x: np.ndarray | float, s: float) -> np.ndarray:
    d = np.mod(np.asarray(x, dtype=np.float64) - s, 1.0)
    return np.minimum(d, 1.0 - d)


def _psi_from_distance(rho: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 2.0 * np.log(np.sin(np.pi * rho))


def psi_values(param: CircleParameter, xs: np.ndarray) -> np.ndarray:
    """Vectorised psi; -inf where x hits the singularity."""
    return _psi_from_distance(torus_distance(xs, param.singularity))


def psi(param: CircleParameter, x: float | Fraction) -> float:
    """psi at one point. Rational input is checked against the singularity exactly."""
    if isinstance(x, Fraction):
        if x % 1 == param.singularity_exact:
            return -math.inf
        x = float(x)
    return float(psi_values(param, np.array([x]))[0])


def psi_distance_bounds(param: CircleParameter, x: float) -> tuple[float, float]:
    """(2 log(2 rho), 2 log(pi rho)) with rho the torus distance from x to the singularity."""
    rho = float(torus_distance(x, param.singularity))
    if rho == 0.0:
        return -math.inf, -math.inf
    return 2.0 * math.log(2.0 * rho), 2.0 * math.log(math.pi * rho)


def birkhoff_sum(param: CircleParameter, x: float | Fraction, n: int) -> float:
    """psi_n(x) = sum_{k<n} psi(T^k x); -inf propagates."""
    if n < 1:
        raise ValueError(f"Birkhoff length must be >= 1, got {n}")
    total = 0.0
    point: float | Fraction = x % 1
    for _ in range(n):
        total += psi(param, point)
        if total == -math.inf:
            return total
        point = (2 * point) % 1
    return total


def birkhoff_sums(param: CircleParameter, xs: np.ndarray, n: int) -> np.ndarray:
    """Vectorised psi_n over float points."""
    if n < 1:
        raise ValueError(f"Birkhoff length must be >= 1, got {n}")
    points = np.mod(np.asarray(xs, dtype=np.float64), 1.0)
    total = np.zeros_like(points)
    for _ in range(n):
        total += psi_values(param, points)
        points = np.mod(2.0 * points, 1.0)
    return total


def _containing(point: Fraction, level: int) -> tuple[int, ...]:
    """Indices j with point in the closed torus interval [j, j+1] / 2^level."""
    size = 1 << level
    scaled = point * size
    if scaled.denominator == 1:
        k = int(scaled) % size
        return tuple(sorted({(k - 1) % size, k}))
    return (math.floor(scaled) % size,)


def _widen_up(values: np.ndarray) -> np.ndarray:
    return values + EXTREMA_SLACK * (1.0 + np.abs(values))


def _widen_down(values: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        out = values - EXTREMA_SLACK * (1.0 + np.abs(values))
    return np.where(np.isinf(values), values, out)


def term_bounds(
    param: CircleParameter, level: int, indices: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (sup, inf) of psi over the closed intervals [j, j+1] / 2^level.

    psi decreases with the torus distance to the singularity, so on an arc
    that avoids c the sup sits at the endpoint farther from the singularity
    and on an arc avoiding the singularity the inf sits at the nearer one.
    """
    j = np.asarray(indices, dtype=np.int64)
    scale = 1.0 / (1 << level)
    left = j * scale
    right = (j + 1) * scale
    s = param.singularity
    dl = torus_distance(left, s)
    dr = torus_distance(right, s)
    sups = _widen_up(_psi_from_distance(np.maximum(dl, dr)))
    infs = _widen_down(_psi_from_distance(np.minimum(dl, dr)))
    for k in _containing(param.c_exact, level):
        sups[j == k] = 0.0
    for k in _containing(param.singularity_exact, level):
        infs[j == k] = -np.inf
    return sups, infs


@functools.lru_cache(maxsize=32)
def term_tables(param: CircleParameter, level: int) -> tuple[np.ndarray, np.ndarray]:
    """(sup, inf) of psi over every depth-``level`` cylinder, read-only and cached."""
    sups, infs = term_bounds(param, level, np.arange(1 << level))
    sups.flags.writeable = False
    infs.flags.writeable = False
    return sups, infs


def term_extrema(param: CircleParameter, word: DyadicWord) -> tuple[float, float]:
    """(sup, inf) of the single term psi over the cylinder of ``word``."""
    if word.length == 0:
        return 0.0, -math.inf
    sups, infs = term_bounds(param, word.length, np.array([word.value]))
    return float(sups[0]), float(infs[0])


@dataclass(frozen=True, slots=True)
class ExclusionZone:
    """Open arcs removed from the circle, lifted to the real line.

    Copies shifted by -1 and +1 are included so that containment can be
    tested on [0, 1] without wraparound.
    """

    arcs: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_closed_intervals(cls, intervals: list[tuple[Fraction, Fraction]]) -> ExclusionZone:
        """Union of closed intervals in [0, 1], merged on the torus, then opened."""
        merged: list[list[Fraction]] = []
        for lo, hi in sorted(intervals):
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == 1:
            first = merged.pop(0)
            merged[-1][1] = first[1] + 1
        arcs = []
        for lo, hi in merged:
            for shift in (-1, 0, 1):
                arcs.append((lo + shift, hi + shift))
        return cls(arcs=tuple(arcs))

    def removes(self, point: Fraction) -> bool:
        return any(lo < point < hi for lo, hi in self.arcs)

    def remaining(self, left: Fraction, right: Fraction) -> list[tuple[Fraction, Fraction]]:
        """Closed pieces of [left, right] outside every open arc."""
        pieces = [(left, right)]
        for a, b in self.arcs:
            nxt = []
            for lo, hi in pieces:
                if b <= lo or a >= hi:
                    nxt.append((lo, hi))
                    continue
                if lo <= a:
                    nxt.append((lo, a))
                if b <= hi:
                    nxt.append((b, hi))
            pieces = nxt
        return pieces


def _restricted_inf_exact(
    param: CircleParameter, zone: ExclusionZone, level: int, j: int
) -> float:
    size = 1 << level
    pieces = zone.remaining(Fraction(j, size), Fraction(j + 1, size))
    if not pieces:
        return math.inf
    best = math.inf
    for lo, hi in pieces:
        for point in (lo, hi):
            best = min(best, psi(param, point % 1))
    if math.isinf(best):
        return best
    return best - EXTREMA_SLACK * (1.0 + abs(best))


@functools.lru_cache(maxsize=64)
def restricted_inf_table(param: CircleParameter, zone: ExclusionZone, level: int) -> np.ndarray:
    """inf of psi over each depth-``level`` cylinder minus the zone (+inf when nothing is left)."""
    size = 1 << level
    _, infs = term_tables(param, level)
    table = infs.copy()
    touched: set[int] = set()
    for a, b in zone.arcs:
        lo_scaled, hi_scaled = a * size, b * size
        start = max(math.floor(lo_scaled) + 1, 0)
        stop = min(math.ceil(hi_scaled) - 2, size - 1)
        if start <= stop:
            table[start:stop + 1] = np.inf
        fa, cb = math.floor(lo_scaled), math.ceil(hi_scaled)
        for j in (fa - 1, fa, fa + 1, cb - 2, cb - 1, cb):
            if 0 <= j < size:
                touched.add(j)
    for j in sorted(touched):
        table[j] = _restricted_inf_exact(param, zone, level, j)
    table.flags.writeable = False
    return table


@dataclass(frozen=True, slots=True, eq=False)
class ExtremaTable:
    """Extrema arrays for every depth-n word, indexed by word value."""

    depth: int
    grid_depth: int
    sum_of_sups: np.ndarray
    sum_of_infs: np.ndarray
    refined_sup: np.ndarray
    refined_inf: np.ndarray
    grid_max: np.ndarray
    grid_min: np.ndarray
    restricted: bool = False

    @property
    def sup_upper(self) -> np.ndarray:
        return np.minimum(self.sum_of_sups, self.refined_sup)

    @property
    def inf_lower(self) -> np.ndarray:
        return np.maximum(self.sum_of_infs, self.refined_inf)

    def row(self, word: DyadicWord) -> CylinderExtrema:
        if word.length != self.depth:
            raise ValueError(f"word of length {word.length} in a depth-{self.depth} table")
        i = word.value
        return CylinderExtrema(
            word=word,
            sum_of_sups=float(self.sum_of_sups[i]),
            sum_of_infs=float(self.sum_of_infs[i]),
            grid_max=float(self.grid_max[i]),
            grid_min=float(self.grid_min[i]),
            refined_sup=float(self.refined_sup[i]),
            refined_inf=float(self.refined_inf[i]),
        )


def _termwise(
    param: CircleParameter,
    words: np.ndarray,
    total_depth: int,
    terms: int,
    zone: ExclusionZone | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Sum over k < terms of the closed-form term extrema on the suffix cylinders."""
    sup_acc = np.zeros(words.shape[0])
    inf_acc = np.zeros(words.shape[0])
    for k in range(terms):
        level = total_depth - k
        sups, infs = term_tables(param, level)
        if zone is not None:
            infs = restricted_inf_table(param, zone, level)
        idx = words & ((1 << level) - 1)
        sup_acc += sups[idx]
        inf_acc += infs[idx]
    return sup_acc, inf_acc


def _grid_sums(param: CircleParameter, grid_level: int, terms: int) -> np.ndarray:
    """psi_terms at every node q / 2^grid_level, q in [0, 2^grid_level)."""
    size = 1 << grid_level
    table = psi_values(param, np.arange(size) / size)
    acc = np.zeros(size)
    idx = np.arange(size)
    mask = size - 1
    for _ in range(terms):
        acc += table[idx]
        idx = (idx << 1) & mask
    return acc


def _admissible_nodes(zone: ExclusionZone, grid_level: int, terms: int) -> np.ndarray:
    """Nodes whose first ``terms`` doubling images stay out of the zone."""
    size = 1 << grid_level
    bounds = [(a * size, b * size) for a, b in zone.arcs]
    idx = np.arange(size)
    ok = np.ones(size, dtype=bool)
    mask = size - 1
    for _ in range(terms):
        for lo, hi in bounds:
            ok &= ~((idx > lo) & (idx < hi))
        idx = (idx << 1) & mask
    return ok


def _per_cell(values: np.ndarray, cells: int, width: int, reducer: str) -> np.ndarray:
    """Reduce node values over each closed cell (width + 1 nodes, last one shared)."""
    shaped = values.reshape(cells, width)
    right = np.concatenate([values, values[:1]])[width::width]
    if reducer == "max":
        return np.maximum(shaped.max(axis=1), right)
    return np.minimum(shaped.min(axis=1), right)


@functools.lru_cache(maxsize=4)
def depth_extrema(
    param: CircleParameter,
    depth: int,
    grid_depth: int,
    zone: ExclusionZone | None = None,
) -> ExtremaTable:
    """Certified extrema of psi_n over all 2^n closed cylinders at once.

    With a zone, infima and grid samples only see points whose first n
    doubling images avoid the zone's open arcs; suprema stay unrestricted.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if grid_depth < 1:
        raise ValueError(f"grid depth must be >= 1, got {grid_depth}")
    grid_level = depth + grid_depth
    ensure_capacity(8 * 6 * (1 << grid_level), f"extrema sweep at depth {grid_level}")

    cells = 1 << depth
    width = 1 << grid_depth
    words = np.arange(cells)
    sum_of_sups, sum_of_infs = _termwise(param, words, depth, depth, zone)

    children = np.arange(1 << grid_level)
    ref_sup, ref_inf = _termwise(param, children, grid_level, depth, zone)
    refined_sup = ref_sup.reshape(cells, width).max(axis=1)
    refined_inf = ref_inf.reshape(cells, width).min(axis=1)

    sums = _grid_sums(param, grid_level, depth)
    if zone is None:
        grid_max = _per_cell(sums, cells, width, "max")
        grid_min = _per_cell(sums, cells, width, "min")
    else:
        ok = _admissible_nodes(zone, grid_level, depth)
        grid_max = _per_cell(np.where(ok, sums, -np.inf), cells, width, "max")
        grid_min = _per_cell(np.where(ok, sums, np.inf), cells, width, "min")

    logger.debug(
        "extrema at depth %d (+%d) for c = %s, zone=%s",
        depth, grid_depth, param.label(), zone is not None,
    )
    arrays = (sum_of_sups, sum_of_infs, refined_sup, refined_inf, grid_max, grid_min)
    for arr in arrays:
        arr.flags.writeable = False
    return ExtremaTable(
        depth=depth,
        grid_depth=grid_depth,
        sum_of_sups=sum_of_sups,
        sum_of_infs=sum_of_infs,
        refined_sup=refined_sup,
        refined_inf=refined_inf,
        grid_max=grid_max,
        grid_min=grid_min,
        restricted=zone is not None,
    )


def cylinder_extrema(param: CircleParameter, word: DyadicWord, grid_depth: int) -> CylinderExtrema:
    """Certified extrema of psi_n over the closed cylinder of one word (n = |w|)."""
    if grid_depth < 1:
        raise ValueError(f"grid depth must be >= 1, got {grid_depth}")
    n = word.length
    if n == 0:
        return CylinderExtrema(word, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    grid_level = n + grid_depth
    width = 1 << grid_depth

    sups = infs = 0.0
    for k in range(n):
        term_sup, term_inf = term_extrema(param, word.suffix(k))
        sups += term_sup
        infs += term_inf

    children = (word.value << grid_depth) + np.arange(width)
    ref_sup = np.zeros(width)
    ref_inf = np.zeros(width)
    for k in range(n):
        level = grid_level - k
        s, i = term_bounds(param, level, children & ((1 << level) - 1))
        ref_sup += s
        ref_inf += i

    size = 1 << grid_level
    nodes = (word.value << grid_depth) + np.arange(width + 1)
    idx = nodes % size
    acc = np.zeros(width + 1)
    for _ in range(n):
        acc += psi_values(param, idx / size)
        idx = (idx << 1) & (size - 1)

    return CylinderExtrema(
        word=word,
        sum_of_sups=sups,
        sum_of_infs=infs,
        grid_max=float(acc.max()),
        grid_min=float(acc.min()),
        refined_sup=float(ref_sup.max()),
        refined_inf=float(ref_inf.min()),
    )
