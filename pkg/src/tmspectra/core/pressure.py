"""Finite-depth topological pressure with certified brackets.

For t >= 0 each cylinder enters through its sup of psi_n, for t < 0
through its inf. Unrestricted inf-based sums at a singular cylinder are
+inf and are reported as such; finite negative-t values come from the
restricted variant on the forbidden-word subshift.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Sequence

import numpy as np

from tmspectra.core.combinatorics import enumerate_admissible, exclusion_zone, singularity_coding
from tmspectra.core.potential import ExtremaTable, depth_extrema
from tmspectra.core.reduction import LOGSUM_SLACK, parallel_map, tree_logsumexp
from tmspectra.errors import InvariantViolation
from tmspectra.models.bracket import Bracket, down, up
from tmspectra.models.domain import CircleParameter
from tmspectra.models.enums import PressureMode, Provenance
from tmspectra.models.results import PressureEstimate, SpectrumCurve

logger = logging.getLogger("tmspectra.pressure")

LOG2 = math.log(2.0)
DEFAULT_MAX_DEPTH = 20


def pressure_c0(t: float) -> float:
    """Closed form at c = 0: max{(1 - 2t) log 2, 0}."""
    return max((1.0 - 2.0 * t) * LOG2, 0.0)


def c0_upper_envelope(t: float, depth: int) -> float:
    """(1/n) log(2 + 2 sum_{r=1}^{2^(n-1)} (2r)^(-2t)).

    Depth-n partition sums at c = 0 are bounded by this; near t = 1/2 it
    converges slowly to the closed form.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    r = np.arange(1, (1 << (depth - 1)) + 1, dtype=np.float64)
    logs = np.concatenate([[LOG2], LOG2 - 2.0 * t * np.log(2.0 * r)])
    return tree_logsumexp(logs) / depth


def _reduce(exponents: np.ndarray, depth: int) -> float:
    return tree_logsumexp(exponents) / depth


def _widened(lo: float, hi: float) -> Bracket:
    if math.isfinite(lo):
        lo = down(lo - LOGSUM_SLACK * (1.0 + abs(lo)))
    if math.isfinite(hi):
        hi = up(hi + LOGSUM_SLACK * (1.0 + abs(hi)))
    return Bracket(lo, hi)


def _estimate(
    param: CircleParameter,
    t: float,
    table: ExtremaTable,
    words: np.ndarray | None,
    restricted_m: int | None,
) -> PressureEstimate:
    n = table.depth
    count = (1 << n) if words is None else int(words.shape[0])

    def pick(arr: np.ndarray) -> np.ndarray:
        return arr if words is None else arr[words]

    if t == 0:
        value = Bracket.point(math.log(count) / n) if count else Bracket(-math.inf, -math.inf)
        mode = PressureMode.COUNT
    elif t > 0:
        lo = _reduce(t * pick(table.grid_max), n)
        hi = _reduce(t * pick(table.sup_upper), n)
        value = _widened(lo, hi)
        mode = PressureMode.SUP
    else:
        lo = _reduce(t * pick(table.grid_min), n)
        hi = _reduce(t * pick(table.inf_lower), n)
        value = _widened(lo, hi)
        mode = PressureMode.INF
        if math.isinf(hi):
            logger.info(
                "pressure at t=%g, n=%d, c=%s is unbounded above (singular cylinder)",
                t, n, param.label(),
            )
    return PressureEstimate(
        parameter=param,
        t=t,
        depth=n,
        grid_depth=table.grid_depth,
        value=value,
        mode=mode,
        cylinders=count,
        restricted_m=restricted_m,
    )


def _check_depth(depth: int, max_depth: int) -> None:
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the configured maximum {max_depth}")


def partition_pressure(
    param: CircleParameter,
    t: float,
    depth: int,
    grid_depth: int = 3,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PressureEstimate:
    """(1/n) log sum_w exp(t E_w) with E_w bracketed by the cylinder extrema."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    _check_depth(depth, max_depth)
    table = depth_extrema(param, depth, grid_depth)
    return _estimate(param, t, table, None, None)


def gibbs_partition_pressure(
    param: CircleParameter,
    t: float,
    depth: int,
    grid_depth: int = 3,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PressureEstimate:
    """(1/n) log sum_w mu(<w>)^t, bracketed through the Gibbs window of each cylinder.

    exp(inf psi_n) <= mu(<w>) <= exp(sup psi_n) on closed cylinders, so the
    lower end takes the certified infima for t > 0 and the suprema for t < 0.
    A cylinder whose closure meets a preimage of the singularity has inf
    -inf and drops out of the lower sum.
    """
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    _check_depth(depth, max_depth)
    table = depth_extrema(param, depth, grid_depth)
    n = table.depth
    if t == 0:
        value = Bracket.point(math.log(1 << n) / n)
    else:
        with np.errstate(invalid="ignore"):
            ends = (_reduce(t * table.inf_lower, n), _reduce(t * table.sup_upper, n))
        value = _widened(min(ends), max(ends))
    return PressureEstimate(
        parameter=param,
        t=t,
        depth=n,
        grid_depth=table.grid_depth,
        value=value,
        mode=PressureMode.GIBBS if t != 0 else PressureMode.COUNT,
        cylinders=1 << n,
    )


def restricted_partition_pressure(
    param: CircleParameter,
    t: float,
    depth: int,
    m: int,
    grid_depth: int = 3,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PressureEstimate:
    """Pressure over the words avoiding the forbidden (m+1)-prefixes.

    Infima and grid samples only see points whose orbit avoids the
    forbidden cylinders; for m + 1 > n every word is admissible and the
    unrestricted value is returned.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    _check_depth(depth, max_depth)
    if m + 1 > depth:
        est = partition_pressure(param, t, depth, grid_depth, max_depth)
        return dataclasses.replace(est, restricted_m=m)
    coding = singularity_coding(param)
    words = enumerate_admissible(coding, m, depth)
    if words.shape[0] == 0:
        if m >= 2:
            raise InvariantViolation(
                f"no admissible words of length {depth} for m = {m}, c = {param.label()}"
            )
        logger.warning("no admissible words of length %d for m = 1", depth)
    table = depth_extrema(param, depth, grid_depth, exclusion_zone(coding, m))
    return _estimate(param, t, table, words, m)


PressureTask = tuple[CircleParameter, float, int, int, int | None, int]


def _pressure_task(args: PressureTask) -> PressureEstimate:
    param, t, depth, grid_depth, m, cap = args
    if m is None:
        return partition_pressure(param, t, depth, grid_depth, cap)
    return restricted_partition_pressure(param, t, depth, m, grid_depth, cap)


def convexity_diagnostics(arguments: Sequence[float], values: Sequence[Bracket]) -> list[str]:
    """Interior grid points where either envelope fails convexity beyond twice the bracket width."""
    notes = []
    for i in range(1, len(arguments) - 1):
        t0, t1, t2 = arguments[i - 1], arguments[i], arguments[i + 1]
        triple = values[i - 1], values[i], values[i + 1]
        if not all(v.is_finite for v in triple):
            continue
        w = (t2 - t1) / (t2 - t0)
        slack = 2.0 * max(v.width for v in triple)
        for name, ends in (("lower", [v.lo for v in triple]), ("upper", [v.hi for v in triple])):
            chord = w * ends[0] + (1.0 - w) * ends[2]
            if ends[1] > chord + slack:
                excess = ends[1] - chord
                notes.append(f"{name} envelope not convex at t={t1:g} (excess {excess:.3g})")
    return notes


def pressure_curve(
    param: CircleParameter,
    t_grid: Sequence[float],
    depth: int,
    grid_depth: int = 3,
    restrict: int | None = None,
    workers: int = 1,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> SpectrumCurve:
    """Pressure brackets over a t grid, with a post-hoc convexity check."""
    grid = tuple(float(t) for t in t_grid)
    if not grid:
        raise ValueError("t grid is empty")
    tasks = [(param, t, depth, grid_depth, restrict, max_depth) for t in grid]
    estimates = parallel_map(_pressure_task, tasks, workers)
    values = tuple(e.value for e in estimates)
    notes = convexity_diagnostics(grid, values)
    for note in notes:
        logger.warning("pressure curve c=%s n=%d: %s", param.label(), depth, note)
    return SpectrumCurve(
        arguments=grid,
        values=values,
        provenance=Provenance.PRESSURE,
        parameter=param,
        depth=depth,
        diagnostics=tuple(notes),
    )


def pressure_slopes(curve: SpectrumCurve) -> tuple[Bracket, ...]:
    """Enclosures of the secant slopes between consecutive grid points."""
    out = []
    for (a, va), (b, vb) in zip(
        zip(curve.arguments, curve.values), zip(curve.arguments[1:], curve.values[1:])
    ):
        if not (va.is_finite and vb.is_finite):
            out.append(Bracket(-math.inf, math.inf))
            continue
        span = b - a
        out.append(Bracket(down((vb.lo - va.hi) / span), up((vb.hi - va.lo) / span)))
    return tuple(out)
