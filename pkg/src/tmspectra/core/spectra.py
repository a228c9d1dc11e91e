"""Curve-level spectra: L^q, Legendre conjugates and the dimensions built on them.

Every curve carries brackets. Conjugates are taken on the two envelopes
separately, so the lower conjugate uses the upper input and vice versa.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy import optimize

from tmspectra.core.autocorr import correlation_exponent, theta_growth
from tmspectra.core.measure import DEFAULT_MAX_ORDER, measure_partition
from tmspectra.core.pressure import (
    convexity_diagnostics,
    gibbs_partition_pressure,
    pressure_curve,
)
from tmspectra.core.reduction import LOGSUM_SLACK, tree_logsumexp
from tmspectra.errors import CurveError
from tmspectra.models.bracket import Bracket, bracket_sum, down, up
from tmspectra.models.domain import CircleParameter
from tmspectra.models.enums import Pipeline, Provenance
from tmspectra.models.results import FourierDimension, LegendreCurve, SpectrumCurve

logger = logging.getLogger("tmspectra.spectra")

LOG2 = math.log(2.0)
DEFAULT_ALPHA_POINTS = 33


def _is_c0(param: CircleParameter | None) -> bool:
    return param is not None and param.c_exact == 0


def _grid(q_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(q) for q in q_grid)
    if not grid:
        raise ValueError("grid is empty")
    return grid


# -- L^q spectrum -------------------------------------------------------------


def uniform_curve(q_grid: Sequence[float]) -> SpectrumCurve:
    """beta(q) = 1 - q, the L^q spectrum of Lebesgue measure."""
    grid = _grid(q_grid)
    return SpectrumCurve(
        arguments=grid,
        values=tuple(Bracket.point(1.0 - q) for q in grid),
        provenance=Provenance.CLOSED_FORM,
    )


def _point_mass_curve(param: CircleParameter, grid: tuple[float, ...]) -> SpectrumCurve:
    """L^q spectrum of the unit mass at 0, the measure obtained at c = 0."""
    values = []
    for q in grid:
        if q > 0:
            values.append(Bracket(0.0, 0.0))
        elif q == 0:
            values.append(Bracket(1.0, 1.0))
        else:
            values.append(Bracket(math.inf, math.inf))
    return SpectrumCurve(
        arguments=grid,
        values=tuple(values),
        provenance=Provenance.CLOSED_FORM,
        parameter=param,
    )


def _log_moment(log_masses: np.ndarray, q: float) -> float:
    if q == 0:
        count = int(np.count_nonzero(np.isfinite(log_masses)))
        return math.log(count) if count else -math.inf
    return tree_logsumexp(q * log_masses)


def lq_from_masses(
    lo: np.ndarray, hi: np.ndarray, q_grid: Sequence[float], depth: int
) -> SpectrumCurve:
    """beta(q) = log(sum mu^q) / (n log 2) from bracketed cylinder masses."""
    grid = _grid(q_grid)
    lo_arr = np.asarray(lo, dtype=np.float64)
    hi_arr = np.asarray(hi, dtype=np.float64)
    if any(q < 0 for q in grid) and bool(np.any(lo_arr <= 0.0)):
        raise ValueError("negative q needs every cylinder mass bracketed away from 0")
    with np.errstate(divide="ignore"):
        log_lo, log_hi = np.log(lo_arr), np.log(hi_arr)
    scale = depth * LOG2
    values = []
    for q in grid:
        a, b = _log_moment(log_lo, q), _log_moment(log_hi, q)
        low, high = min(a, b), max(a, b)
        if math.isfinite(low):
            low = down(low - LOGSUM_SLACK * (1.0 + abs(low)))
        if math.isfinite(high):
            high = up(high + LOGSUM_SLACK * (1.0 + abs(high)))
        values.append(Bracket(low, high).scale(1.0 / scale))
    return SpectrumCurve(
        arguments=grid,
        values=tuple(values),
        provenance=Provenance.MEASURE,
        depth=depth,
    )


def lq_spectrum(
    param: CircleParameter,
    q_grid: Sequence[float],
    depth: int,
    pipeline: Pipeline = Pipeline.PRESSURE,
    grid_depth: int = 3,
    buffer: int = 8,
    max_order: int = DEFAULT_MAX_ORDER,
    workers: int = 1,
) -> SpectrumCurve:
    """L^q spectrum from the pressure identity beta = p / log 2, or from cylinder masses."""
    grid = _grid(q_grid)
    if _is_c0(param):
        return _point_mass_curve(param, grid)
    if pipeline is Pipeline.PRESSURE:
        if depth > 20:
            raise ValueError(f"pressure pipeline supports n <= 20, got {depth}")
        curve = pressure_curve(param, grid, depth, grid_depth, workers=workers)
        return SpectrumCurve(
            arguments=curve.arguments,
            values=tuple(v.scale(1.0 / LOG2) for v in curve.values),
            provenance=Provenance.PRESSURE,
            parameter=param,
            depth=depth,
            diagnostics=curve.diagnostics,
        )
    if depth > 12:
        raise ValueError(f"measure pipeline supports n <= 12, got {depth}")
    partition = measure_partition(param, depth, buffer, max_order, grid_depth)
    curve = lq_from_masses(partition.lo, partition.hi, grid, depth)
    return SpectrumCurve(
        arguments=curve.arguments,
        values=curve.values,
        provenance=Provenance.MEASURE,
        parameter=param,
        depth=depth,
    )


# -- Legendre transform -------------------------------------------------------


def _finite_slopes(curve: SpectrumCurve) -> tuple[float, float]:
    """Secant slopes of the midpoint curve at the two ends of its finite part."""
    pts = [(a, v.mid) for a, v in zip(curve.arguments, curve.values) if v.is_finite]
    if len(pts) < 2:
        raise CurveError("need at least two finite points to estimate the conjugate domain")
    (a0, v0), (a1, v1) = pts[0], pts[1]
    (b0, w0), (b1, w1) = pts[-2], pts[-1]
    return (v1 - v0) / (a1 - a0), (w1 - w0) / (b1 - b0)


def _conjugate(
    xs: np.ndarray, lower: np.ndarray, upper: np.ndarray, duals: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """sup_x (x a - f(x)) on both envelopes, rounded outward."""
    with np.errstate(invalid="ignore"):
        lo = np.max(np.outer(duals, xs) - upper[None, :], axis=1)
        hi = np.max(np.outer(duals, xs) - lower[None, :], axis=1)
    return np.nextafter(lo, -np.inf), np.nextafter(hi, np.inf)


def legendre(
    curve: SpectrumCurve,
    alphas: Sequence[float] | None = None,
    strict: bool = True,
    points: int = DEFAULT_ALPHA_POINTS,
) -> LegendreCurve:
    """Discrete convex conjugate p*(a) = sup over grid t of (t a - p(t)).

    The default a-grid spans the end slopes of the curve. Non-convex input
    (beyond twice the bracket width) raises CurveError when ``strict``.
    """
    notes = convexity_diagnostics(curve.arguments, curve.values)
    if notes and strict:
        raise CurveError("; ".join(notes))
    alpha_min, alpha_max = _finite_slopes(curve)
    if alphas is None:
        grid = np.linspace(alpha_min, alpha_max, points)
    else:
        grid = np.asarray(sorted(float(a) for a in alphas))
    xs = np.asarray(curve.arguments)
    lo, hi = _conjugate(xs, curve.lower(), curve.upper(), grid)
    values = tuple(Bracket(float(a), float(b)) for a, b in zip(lo, hi))
    return LegendreCurve(
        alphas=tuple(float(a) for a in grid),
        values=values,
        alpha_min=alpha_min,
        alpha_max=alpha_max,
        diagnostics=tuple(notes),
    )


def conjugate_back(conj: LegendreCurve, grid: Sequence[float]) -> SpectrumCurve:
    """sup over a of (t a - p*(a)); reproduces the convex hull on the grid."""
    ts = _grid(grid)
    alphas = np.asarray(conj.alphas)
    lower = np.array([v.lo for v in conj.values])
    upper = np.array([v.hi for v in conj.values])
    lo, hi = _conjugate(alphas, lower, upper, np.asarray(ts))
    return SpectrumCurve(
        arguments=ts,
        values=tuple(Bracket(float(a), float(b)) for a, b in zip(lo, hi)),
        provenance=Provenance.LEGENDRE,
    )


# -- Birkhoff and dimension spectra -------------------------------------------


def to_birkhoff_alpha(alpha: float) -> float:
    return -alpha * LOG2


def to_dimension_alpha(alpha: float) -> float:
    return -alpha / LOG2


def _reject_c0(param: CircleParameter, what: str) -> None:
    if _is_c0(param):
        raise ValueError(f"the {what} is not given by the pressure conjugate at c = 0")


def _finite_pressure(curve: SpectrumCurve) -> SpectrumCurve:
    keep = [i for i, v in enumerate(curve.values) if v.is_finite]
    dropped = [curve.arguments[i] for i in range(len(curve.arguments)) if i not in keep]
    if dropped:
        logger.info("dropping t = %s with unbounded pressure; spectrum is truncated", dropped)
    if len(keep) < 2:
        raise CurveError("fewer than two finite pressure values on the t grid")
    return SpectrumCurve(
        arguments=tuple(curve.arguments[i] for i in keep),
        values=tuple(curve.values[i] for i in keep),
        provenance=curve.provenance,
        parameter=curve.parameter,
        depth=curve.depth,
        diagnostics=curve.diagnostics,
    )


def birkhoff_spectrum(
    param: CircleParameter,
    depth: int,
    t_grid: Sequence[float],
    alphas: Sequence[float] | None = None,
    grid_depth: int = 3,
    points: int = DEFAULT_ALPHA_POINTS,
    workers: int = 1,
) -> LegendreCurve:
    """b(a) = -p*(a) / log 2 clipped to [0, 1].

    a below the slope at the start of the t grid would need pressure values
    the grid does not reach; those points are omitted and the result is
    marked truncated. a beyond the end slope is 0.
    """
    _reject_c0(param, "Birkhoff spectrum")
    raw = pressure_curve(param, t_grid, depth, grid_depth, workers=workers)
    pressure = _finite_pressure(raw)
    conj = legendre(pressure, alphas, strict=False, points=points)
    kept_alphas, values = [], []
    truncated = len(pressure.arguments) < len(raw.arguments)
    for a, v in zip(conj.alphas, conj.values):
        if a < conj.alpha_min - 1e-12:
            truncated = True
            continue
        if a >= conj.alpha_max + 1e-12:
            b = Bracket(0.0, 0.0)
        else:
            b = v.scale(-1.0 / LOG2).clamp(Bracket(0.0, 1.0))
        kept_alphas.append(a)
        values.append(b)
    if not kept_alphas:
        raise CurveError("every requested alpha lies below the reachable domain")
    return LegendreCurve(
        alphas=tuple(kept_alphas),
        values=tuple(values),
        alpha_min=conj.alpha_min,
        alpha_max=conj.alpha_max,
        kind="birkhoff",
        truncated=truncated,
        diagnostics=conj.diagnostics,
    )


def dimension_spectrum(
    param: CircleParameter,
    depth: int,
    t_grid: Sequence[float],
    alphas: Sequence[float] | None = None,
    grid_depth: int = 3,
    points: int = DEFAULT_ALPHA_POINTS,
    workers: int = 1,
) -> LegendreCurve:
    """f(a) = b(-a log 2), with the excluded endpoint -alpha_lo / log 2 flagged.

    The endpoint is only estimated, so every grid point within one grid
    step of it is flagged.
    """
    _reject_c0(param, "dimension spectrum")
    birkhoff_alphas = None if alphas is None else [to_birkhoff_alpha(a) for a in alphas]
    spec = birkhoff_spectrum(
        param, depth, t_grid, birkhoff_alphas, grid_depth, points=points, workers=workers
    )
    pairs = sorted(
        ((to_dimension_alpha(a), v) for a, v in zip(spec.alphas, spec.values)),
        key=lambda pair: pair[0],
    )
    dims = [a for a, _ in pairs]
    excluded = to_dimension_alpha(spec.alpha_min)
    step = max((b - a for a, b in zip(dims, dims[1:])), default=0.0)
    flagged = tuple(abs(a - excluded) <= step + 1e-12 for a in dims)
    return LegendreCurve(
        alphas=tuple(dims),
        values=tuple(v for _, v in pairs),
        alpha_min=to_dimension_alpha(spec.alpha_max),
        alpha_max=excluded,
        kind="dimension",
        flagged=flagged,
        truncated=spec.truncated,
        diagnostics=spec.diagnostics,
    )


# -- Dimensions -----------------------------------------------------------------


def fourier_dimension(
    param: CircleParameter, depth: int = 18, kmax: int = 20, grid_depth: int = 3
) -> FourierDimension:
    """1 - D_2 three ways: the cubic's root, -beta(2) from Gibbs-window pressure, the Theta slope.

    beta(2) = D_2 - 1, so the pressure route is -p(2) / log 2 with p taken over
    the Gibbs windows of the depth-n cylinders.
    """
    eigen = -correlation_exponent(param) + 1.0
    if _is_c0(param):
        pressure_route = Bracket(0.0, 0.0)
    else:
        est = gibbs_partition_pressure(param, 2.0, depth, grid_depth)
        pressure_route = est.value.scale(-1.0 / LOG2)
    growth = theta_growth(param, kmax)
    theta = Bracket.around(1.0 - growth.slope, growth.stderr)
    result = FourierDimension(
        parameter=param,
        eigen_route=eigen,
        pressure_route=pressure_route,
        theta_route=theta,
        meta={"depth": depth, "kmax": kmax, "theta_window": list(growth.window)},
    )
    logger.debug("fourier dimension c=%s: %s", param.label(), result.routes())
    return result


def _crossing(qs: np.ndarray, env: np.ndarray, r: float) -> float:
    """Smallest q > 0 where the interpolated env(q) - r q turns negative."""
    f = env - r * qs
    for i in range(1, qs.shape[0]):
        if qs[i] <= 0 or f[i] >= 0:
            continue
        if f[i - 1] < 0 or not math.isfinite(f[i - 1]):
            break
        a, b = qs[i - 1], qs[i]
        pair_q, pair_v = qs[i - 1:i + 1], env[i - 1:i + 1]
        root = optimize.brentq(
            lambda q: float(np.interp(q, pair_q, pair_v)) - r * q, a, b, xtol=1e-14
        )
        return max(float(root), 0.0)
    raise CurveError(f"no crossing of beta(q) = {r:g} q inside the grid; extend the grid")


def q_r(curve: SpectrumCurve, r: float) -> Bracket:
    """inf{q > 0 : beta(q) < r q}, bracketed by the crossings of the two envelopes."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    qs = np.asarray(curve.arguments)
    lo = _crossing(qs, curve.lower(), r)
    hi = _crossing(qs, curve.upper(), r)
    return Bracket(down(min(lo, hi)), up(max(lo, hi)))


def quantization_dimension(curve: SpectrumCurve, r: float) -> Bracket:
    """D_r = r q_r / (1 - q_r); 0 for the point mass at c = 0."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if _is_c0(curve.parameter):
        return Bracket(0.0, 0.0)
    q = q_r(curve, r)
    if q.hi >= 1.0:
        raise CurveError(f"q_r bracket {q} reaches 1; D_r is undefined")
    lo = r * q.lo / (1.0 - q.lo)
    hi = r * q.hi / (1.0 - q.hi)
    return Bracket(down(lo), up(hi))


def spectral_dimension(curve: SpectrumCurve) -> Bracket:
    """q_1, the spectral dimension of the associated Krein-Feller operator."""
    if _is_c0(curve.parameter):
        raise ValueError("spectral dimension is not defined at c = 0")
    return q_r(curve, 1.0)


def renyi_dimension(curve: SpectrumCurve, q: float) -> Bracket:
    """beta(q) / (1 - q) at a grid point q != 1."""
    if q == 1:
        raise CurveError("the Renyi dimension at q = 1 is the information dimension")
    return curve.value_at(q).scale(1.0 / (1.0 - q))


def _entropy_bounds(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Range of -x log x over [lo, hi]; the function peaks at 1/e."""
    def h(x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(x > 0, -x * np.log(np.where(x > 0, x, 1.0)), 0.0)

    h_lo, h_hi = h(lo), h(hi)
    low = np.minimum(h_lo, h_hi)
    peak = np.exp(-1.0)
    high = np.where(hi <= peak, h_hi, np.where(lo >= peak, h_lo, peak))
    return low, high


def information_dimension(
    param: CircleParameter,
    depth: int,
    buffer: int = 8,
    max_order: int = DEFAULT_MAX_ORDER,
    grid_depth: int = 3,
) -> Bracket:
    """sum mu log mu / log 2^-n over the depth-n cylinders."""
    if _is_c0(param):
        return Bracket(0.0, 0.0)
    partition = measure_partition(param, depth, buffer, max_order, grid_depth)
    low, high = _entropy_bounds(partition.lo, partition.hi)
    total = bracket_sum(Bracket(float(a), float(b)) for a, b in zip(low, high))
    return total.scale(1.0 / (depth * LOG2))
