"""Autocorrelation coefficients, the (Z, Pi) recursion and the correlation exponent."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import stats

from tmspectra.core.resources import ensure_capacity
from tmspectra.errors import InvariantViolation
from tmspectra.models.bracket import Bracket, down, up
from tmspectra.models.domain import CircleParameter
from tmspectra.models.results import (
    CorrelationState,
    EtaTable,
    McMatrix,
    ThetaGrowth,
    TmPrefix,
)

logger = logging.getLogger("tmspectra.autocorr")

LOG2 = math.log(2.0)
_ROOT_WIDTH = 4e-13


def eta_table(param: CircleParameter, max_index: int) -> EtaTable:
    """eta_0 .. eta_{N+1} by eta_{2n} = eta_n, eta_{2n+1} = (phi eta_n + conj(phi) eta_{n+1}) / 2.

    Filled one dyadic block [2^k, 2^{k+1}) at a time: the even entries of a
    block only read the previous block, the odd ones read the evens.
    """
    if max_index < 1:
        raise ValueError(f"max index must be >= 1, got {max_index}")
    size = max_index + 2
    ensure_capacity(size * 16, f"eta table up to {max_index}")
    phi = param.phase
    eta = np.empty(size, dtype=complex)
    eta[0] = 1.0
    eta[1] = phi / (2.0 - phi.conjugate())
    lo = 2
    while lo < size:
        hi = min(2 * lo, size)
        idx = np.arange(lo, hi)
        evens = idx[0::2]
        odds = idx[1::2]
        eta[evens] = eta[evens // 2]
        half = odds // 2
        eta[odds] = 0.5 * (phi * eta[half] + phi.conjugate() * eta[half + 1])
        lo = hi
    peak = float(np.max(np.abs(eta)))
    if peak > 1.0 + 1e-9:
        raise InvariantViolation(f"|eta| reached {peak} > 1 for c = {param.label()}")
    eta.flags.writeable = False
    return EtaTable(parameter=param, eta=eta)


def empirical_eta(prefix: TmPrefix, n: int, k: int) -> complex:
    """(1/k) sum_{m<k} conj(t_m) t_{m+n}."""
    if n < 0 or k < 1:
        raise ValueError(f"need lag n >= 0 and window k >= 1, got n={n}, k={k}")
    if n + k > prefix.length:
        raise ValueError(f"window n + k = {n + k} exceeds prefix length {prefix.length}")
    v = prefix.values
    return complex(np.vdot(v[:k], v[n:n + k]) / k)


def mc_matrix(param: CircleParameter) -> McMatrix:
    phi = param.phase
    cphi = phi.conjugate()
    matrix = 0.5 * np.array(
        [[3, 1, 1], [phi, 2 * phi, 0], [cphi, 0, 2 * cphi]],
        dtype=complex,
    )
    matrix.flags.writeable = False
    return McMatrix(parameter=param, matrix=matrix)


def characteristic_coefficients(param: CircleParameter) -> tuple[float, float, float, float]:
    """Real cubic lambda^3 - a lambda^2 + b lambda - 1 shared by all parameters."""
    cos = param.cos2pic
    return 1.0, -(1.5 + 2.0 * cos), 1.0 + 2.5 * cos, -1.0


def eigenvalues(param: CircleParameter) -> tuple[complex, complex, complex]:
    """The three eigenvalues of M_c ordered by decreasing modulus."""
    roots = np.roots(characteristic_coefficients(param))
    ordered = sorted((complex(r) for r in roots), key=lambda z: (-abs(z), -z.real, z.imag))
    return ordered[0], ordered[1], ordered[2]


def _cubic(coeffs: tuple[float, float, float, float], x: float) -> float:
    a3, a2, a1, a0 = coeffs
    return ((a3 * x + a2) * x + a1) * x + a0


def lambda1(param: CircleParameter) -> Bracket:
    """Dominant eigenvalue of M_c: the unique real root > 1 of the characteristic cubic.

    The numeric root is polished by bisection on a sign change, giving a
    bracket no wider than about 1e-12.
    """
    coeffs = characteristic_coefficients(param)
    roots = np.roots(coeffs)
    real_roots = [float(r.real) for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r))]
    if not real_roots or max(real_roots) <= 1.0 + 1e-9:
        raise InvariantViolation(f"no real root > 1 for c = {param.label()}: {roots}")
    guess = max(real_roots)

    step = 1e-9 * guess
    lo, hi = guess - step, guess + step
    for _ in range(200):
        if _cubic(coeffs, lo) <= 0.0 <= _cubic(coeffs, hi):
            break
        step *= 2.0
        lo, hi = guess - step, guess + step
    else:
        raise InvariantViolation(f"could not bracket the dominant root near {guess}")

    while hi - lo > _ROOT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _cubic(coeffs, mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return Bracket(down(down(lo)), up(up(hi)))


def correlation_exponent(param: CircleParameter) -> Bracket:
    """D_2 = log(lambda_1) / log 2."""
    return lambda1(param).log().scale(1.0 / LOG2)


def vector_state(table: EtaTable, n: int) -> CorrelationState:
    """(Z_n, Pi_n) by direct summation over eta_n .. eta_{2n}."""
    if n < 1:
        raise ValueError(f"state index must be >= 1, got {n}")
    if 2 * n > table.max_index:
        raise ValueError(f"state at {n} needs eta up to {2 * n}, table ends at {table.max_index}")
    block = table.eta[n:2 * n]
    shifted = table.eta[n + 1:2 * n + 1]
    z = float(np.sum(np.abs(block) ** 2))
    phi = table.parameter.phase
    pi = complex(0.5 * phi * phi * np.sum(block * np.conj(shifted)))
    return CorrelationState(Z=z, Pi=pi, n=n)


def iterate_state(param: CircleParameter, k: int) -> CorrelationState:
    """State at 2^k obtained from (Z_1, Pi_1) by k applications of M_c."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    start = vector_state(eta_table(param, 2), 1)
    matrix = mc_matrix(param).matrix
    v = start.as_vector()
    for _ in range(k):
        v = matrix @ v
    return CorrelationState(Z=float(v[0].real), Pi=complex(v[1]), n=1 << k)


def theta_growth(param: CircleParameter, kmax: int) -> ThetaGrowth:
    """Theta_{2^k} = sum_{m < 2^k} |eta_m|^2 for k = 0..kmax, plus the fitted exponent.

    The slope of log2 Theta against k is fitted on k in [kmax/2, kmax].
    """
    if kmax < 2:
        raise ValueError(f"kmax must be >= 2, got {kmax}")
    table = eta_table(param, 1 << kmax)
    cumulative = np.cumsum(np.abs(table.eta[: (1 << kmax)]) ** 2)
    ks = np.arange(kmax + 1)
    thetas = cumulative[(1 << ks) - 1]
    start = kmax // 2
    fit = stats.linregress(ks[start:], np.log2(thetas[start:]))
    points = tuple((int(k), float(t)) for k, t in zip(ks, thetas))
    logger.debug("theta slope %.6f +- %.2g for c = %s", fit.slope, fit.stderr, param.label())
    return ThetaGrowth(
        points=points,
        slope=float(fit.slope),
        stderr=float(fit.stderr),
        window=(start, kmax),
    )


def eigen_plot_row(param: CircleParameter) -> tuple[float, ...]:
    """(c, lambda_1, Re lambda_2, Im lambda_2, Re lambda_3, Im lambda_3, D_2)."""
    lam = lambda1(param)
    _, second, third = eigenvalues(param)
    d2 = correlation_exponent(param)
    return (
        param.c,
        lam.mid,
        second.real,
        second.imag,
        third.real,
        third.imag,
        d2.mid,
    )
