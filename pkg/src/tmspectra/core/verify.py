"""Cross-method acceptance suite behind ``tm-spectra verify``.

Each check pits two independent computations against each other (or a
computation against a closed form). Quick mode shrinks depths and sample
counts so the whole suite runs in a few minutes.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from tmspectra.core.autocorr import (
    correlation_exponent,
    empirical_eta,
    eta_table,
    lambda1,
    mc_matrix,
    theta_growth,
    vector_state,
)
from tmspectra.core.combinatorics import (
    enumerate_admissible,
    extension_search,
    forbidden_automaton,
    markov_check,
    singularity_coding,
    word_count,
)
from tmspectra.core.measure import density_at, partial_product, product_masses
from tmspectra.core.params import make_parameter
from tmspectra.core.potential import depth_extrema
from tmspectra.core.pressure import (
    LOG2,
    c0_upper_envelope,
    gibbs_partition_pressure,
    partition_pressure,
    pressure_c0,
    pressure_curve,
)
from tmspectra.core.sequence import dirac_comb_transform, tm_prefix
from tmspectra.core.spectra import (
    birkhoff_spectrum,
    fourier_dimension,
    lq_from_masses,
    lq_spectrum,
    q_r,
    quantization_dimension,
    spectral_dimension,
    uniform_curve,
)
from tmspectra.models.domain import DyadicWord
from tmspectra.models.enums import Pipeline
from tmspectra.models.results import CheckResult

logger = logging.getLogger("tmspectra.verify")


@dataclass(frozen=True, slots=True)
class VerifyContext:
    """Sizes shared by the checks."""

    quick: bool = False
    seed: int = 20240601
    workers: int = 1

    def pick(self, full: int, quick: int) -> int:
        return quick if self.quick else full

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class VerifyReport:
    """Results of an acceptance run; checks that raised are listed in ``failures``."""

    results: list[CheckResult] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)  # (check_name, error)

    @property
    def passed(self) -> bool:
        return not self.failures and all(r.passed for r in self.results)


Outcome = tuple[bool, str]


def check_c0_pressure(ctx: VerifyContext) -> Outcome:
    """c = 0 brackets against max{(1 - 2t) log 2, 0} and the depth-n envelope."""
    param = make_parameter(Fraction(0))
    n = ctx.pick(18, 14)
    notes, ok = [], True
    for t in (0.0, 0.25, 0.5, 1.0, 2.0):
        est = partition_pressure(param, t, n, 3)
        target = pressure_c0(t)
        envelope = c0_upper_envelope(t, n)
        good = est.value.hi >= target - 1e-12 and est.value.lo <= envelope + 1e-12
        if t == 0:
            good = good and est.value.lo == est.value.hi == math.log(2.0)
        ok = ok and good
        notes.append(f"t={t:g}: {est.value} vs {target:.5f} (envelope {envelope:.5f})")
    return ok, "; ".join(notes)


def check_lambda1_golden(ctx: VerifyContext) -> Outcome:
    """Cubic root against golden values and a generic eigensolve."""
    golden = {Fraction(0): 2.0, Fraction(1, 2): (1.0 + math.sqrt(17.0)) / 4.0}
    ok, notes = True, []
    for c, want in golden.items():
        lam = lambda1(make_parameter(c))
        good = lam.contains(want, slack=1e-10)
        ok = ok and good
        notes.append(f"c={c}: {lam} vs {want!r}")
    for c in (Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(3, 10)):
        param = make_parameter(c)
        numeric = float(np.max(np.abs(np.linalg.eigvals(mc_matrix(param).matrix))))
        gap = abs(lambda1(param).mid - numeric)
        ok = ok and gap <= 1e-8
        notes.append(f"eig c={c}: gap {gap:.2e}")
    return ok, "; ".join(notes)


def check_d2_regression(ctx: VerifyContext) -> Outcome:
    """Theta growth slope against log2 lambda_1."""
    kmax = ctx.pick(20, 18)
    tol = 0.02 if not ctx.quick else 0.03
    ok, notes = True, []
    for c in (Fraction(1, 2), Fraction(1, 3), Fraction(3, 10)):
        param = make_parameter(c)
        growth = theta_growth(param, kmax)
        d2 = correlation_exponent(param)
        ok = ok and abs(d2.mid - growth.slope) <= tol
        notes.append(f"c={c}: slope {growth.slope:.5f} vs D2 {d2.mid:.5f}")
    return ok, "; ".join(notes)


def check_fourier_triangle(ctx: VerifyContext) -> Outcome:
    """Eigen, pressure and Theta routes to 1 - D_2 pairwise within 0.05."""
    depth = ctx.pick(18, 16)
    kmax = ctx.pick(20, 18)
    ok, notes = True, []
    for c in (Fraction(0), Fraction(1, 4), Fraction(1, 2)):
        result = fourier_dimension(make_parameter(c), depth=depth, kmax=kmax)
        ok = ok and result.agree(0.05)
        notes.append(f"c={c}: max gap {result.max_gap():.4f}")
    return ok, "; ".join(notes)


def check_pressure_lq_identity(ctx: VerifyContext) -> Outcome:
    """beta from cylinder masses overlaps Gibbs-window pressure / log 2 at the same depth."""
    depth = ctx.pick(12, 10)
    grid = (0.5, 1.0, 2.0)
    ok, notes = True, []
    for c in (Fraction(1, 2), Fraction(1, 3)):
        param = make_parameter(c)
        by_measure = lq_spectrum(param, grid, depth, Pipeline.MEASURE)
        for q, a in zip(grid, by_measure.values):
            b = gibbs_partition_pressure(param, q, depth).value.scale(1.0 / LOG2)
            ok = ok and a.overlaps(b)
            notes.append(f"c={c} q={q:g}: measure {a} vs pressure {b}")
    return ok, "; ".join(notes)


def check_gibbs_sandwich(ctx: VerifyContext) -> Outcome:
    """Quadrature masses inside [exp(sum_of_infs), exp(sum_of_sups)] for all short words."""
    top = ctx.pick(12, 8)
    violations = 0
    total = 0
    for c in (Fraction(1, 2), Fraction(1, 3)):
        param = make_parameter(c)
        for n in range(1, top + 1):
            masses = product_masses(param, n, n + 4)
            table = depth_extrema(param, n, 1)
            lo = np.exp(table.sum_of_infs) * (1.0 - 1e-9)
            hi = np.exp(table.sum_of_sups) * (1.0 + 1e-9)
            violations += int(np.count_nonzero((masses < lo) | (masses > hi)))
            total += masses.shape[0]
    return violations == 0, f"{violations} violations over {total} cylinders"


def check_recursion_oracles(ctx: VerifyContext) -> Outcome:
    """eta table against empirical averages; v_2n = M v_n against direct sums."""
    window = 1 << ctx.pick(18, 14)
    top = 1 << ctx.pick(10, 8)
    worst_eta = worst_state = 0.0
    for c in (Fraction(1, 2), Fraction(1, 3), Fraction(3, 10)):
        param = make_parameter(c)
        prefix = tm_prefix(param, window + 33)
        table = eta_table(param, 2 * (2 * top) + 1)
        for lag in range(33):
            worst_eta = max(worst_eta, abs(empirical_eta(prefix, lag, window) - table[lag]))
        matrix = mc_matrix(param).matrix
        for n in range(1, top + 1):
            stepped = matrix @ vector_state(table, n).as_vector()
            direct = vector_state(table, 2 * n).as_vector()
            err = float(np.max(np.abs(stepped - direct)) / (1.0 + np.max(np.abs(direct))))
            worst_state = max(worst_state, err)
    tol_eta = 1e-3 if not ctx.quick else 5e-3
    ok = worst_eta <= tol_eta and worst_state <= 1e-10
    return ok, f"eta error {worst_eta:.2e}, state error {worst_state:.2e}"


def check_diffraction_identity(ctx: VerifyContext) -> Outcome:
    """Partial-product density against |Dirac comb transform|^2 / 2^n."""
    order = 10
    rng = ctx.rng()
    worst = 0.0
    for c in (Fraction(1, 2), Fraction(1, 3)):
        param = make_parameter(c)
        xs = rng.random(100)
        density = density_at(partial_product(param, order), xs)
        comb = np.abs(dirac_comb_transform(tm_prefix(param, 1 << order), xs)) ** 2 / (1 << order)
        worst = max(worst, float(np.max(np.abs(density - comb) / (1.0 + comb))))
    return worst <= 1e-6, f"max relative error {worst:.2e}"


def check_combinatorics_oracles(ctx: VerifyContext) -> Outcome:
    """Automaton counts, Markov structure and extension lengths."""
    top_m, top_n = ctx.pick(6, 4), ctx.pick(14, 10)
    mismatches = 0
    for c in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)):
        coding = singularity_coding(make_parameter(c))
        for m in range(1, top_m + 1):
            aut = forbidden_automaton(coding, m)
            for n in range(1, top_n + 1):
                if word_count(aut, n) != enumerate_admissible(coding, m, n).shape[0]:
                    mismatches += 1
    coding = singularity_coding(make_parameter(Fraction(1, 3)))
    report = markov_check(forbidden_automaton(coding, 6))

    rng = ctx.rng()
    samples = ctx.pick(1000, 100)
    longest = 0
    envelope = 0.0
    for _ in range(samples):
        word = DyadicWord.from_bits(rng.integers(0, 2, size=256).tolist())
        found = extension_search(coding, word)
        longest = max(longest, found.length)
        envelope = found.envelope
    ok = mismatches == 0 and report.irreducible and report.aperiodic and longest <= envelope + 2
    detail = (
        f"{mismatches} count mismatches; m=6 irreducible={report.irreducible} "
        f"aperiodic={report.aperiodic}; longest extension {longest} (envelope {envelope:.2f})"
    )
    return ok, detail


def check_spectrum_sanity(ctx: VerifyContext) -> Outcome:
    """Uniform harness closed forms and the shape of the c = 1/2 spectra."""
    grid = [i / 16 for i in range(33)]
    uniform = uniform_curve(grid)
    ok = True
    notes = []
    for r in (0.5, 1.0, 2.0):
        q = q_r(uniform, r)
        d = quantization_dimension(uniform, r)
        ok = ok and q.contains(1.0 / (1.0 + r), slack=1e-9) and d.contains(1.0, slack=1e-9)
    ok = ok and spectral_dimension(uniform).contains(0.5, slack=1e-9)
    depth = 8
    flat = np.full(1 << depth, 2.0 ** -depth)
    harness = lq_from_masses(flat, flat, grid, depth)
    ok = ok and all(v.contains(1.0 - q, slack=1e-9) for q, v in zip(grid, harness.values))
    notes.append(f"uniform harness ok={ok}")

    param = make_parameter(Fraction(1, 2))
    n = ctx.pick(16, 12)
    t_grid = [i / 4 for i in range(9)]
    spec = birkhoff_spectrum(param, n, t_grid, workers=ctx.workers)
    inside = all(0.0 <= v.lo <= v.hi <= 1.0 for v in spec.values)
    apex = max(v.mid for v in spec.values)
    curve = pressure_curve(param, t_grid, n, workers=ctx.workers)
    convex = not curve.diagnostics
    ok = ok and inside and abs(apex - 1.0) <= 0.03 and convex
    notes.append(f"c=1/2: range ok={inside}, apex {apex:.4f}, convex={convex}")
    return ok, "; ".join(notes)


CHECKS: dict[str, Callable[[VerifyContext], Outcome]] = {
    "c0_pressure": check_c0_pressure,
    "lambda1_golden": check_lambda1_golden,
    "d2_regression": check_d2_regression,
    "fourier_triangle": check_fourier_triangle,
    "pressure_lq_identity": check_pressure_lq_identity,
    "gibbs_sandwich": check_gibbs_sandwich,
    "recursion_oracles": check_recursion_oracles,
    "diffraction_identity": check_diffraction_identity,
    "combinatorics_oracles": check_combinatorics_oracles,
    "spectrum_sanity": check_spectrum_sanity,
}


def run_checks(
    names: list[str] | None = None,
    quick: bool = False,
    seed: int = 20240601,
    workers: int = 1,
) -> VerifyReport:
    """Run the selected checks (all by default) and collect their outcomes."""
    selected = list(CHECKS) if not names else names
    unknown = [n for n in selected if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    ctx = VerifyContext(quick=quick, seed=seed, workers=workers)
    report = VerifyReport()
    for name in selected:
        start = time.perf_counter()
        try:
            passed, detail = CHECKS[name](ctx)
        except Exception as exc:
            logger.exception("Check %s raised", name)
            report.failures.append((name, f"{type(exc).__name__}: {exc}"))
            continue
        elapsed = time.perf_counter() - start
        report.results.append(CheckResult(name, passed, detail, elapsed))
        logger.info("%s %s in %.1fs: %s", name, "passed" if passed else "FAILED", elapsed, detail)
    return report
