"""Frozen dataclass models for computed quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from tmspectra.errors import PrecisionError
from tmspectra.models.bracket import Bracket
from tmspectra.models.domain import CircleParameter, DyadicWord
from tmspectra.models.enums import PressureMode, Provenance

# Float bits carried by a double's mantissa.
MANTISSA_BITS = 52


@dataclass(frozen=True, slots=True, eq=False)
class TmPrefix:
    """First N entries t_0 .. t_{N-1} of the sequence for one parameter."""

    parameter: CircleParameter
    values: np.ndarray

    @property
    def length(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True, slots=True, eq=False)
class EtaTable:
    """Autocorrelation coefficients eta_0 .. eta_N (plus eta_{N+1})."""

    parameter: CircleParameter
    eta: np.ndarray

    @property
    def max_index(self) -> int:
        return int(self.eta.shape[0]) - 1

    def __getitem__(self, n: int) -> complex:
        if n < 0:
            return complex(np.conj(self.eta[-n]))
        return complex(self.eta[n])


@dataclass(frozen=True, slots=True)
class CorrelationState:
    """(Z_n, Pi_n) at index n; the third vector entry is conj(Pi_n)."""

    Z: float
    Pi: complex
    n: int

    def as_vector(self) -> np.ndarray:
        return np.array([self.Z, self.Pi, self.Pi.conjugate()], dtype=complex)


@dataclass(frozen=True, slots=True, eq=False)
class McMatrix:
    """The 3x3 matrix advancing (Z, Pi, conj Pi) from n to 2n."""

    parameter: CircleParameter
    matrix: np.ndarray


@dataclass(frozen=True, slots=True)
class ThetaGrowth:
    """Dyadic partial sums Theta_{2^k} and the fitted growth exponent."""

    points: tuple[tuple[int, float], ...]
    slope: float
    stderr: float
    window: tuple[int, int]


@dataclass(frozen=True, slots=True)
class CylinderExtrema:
    """Certified extrema of the Birkhoff sum psi_n over one closed cylinder.

    ``sum_of_sups``/``sum_of_infs`` are the termwise closed-form bounds;
    ``refined_sup``/``refined_inf`` apply the same bounds on the depth n+b
    refinement, and ``grid_max``/``grid_min`` are attained sample values:

        sum_of_infs <= refined_inf <= grid_min <= grid_max <= refined_sup <= sum_of_sups
    """

    word: DyadicWord
    sum_of_sups: float
    sum_of_infs: float
    grid_max: float
    grid_min: float
    refined_sup: float
    refined_inf: float

    @property
    def sup_bracket(self) -> Bracket:
        """Enclosure of sup psi_n over the cylinder."""
        return Bracket(self.grid_max, min(self.sum_of_sups, self.refined_sup))

    @property
    def inf_bracket(self) -> Bracket:
        """Enclosure of inf psi_n over the cylinder."""
        return Bracket(max(self.sum_of_infs, self.refined_inf), self.grid_min)


@dataclass(frozen=True, slots=True, eq=False)
class PartialProduct:
    """Fourier coefficients of the order-N partial density h_N.

    Only nonnegative frequencies are stored; ``coefficient(-m)`` is the
    conjugate of ``coefficient(m)`` and every |m| >= 2^N vanishes.
    """

    parameter: CircleParameter
    order: int
    coefficients: np.ndarray

    def coefficient(self, m: int) -> complex:
        if abs(m) >= self.coefficients.shape[0]:
            return 0j
        value = complex(self.coefficients[abs(m)])
        return value.conjugate() if m < 0 else value


@dataclass(frozen=True, slots=True)
class CylinderMeasure:
    """Bracketed mass of one cylinder with its Gibbs window (log scale)."""

    word: DyadicWord
    estimate: Bracket
    gibbs_lo: float
    gibbs_hi: float
    clamped: bool = False

    @property
    def window(self) -> Bracket:
        return Bracket(math.exp(self.gibbs_lo), math.exp(self.gibbs_hi))


@dataclass(frozen=True, slots=True)
class PressureEstimate:
    """Finite-depth topological pressure bracket."""

    parameter: CircleParameter
    t: float
    depth: int
    grid_depth: int
    value: Bracket
    mode: PressureMode
    cylinders: int
    restricted_m: int | None = None


@dataclass(frozen=True, slots=True)
class SpectrumCurve:
    """Sampled curve with bracketed values on a strictly increasing grid."""

    arguments: tuple[float, ...]
    values: tuple[Bracket, ...]
    provenance: Provenance
    parameter: CircleParameter | None = None
    depth: int | None = None
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.arguments) != len(self.values):
            raise ValueError("arguments and values differ in length")
        if not self.arguments:
            raise ValueError("empty curve")
        if any(b <= a for a, b in zip(self.arguments, self.arguments[1:])):
            raise ValueError("curve grid must be strictly increasing")

    def lower(self) -> np.ndarray:
        return np.array([v.lo for v in self.values])

    def upper(self) -> np.ndarray:
        return np.array([v.hi for v in self.values])

    def value_at(self, x: float) -> Bracket:
        for a, v in zip(self.arguments, self.values):
            if a == x:
                return v
        raise KeyError(f"{x!r} is not a grid point")


@dataclass(frozen=True, slots=True)
class LegendreCurve:
    """Sampled conjugate (or a spectrum derived from one)."""

    alphas: tuple[float, ...]
    values: tuple[Bracket, ...]
    alpha_min: float
    alpha_max: float
    kind: str = "conjugate"
    flagged: tuple[bool, ...] = ()
    truncated: bool = False
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.alphas) != len(self.values):
            raise ValueError("alphas and values differ in length")
        if self.flagged and len(self.flagged) != len(self.alphas):
            raise ValueError("flagged mask differs in length")


@dataclass(frozen=True, slots=True)
class SingularityCoding:
    """Binary expansions of the singularity position.

    For a dyadic singularity both expansions (u10... and u01...) are tracked;
    ``dual_prefix`` returns the second one, which equals ``prefix`` until the
    depth at which they part.
    """

    parameter: CircleParameter
    is_dyadic: bool
    exact: bool

    def _prefix_value(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"prefix length must be >= 0, got {n}")
        if self.exact:
            s = self.parameter.singularity_exact
            return (s.numerator << n) // s.denominator
        s_float = self.parameter.singularity
        scaled = math.ldexp(s_float, n)
        value = math.floor(scaled)
        frac = scaled - value
        if n > MANTISSA_BITS or min(frac, 1.0 - frac) <= math.ldexp(1.0, n - MANTISSA_BITS):
            raise PrecisionError(
                f"singularity {s_float!r} is within 2^-{MANTISSA_BITS} of a dyadic "
                f"boundary at depth {n}; pass c as a rational"
            )
        return value

    def prefix(self, n: int) -> DyadicWord:
        return DyadicWord(self._prefix_value(n), n)

    def splits_at(self, n: int) -> bool:
        """True when the two dyadic expansions differ within the first n letters."""
        if not self.is_dyadic:
            return False
        s = self.parameter.singularity_exact
        return (s * (1 << n)).denominator == 1

    def dual_prefix(self, n: int) -> DyadicWord:
        value = self._prefix_value(n)
        if self.splits_at(n) and n > 0:
            value = (value - 1) % (1 << n)
        return DyadicWord(value, n)


@dataclass(frozen=True, slots=True)
class HittingPartition:
    """Hitting depth of every position k = 1..n of a word (None means full)."""

    word: DyadicWord
    depths: tuple[int | None, ...]

    @property
    def full_times(self) -> tuple[int, ...]:
        return tuple(k for k, d in enumerate(self.depths, start=1) if d is None)

    @property
    def kappa(self) -> int:
        return sum(1 for d in self.depths if d is None)

    def classes(self) -> dict[int | None, tuple[int, ...]]:
        out: dict[int | None, list[int]] = {}
        for k, d in enumerate(self.depths, start=1):
            out.setdefault(d, []).append(k)
        return {d: tuple(ks) for d, ks in out.items()}


@dataclass(frozen=True, slots=True, eq=False)
class ForbiddenAutomaton:
    """Transition graph on admissible (m+1)-letter words.

    ``matrix`` is a scipy CSR 0/1 matrix indexed like ``states``.
    """

    m: int
    states: tuple[int, ...]
    forbidden: tuple[int, ...]
    matrix: Any

    @property
    def state_count(self) -> int:
        return len(self.states)


@dataclass(frozen=True, slots=True)
class MarkovReport:
    """Graph-theoretic summary of a forbidden-word automaton."""

    irreducible: bool
    aperiodic: bool
    period: int
    spectral_radius: Bracket
    essential_count: int
    state_count: int
    full_irreducible: bool = False


@dataclass(frozen=True, slots=True)
class ExtensionResult:
    """Shortest closing extension found for a word."""

    word: DyadicWord
    extension: DyadicWord
    envelope: float
    no_prefix: bool = False

    @property
    def length(self) -> int:
        return self.extension.length


@dataclass(frozen=True, slots=True)
class FourierDimension:
    """The three independent routes to 1 - D_2."""

    parameter: CircleParameter
    eigen_route: Bracket
    pressure_route: Bracket
    theta_route: Bracket
    meta: dict[str, Any] = field(default_factory=dict)

    def routes(self) -> dict[str, Bracket]:
        return {
            "eigen": self.eigen_route,
            "pressure": self.pressure_route,
            "theta": self.theta_route,
        }

    def max_gap(self) -> float:
        rs = list(self.routes().values())
        return max(a.gap(b) for i, a in enumerate(rs) for b in rs[i + 1:])

    def agree(self, slack: float = 0.05) -> bool:
        return self.max_gap() <= slack


@dataclass(frozen=True, slots=True)
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str
    elapsed: float

