"""Enumerations for tm-spectra result models."""

from enum import Enum


class Pipeline(str, Enum):
    """Which independent computation produced an L^q curve."""

    PRESSURE = "pressure-partition"
    MEASURE = "measure-partition"


class Provenance(str, Enum):
    """Origin of the values carried by a SpectrumCurve."""

    PRESSURE = "pressure-partition"
    MEASURE = "measure-partition"
    CLOSED_FORM = "closed-form"
    LEGENDRE = "legendre"


class PressureMode(str, Enum):
    """Which extrema feed a partition sum."""

    SUP = "sup"
    INF = "inf"
    COUNT = "count"
    GIBBS = "gibbs"


class OutputFormat(str, Enum):
    """CLI serialization format."""

    CSV = "csv"
    JSON = "json"


class SpectrumKind(str, Enum):
    """Curves and dimensions served by ``tm-spectra spectrum``."""

    LQ = "lq"
    BIRKHOFF = "birkhoff"
    DIMENSION = "dimension"
    FOURIER = "fourier"
    QUANTIZATION = "quantization"
    SPECTRAL = "spectral"
    RENYI = "renyi"
    INFORMATION = "information"
