"""tm-spectra data models."""

from tmspectra.models.bracket import Bracket
from tmspectra.models.domain import CircleParameter, DyadicWord
from tmspectra.models.enums import (
    OutputFormat,
    Pipeline,
    PressureMode,
    Provenance,
    SpectrumKind,
)
from tmspectra.models.results import (
    CheckResult,
    CorrelationState,
    CylinderExtrema,
    CylinderMeasure,
    EtaTable,
    ExtensionResult,
    ForbiddenAutomaton,
    FourierDimension,
    HittingPartition,
    LegendreCurve,
    MarkovReport,
    McMatrix,
    PartialProduct,
    PressureEstimate,
    SingularityCoding,
    SpectrumCurve,
    ThetaGrowth,
    TmPrefix,
)

__all__ = [
    "Bracket",
    "CircleParameter",
    "DyadicWord",
    "OutputFormat",
    "Pipeline",
    "PressureMode",
    "Provenance",
    "SpectrumKind",
    "TmPrefix",
    "EtaTable",
    "CorrelationState",
    "McMatrix",
    "ThetaGrowth",
    "CylinderExtrema",
    "PartialProduct",
    "CylinderMeasure",
    "PressureEstimate",
    "SpectrumCurve",
    "LegendreCurve",
    "SingularityCoding",
    "HittingPartition",
    "ForbiddenAutomaton",
    "MarkovReport",
    "ExtensionResult",
    "FourierDimension",
    "CheckResult",
]
