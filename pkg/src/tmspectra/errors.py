"""Exception hierarchy shared by the numerical engines and the CLI."""

from __future__ import annotations


class TmSpectraError(Exception):
    """Base class for all tm-spectra failures."""


class PrecisionError(TmSpectraError):
    """Binary coding of the singularity is not exact at the requested depth.

    Raised when a floating-point parameter leaves a digit within rounding
    distance of a dyadic boundary; pass the parameter as a rational instead.
    """


class InvariantViolation(TmSpectraError):
    """A proven mathematical property failed to hold numerically."""


class ResourceLimitError(TmSpectraError, ValueError):
    """A requested table or order does not fit the memory budget."""


class CurveError(TmSpectraError, ValueError):
    """A curve transform cannot be evaluated on the given samples."""


EXIT_CODES: dict[type[TmSpectraError], int] = {
    PrecisionError: 2,
    InvariantViolation: 3,
    ResourceLimitError: 1,
    CurveError: 1,
}


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code (1 for anything unlisted)."""
    for cls in type(exc).__mro__:
        if cls in EXIT_CODES:
            return EXIT_CODES[cls]  # type: ignore[index]
    return 1
