"""Memory and worker budgets via psutil."""

from __future__ import annotations

import logging

import psutil

from tmspectra.errors import ResourceLimitError

logger = logging.getLogger("tmspectra.resources")

# Share of currently available memory a single table may claim.
MEMORY_FRACTION = 0.5


def memory_budget() -> int:
    """Bytes a single allocation may use."""
    try:
        available = psutil.virtual_memory().available
    except (OSError, RuntimeError):
        logger.debug("virtual_memory unavailable; assuming 1 GiB")
        available = 1 << 30
    return int(available * MEMORY_FRACTION)


def ensure_capacity(nbytes: int, what: str) -> None:
    """Refuse allocations that would not fit the memory budget."""
    budget = memory_budget()
    if nbytes > budget:
        logger.warning("Refusing %s: needs %d bytes, budget %d", what, nbytes, budget)
        raise ResourceLimitError(
            f"{what} needs {nbytes / 2**20:.1f} MiB, budget is {budget / 2**20:.1f} MiB"
        )


def default_workers() -> int:
    """One worker per physical core."""
    count = psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True)
    return max(1, int(count or 1))


def resolve_workers(requested: int) -> int:
    if requested < 0:
        raise ValueError(f"worker count must be >= 0, got {requested}")
    return requested if requested > 0 else default_workers()
