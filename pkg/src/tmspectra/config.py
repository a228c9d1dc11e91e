"""Layered configuration: .tmspectra/config.toml -> TMSPECTRA_* env vars -> defaults."""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, TypeVar

try:
    import tomllib  # 3.11+
except ModuleNotFoundError:
    import tomli as tomllib  # type: ignore[no-redef]

from tmspectra.models.enums import OutputFormat

logger = logging.getLogger("tmspectra.config")
T = TypeVar("T", int, float)


def _safe_numeric(value: object, type_fn: type[T], env_name: str, default: T) -> T:
    """Convert a config value to int or float, falling back to default on error."""
    try:
        return type_fn(value)  # type: ignore[arg-type]
    except (ValueError, TypeError):
        logger.warning(
            "Invalid value for %s: %r (expected %s, using default %s)",
            env_name, value, type_fn.__name__, default,
        )
        return default


def _layered(section: dict[str, Any], key: str, default: T) -> T:
    """Resolve one numeric key: env var beats TOML beats default."""
    env_name = f"TMSPECTRA_{key.upper()}"
    raw = os.environ.get(env_name, section.get(key, default))
    return _safe_numeric(raw, type(default), env_name, default)


def _layered_str(section: dict[str, Any], key: str, default: str) -> str:
    return str(os.environ.get(f"TMSPECTRA_{key.upper()}", section.get(key, default)))


def parse_grid(spec: str) -> tuple[float, ...]:
    """Parse ``a:b:n`` (n evenly spaced points) or a comma list into a sorted grid.

    Duplicates are dropped. Non-finite entries and malformed specs raise ValueError.
    """
    return tuple(float(v) for v in parse_exact_grid(spec))


def parse_exact_grid(spec: str) -> tuple[Fraction, ...]:
    """Like :func:`parse_grid` but keeps every point as an exact rational."""
    text = spec.strip()
    if not text:
        raise ValueError("empty grid spec")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec {spec!r} must look like a:b:n")
        a, b = parse_rational(parts[0]), parse_rational(parts[1])
        try:
            count = int(parts[2])
        except ValueError as exc:
            raise ValueError(f"grid spec {spec!r}: point count must be an integer") from exc
        if count < 1:
            raise ValueError(f"grid spec {spec!r}: point count must be positive")
        if count == 1:
            points = [a]
        else:
            step = (b - a) / (count - 1)
            points = [a + i * step for i in range(count)]
    else:
        points = [parse_rational(p) for p in text.split(",") if p.strip()]
        if not points:
            raise ValueError(f"grid spec {spec!r} has no points")
    return tuple(sorted(set(points)))


def parse_rational(text: str) -> Fraction:
    """Parse ``0.25``, ``1/3`` or ``-2`` into an exact rational."""
    raw = text.strip()
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a finite number: {text!r}") from exc
    if not math.isfinite(float(value)):
        raise ValueError(f"not a finite number: {text!r}")
    return value


@dataclass(frozen=True, slots=True)
class DepthConfig:
    """Depths, buffers and order caps for the engines."""

    pressure_depth: int = 18
    max_pressure_depth: int = 20
    grid_depth: int = 3
    buffer_orders: int = 8
    max_order: int = 22
    forbidden_depth: int = 6
    measure_depth: int = 12
    theta_exponent: int = 20


@dataclass(frozen=True, slots=True)
class GridConfig:
    """Default sampling grids (``a:b:n`` or comma lists)."""

    t_grid: str = "0:2:9"
    q_grid: str = "0:2:9"
    alpha_points: int = 33
    r_values: str = "0.5,1,2"


@dataclass(frozen=True, slots=True)
class OutputConfig:
    """Result serialization settings."""

    format: OutputFormat = OutputFormat.CSV


@dataclass(frozen=True, slots=True)
class ParallelConfig:
    """Worker pool settings; 0 workers means one per physical core."""

    workers: int = 0


@dataclass(frozen=True, slots=True)
class VerifyConfig:
    """Acceptance suite settings."""

    seed: int = 20240601
    quick: bool = False


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Top-level configuration container."""

    project_path: Path = field(default_factory=Path.cwd)
    depth: DepthConfig = field(default_factory=DepthConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)

    @property
    def config_dir(self) -> Path:
        return self.project_path / ".tmspectra"

    @property
    def config_path(self) -> Path:
        return self.config_dir / "config.toml"

    @classmethod
    def load(cls, project_path: Path | None = None) -> RunConfig:
        """Load config with layering: TOML file -> env vars -> defaults."""
        project = Path(project_path) if project_path else Path.cwd()
        toml_path = project / ".tmspectra" / "config.toml"

        toml_data: dict[str, Any] = {}
        if toml_path.is_file():
            with open(toml_path, "rb") as f:
                toml_data = tomllib.load(f)

        depth_data = toml_data.get("depth", {})
        grid_data = toml_data.get("grid", {})
        output_data = toml_data.get("output", {})
        parallel_data = toml_data.get("parallel", {})
        verify_data = toml_data.get("verify", {})

        # Use literal defaults (slots=True prevents class-level attribute access)
        _depth = DepthConfig()
        _grid = GridConfig()
        _parallel = ParallelConfig()
        _verify = VerifyConfig()

        depth = DepthConfig(
            pressure_depth=_layered(depth_data, "pressure_depth", _depth.pressure_depth),
            max_pressure_depth=_layered(
                depth_data, "max_pressure_depth", _depth.max_pressure_depth
            ),
            grid_depth=_layered(depth_data, "grid_depth", _depth.grid_depth),
            buffer_orders=_layered(depth_data, "buffer_orders", _depth.buffer_orders),
            max_order=_layered(depth_data, "max_order", _depth.max_order),
            forbidden_depth=_layered(depth_data, "forbidden_depth", _depth.forbidden_depth),
            measure_depth=_layered(depth_data, "measure_depth", _depth.measure_depth),
            theta_exponent=_layered(depth_data, "theta_exponent", _depth.theta_exponent),
        )

        grid = GridConfig(
            t_grid=_layered_str(grid_data, "t_grid", _grid.t_grid),
            q_grid=_layered_str(grid_data, "q_grid", _grid.q_grid),
            alpha_points=_layered(grid_data, "alpha_points", _grid.alpha_points),
            r_values=_layered_str(grid_data, "r_values", _grid.r_values),
        )

        raw_format = _layered_str(output_data, "format", OutputFormat.CSV.value)
        try:
            fmt = OutputFormat(raw_format.lower())
        except ValueError:
            logger.warning(
                "Invalid value for TMSPECTRA_FORMAT: %r (using default csv)", raw_format
            )
            fmt = OutputFormat.CSV

        parallel = ParallelConfig(
            workers=_layered(parallel_data, "workers", _parallel.workers),
        )

        quick_raw = os.environ.get("TMSPECTRA_QUICK", verify_data.get("quick", _verify.quick))
        quick = str(quick_raw).strip().lower() in ("1", "true", "yes", "on")
        verify = VerifyConfig(
            seed=_layered(verify_data, "seed", _verify.seed),
            quick=quick,
        )

        return cls(
            project_path=project,
            depth=depth,
            grid=grid,
            output=OutputConfig(format=fmt),
            parallel=parallel,
            verify=verify,
        )
