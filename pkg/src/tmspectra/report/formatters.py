"""CSV and versioned JSON output for computed quantities."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from tmspectra.models.bracket import Bracket
from tmspectra.models.domain import CircleParameter
from tmspectra.models.enums import OutputFormat

SCHEMA = "tm-spectra/1"
CSV_COLUMNS = ("quantity", "c", "params", "lo", "hi")
PLOT_COLUMNS = ("c", "lambda1", "re_lambda2", "im_lambda2", "re_lambda3", "im_lambda3", "d2")


@dataclass(frozen=True, slots=True)
class Record:
    """One output row: a named quantity with its bracket."""

    quantity: str
    c: str
    params: dict[str, Any] = field(default_factory=dict)
    lo: float = 0.0
    hi: float = 0.0
    meta: dict[str, Any] = field(default_factory=dict)


def record(
    quantity: str,
    param: CircleParameter,
    value: Bracket | float | int,
    params: dict[str, Any] | None = None,
    meta: dict[str, Any] | None = None,
) -> Record:
    """Build a record; plain numbers become degenerate brackets."""
    if isinstance(value, Bracket):
        lo, hi = value.lo, value.hi
    else:
        lo = hi = float(value)
    return Record(quantity, param.label(), dict(params or {}), lo, hi, dict(meta or {}))


def _number(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return _number(value)
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def _param_cell(params: dict[str, Any]) -> str:
    parts = []
    for key in sorted(params):
        value = params[key]
        text = _number(value) if isinstance(value, float) else str(value)
        parts.append(f"{key}={text}")
    return ";".join(parts)


def format_csv(records: Iterable[Record]) -> str:
    """Header plus one line per record; floats are written with repr."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.quantity, r.c, _param_cell(r.params), _number(r.lo), _number(r.hi)])
    return buf.getvalue()


def format_json(records: Iterable[Record]) -> str:
    """Versioned document; infinite endpoints are written as the strings "inf"/"-inf"."""
    doc = {
        "schema": SCHEMA,
        "records": [
            {
                "quantity": r.quantity,
                "c": r.c,
                "params": _json_value(r.params),
                "lo": _json_value(r.lo),
                "hi": _json_value(r.hi),
                "meta": _json_value(r.meta),
            }
            for r in records
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(records: Sequence[Record], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return format_json(records)
    return format_csv(records)


def format_plot_rows(rows: Iterable[Sequence[float]], columns: Sequence[str] = PLOT_COLUMNS) -> str:
    """Whitespace-separated columns with a commented header, ready for gnuplot."""
    lines = ["# " + " ".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} values, expected {len(columns)}")
        lines.append(" ".join(_number(float(v)) for v in row))
    return "\n".join(lines) + "\n"
