"""Report envelope and deterministic rendering.

Every command produces a :class:`RunReport`: the schema version, the command
name, an echo of the run configuration and the command payload. JSON output
uses sorted keys and a fixed indent and carries no timestamps, so identical
runs produce byte-identical files. Non-finite floats are written as the
strings ``"inf"``, ``"-inf"`` and ``"nan"`` to keep the output strict JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class Table(BaseModel):
    """A CSV-ready table."""

    model_config = ConfigDict(extra="forbid")

    header: list[str]
    rows: list[list[Any]] = Field(default_factory=list)


class RunReport(BaseModel):
    """Envelope shared by all command reports.

    Attributes:
        schema_version: Version of the report layout.
        command: Subcommand that produced the report.
        config: Echo of the validated run configuration.
        payload: Command-specific results.
        passed: Overall verdict for checking commands, ``None`` otherwise.
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: str
    command: str
    config: dict[str, Any]
    payload: dict[str, Any]
    passed: bool | None = None


def _strict(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {str(key): _strict(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_strict(item) for item in value]
    return value


def render_json(report: RunReport, indent: int = 2) -> str:
    """Serialize ``report`` with sorted keys and a trailing newline."""
    data = _strict(report.model_dump(mode="python"))
    return json.dumps(data, sort_keys=True, indent=indent, allow_nan=False) + "\n"


def render_csv(table: Table) -> str:
    """Serialize ``table`` with ``\\n`` line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(_format_row(row) for row in table.rows)
    return buffer.getvalue()


def _format_row(row: Sequence[Any]) -> list[str]:
    cells = []
    for cell in row:
        if isinstance(cell, bool):
            cells.append("true" if cell else "false")
        elif isinstance(cell, float):
            cells.append(repr(cell) if math.isfinite(cell) else str(_strict(cell)))
        else:
            cells.append(str(cell))
    return cells


def write_output(text: str, out: str | Path) -> Path:
    """Write ``text`` to ``out`` (parents created) and return the path."""
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


__all__ = ["RunReport", "Table", "render_csv", "render_json", "write_output"]
