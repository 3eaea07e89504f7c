"""Check reports and their json, csv and text renderings."""
from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Any, ClassVar, Literal, TextIO

from attrs import field, frozen
from rich.console import Console
from rich.table import Table

Status = Literal["pass", "fail", "warn"]
Value = str | float | int | bool | None

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 15


def round_floats(obj: Any) -> Any:
    """Floats rounded to 15 significant digits; non-finite floats become strings."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(obj, Mapping):
        return {str(key): round_floats(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(value) for value in obj]
    return obj


@frozen(kw_only=True)
class Report:
    check: str
    inputs: dict[str, Any] = field(factory=dict)
    expected: Value = None
    computed: Value = None
    status: Status = "pass"
    tolerance: float | None = None
    runtime_ms: float = 0.0
    details: dict[str, Any] = field(factory=dict)

    CSV_COLUMNS: ClassVar[tuple[str, ...]] = (
        "check",
        "status",
        "expected",
        "computed",
        "tolerance",
        "runtime_ms",
        "inputs",
    )

    @classmethod
    def numeric(
        cls,
        check: str,
        *,
        expected: float,
        computed: float,
        tolerance: float,
        relative: bool = True,
        **kwargs: Any,
    ) -> Report:
        """Status pass iff |computed − expected| ≤ tolerance (times |expected|)."""
        error = abs(computed - expected)
        scale = abs(expected) if relative and expected else 1.0
        details = {"abs_err": error, "rel_err": error / scale if scale else error}
        details.update(kwargs.pop("details", {}))
        return cls(
            check=check,
            expected=expected,
            computed=computed,
            status="pass" if error <= tolerance * scale else "fail",
            tolerance=tolerance,
            details=details,
            **kwargs,
        )

    @classmethod
    def exact(
        cls, check: str, *, expected: Any, computed: Any, **kwargs: Any
    ) -> Report:
        return cls(
            check=check,
            expected=str(expected),
            computed=str(computed),
            status="pass" if expected == computed else "fail",
            **kwargs,
        )

    @classmethod
    def flag(cls, check: str, *, holds: bool, **kwargs: Any) -> Report:
        return cls(
            check=check,
            expected=True,
            computed=holds,
            status="pass" if holds else "fail",
            **kwargs,
        )

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "inputs": self.inputs,
            "expected": self.expected,
            "computed": self.computed,
            "status": self.status,
            "tolerance": self.tolerance,
            "runtime_ms": self.runtime_ms,
            "details": self.details,
        }


def exit_code(reports: Iterable[Report]) -> int:
    return 0 if all(report.passed for report in reports) else 1


def render_json(command: str, reports: Sequence[Report]) -> str:
    envelope = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "reports": [report.to_json() for report in reports],
    }
    return json.dumps(round_floats(envelope), sort_keys=True, indent=2) + "\n"


def _cell(value: Any) -> str:
    value = round_floats(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return "" if value is None else str(value)


def render_csv(reports: Sequence[Report]) -> str:
    handle = io.StringIO()
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(Report.CSV_COLUMNS)
    for report in reports:
        row = report.to_json()
        writer.writerow([_cell(row[column]) for column in Report.CSV_COLUMNS])
    return handle.getvalue()


def render_rows_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    """A table whose columns are the keys of the first row."""
    handle = io.StringIO()
    if rows:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(value) for key, value in row.items()})
    return handle.getvalue()


_STATUS_STYLE = {"pass": "green", "fail": "bold red", "warn": "yellow"}


def build_table(command: str, reports: Sequence[Report]) -> Table:
    table = Table(title=command)
    table.add_column("check")
    table.add_column("status")
    table.add_column("expected", overflow="fold")
    table.add_column("computed", overflow="fold")
    table.add_column("tolerance", justify="right")
    table.add_column("ms", justify="right")
    for report in reports:
        table.add_row(
            report.check,
            f"[{_STATUS_STYLE[report.status]}]{report.status}",
            _cell(report.expected),
            _cell(report.computed),
            _cell(report.tolerance),
            f"{report.runtime_ms:.1f}",
        )
    return table


def write_text(command: str, reports: Sequence[Report], handle: TextIO) -> None:
    Console(file=handle, width=120).print(build_table(command, reports))
