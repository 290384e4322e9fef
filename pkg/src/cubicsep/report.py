"""Report container and its canonical JSON / CSV renderings."""

from __future__ import annotations

import csv
import io
import json
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .intervals import Interval
from .laurent import LaurentSeries, TPoly
from .polynomial import IntPolynomial

__all__ = ["Report", "NestedReportError", "render", "serialize", "deserialize", "backend_fingerprint"]


class NestedReportError(ValueError):
    """CSV was requested for a report whose records are not flat rows."""


def backend_fingerprint() -> str:
    return f"{platform.python_implementation()}-{platform.python_version()} int+fractions.Fraction"


def render(value: Any) -> Any:
    """Map a value to JSON-safe data without losing exactness.

    Integers become decimal strings, rationals "num/den" (plain integer
    text when the denominator is 1) and enclosures "[lo,hi]".
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, Interval):
        return f"[{render(value.lo)},{render(value.hi)}]"
    if isinstance(value, IntPolynomial):
        return ",".join(str(c) for c in value.leading_first())
    if isinstance(value, (TPoly, LaurentSeries)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    raise TypeError(f"cannot render {type(value).__name__}")


@dataclass
class Report:
    command: str
    parameters: dict
    records: list
    summary: dict = field(default_factory=dict)
    columns: Optional[list[str]] = None
    version: str = __version__
    backend: str = field(default_factory=backend_fingerprint)

    @property
    def checks(self) -> dict:
        return self.summary.get("checks", {})

    @property
    def failed(self) -> bool:
        return any(v is False for v in self.checks.values())

    def to_data(self) -> dict:
        return {
            "command": self.command,
            "parameters": render(self.parameters),
            "records": render(self.records),
            "summary": render(self.summary),
            "version": self.version,
            "backend": self.backend,
        }


def _csv_cell(v) -> str:
    v = render(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if not isinstance(v, str):
        raise NestedReportError("record field is not a scalar")
    return v


def serialize(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        text = json.dumps(report.to_data(), sort_keys=True, indent=2, ensure_ascii=False)
        return (text + "\n").encode("utf-8")
    if fmt == "csv":
        if report.columns is None:
            raise NestedReportError(f"'{report.command}' reports are nested; use json")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.records:
            w.writerow([_csv_cell(row.get(c)) for c in report.columns])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def deserialize(data: bytes, fmt: str = "json", command: str = "") -> Report:
    """Inverse of :func:`serialize`; values come back in their rendered text form."""
    text = data.decode("utf-8")
    if fmt == "json":
        d = json.loads(text)
        return Report(d["command"], d["parameters"], d["records"], d["summary"],
                      version=d["version"], backend=d["backend"])
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        records = [{c: (v if v != "" else None) for c, v in zip(header, r)} for r in body]
        return Report(command, {}, records, columns=header)
    raise ValueError(f"unknown format {fmt!r}")
