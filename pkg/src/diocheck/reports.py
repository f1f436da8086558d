"""Deterministic report serialization: JSON, CSV, and plain text.

All formats render rationals as "p/q" strings and floats with 17
significant digits, use LF line endings, and are byte-stable: the same
report object always serializes to the same bytes.  The JSON writer is
hand-rolled because the stdlib encoder offers no control over float
formatting.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import typing
from fractions import Fraction
from typing import Any


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def render_value(value: Any) -> str:
    """Scalar rendering shared by the CSV and text formats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _is_scalar(value: Any) -> bool:
    return value is None or isinstance(
        value, (bool, int, float, str, Fraction))


def _as_mapping(obj: Any) -> Any:
    """Unwrap dataclasses one level; leave everything else alone.

    The field name `lam` serializes as "lambda": the natural key is a
    Python keyword, so dataclasses cannot carry it directly.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {("lambda" if f.name == "lam" else f.name): getattr(obj, f.name)
                for f in dataclasses.fields(obj)}
    return obj


def _json_token(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return json.dumps(f"{value.numerator}/{value.denominator}")
    if isinstance(value, float):
        if math.isfinite(value):
            return format(value, ".17g")
        return json.dumps(format_float(value))
    if isinstance(value, int):
        return str(value)
    return json.dumps(str(value))


def _write_json(obj: Any, out: list[str], indent: int, compact: bool) -> None:
    obj = _as_mapping(obj)
    pad = "" if compact else "  " * indent
    pad_in = "" if compact else "  " * (indent + 1)
    nl = "" if compact else "\n"
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for i, (key, value) in enumerate(obj.items()):
            out.append(pad_in + json.dumps(str(key)) + (":" if compact else ": "))
            _write_json(value, out, indent + 1, compact)
            out.append(("," if i < len(obj) - 1 else "") + nl)
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[" + nl)
        for i, value in enumerate(obj):
            out.append(pad_in)
            _write_json(value, out, indent + 1, compact)
            out.append(("," if i < len(obj) - 1 else "") + nl)
        out.append(pad + "]")
    else:
        out.append(_json_token(obj))


def to_json(report: Any, compact: bool = False) -> str:
    out: list[str] = []
    _write_json(report, out, 0, compact)
    return "".join(out) + ("" if compact else "\n")


def report_rows(report: Any) -> list[dict[str, Any]]:
    """Rows for tabular output.

    A report with a `rows` field tabulates those rows; a bare sequence
    tabulates its elements; anything else becomes a single row.
    """
    obj = _as_mapping(report)
    if isinstance(obj, dict) and "rows" in obj and isinstance(
            obj["rows"], (list, tuple)):
        seq: list[Any] = list(obj["rows"])
    elif isinstance(report, (list, tuple)):
        seq = list(report)
    else:
        seq = [report]
    rows = []
    for item in seq:
        item = _as_mapping(item)
        if not isinstance(item, dict):
            item = {"value": item}
        rows.append(item)
    return rows


def _cell(value: Any) -> str:
    if _is_scalar(value):
        return render_value(value)
    return to_json(value, compact=True)


def _row_type_header(report: Any) -> list[str]:
    """Header for an empty `rows` field, read off its type annotation."""
    if not (dataclasses.is_dataclass(report) and not isinstance(report, type)):
        return []
    try:
        hints = typing.get_type_hints(type(report))
        args = typing.get_args(hints.get("rows"))
        if args and dataclasses.is_dataclass(args[0]):
            return [f.name for f in dataclasses.fields(args[0])]
    except Exception:
        pass
    return []


def to_csv(report: Any) -> str:
    rows = report_rows(report)
    header: list[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(str(key))
    if not header:
        header = _row_type_header(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(key)) for key in header])
    return buf.getvalue()


def csv_header_for(row_type: type) -> list[str]:
    return [f.name for f in dataclasses.fields(row_type)]


def empty_csv(row_type: type) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(csv_header_for(row_type))
    return buf.getvalue()


def _write_text(obj: Any, out: list[str], indent: int) -> None:
    obj = _as_mapping(obj)
    pad = "  " * indent
    if isinstance(obj, dict):
        for key, value in obj.items():
            unwrapped = _as_mapping(value)
            if _is_scalar(value):
                out.append(f"{pad}{key}: {render_value(value)}\n")
            elif isinstance(unwrapped, (list, tuple)) and all(
                    _is_scalar(v) for v in unwrapped):
                inline = ", ".join(render_value(v) for v in unwrapped)
                out.append(f"{pad}{key}: [{inline}]\n")
            else:
                out.append(f"{pad}{key}:\n")
                _write_text(value, out, indent + 1)
    elif isinstance(obj, (list, tuple)):
        for i, value in enumerate(obj):
            if _is_scalar(value):
                out.append(f"{pad}- {render_value(value)}\n")
            else:
                out.append(f"{pad}[{i}]\n")
                _write_text(value, out, indent + 1)
    else:
        out.append(f"{pad}{render_value(obj)}\n")


def to_text(report: Any) -> str:
    out: list[str] = []
    _write_text(report, out, 0)
    return "".join(out)


def emit_report(report: Any, format: str = "json") -> bytes:
    """Serialize a report to bytes in the requested format."""
    if format == "json":
        text = to_json(report)
    elif format == "csv":
        text = to_csv(report)
    elif format == "text":
        text = to_text(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    return text.encode("utf-8")


def write_report(report: Any, format: str, path: str | None) -> None:
    """Emit to a file (or stdout when path is None), with path context."""
    data = emit_report(report, format)
    if path is None:
        import sys

        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
