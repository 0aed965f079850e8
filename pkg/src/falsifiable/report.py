"""Serialization of experiment results: JSON reports and CSV tables.

A report has two sections. ``body`` is a pure function of the config and the
seed and is written with sorted keys, so repeated runs are byte-identical.
``meta`` carries the timestamp and runtime, which naturally differ.

Exact rationals are written as ``{"exact": "p/q", "decimal": ...}`` in JSON
and as a ``name`` column holding ``p/q`` beside a ``name_decimal`` column in
CSV; :func:`read_csv` recovers the Fractions.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import __version__
from .checks import Check
from .numerics import fraction_str

FORMAT_VERSION = 1


def encode(value: Any) -> Any:
    """JSON-ready form of a result value."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return {"exact": fraction_str(value), "decimal": float(value)}
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, Check):
        return {
            "tag": value.tag,
            "statement": value.statement,
            "relation": value.relation,
            "lhs": encode(value.lhs),
            "rhs": encode(value.rhs),
            "slack": value.slack,
            "margin": encode(value.margin),
            "holds": value.holds,
        }
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def build_report(scenario: str, config: dict, rows: Sequence[dict], checks: Sequence[Check],
                 runtime: float, extra: dict | None = None) -> dict:
    failed = sum(not c.holds for c in checks)
    body = {
        "format": FORMAT_VERSION,
        "artifact_version": __version__,
        "scenario": scenario,
        "config": config,
        "rows": [encode(r) for r in rows],
        "checks": [encode(c) for c in checks],
        "summary": {"checks": len(checks), "passed": len(checks) - failed, "failed": failed},
    }
    if extra:
        body.update(encode(extra))
    meta = {
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "runtime_seconds": round(runtime, 3),
    }
    return {"body": body, "meta": meta}


def dumps_body(report: dict) -> str:
    return json.dumps(report["body"], sort_keys=True, indent=2)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _csv_cells(row: dict) -> dict[str, str]:
    cells = {}
    for key, value in row.items():
        if isinstance(value, Fraction):
            cells[key] = fraction_str(value)
            cells[f"{key}_decimal"] = repr(float(value))
        elif isinstance(value, float):
            cells[key] = repr(value)
        else:
            cells[key] = str(value)
    return cells


def write_csv(rows: Iterable[dict], stream) -> None:
    rows = [_csv_cells(r) for r in rows]
    header: list[str] = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    writer = csv.DictWriter(stream, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def csv_text(rows: Iterable[dict]) -> str:
    buffer = io.StringIO()
    write_csv(rows, buffer)
    return buffer.getvalue()


def read_csv(stream) -> list[dict]:
    """Rows of a table written by :func:`write_csv`; exact columns come back as Fractions."""
    reader = csv.DictReader(stream)
    fields = reader.fieldnames or []
    exact = {f for f in fields if f"{f}_decimal" in fields}
    return [{k: Fraction(v) if k in exact else v for k, v in row.items()} for row in reader]
