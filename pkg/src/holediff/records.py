"""Record schemas and CSV/JSON emission for the command-line interface.

Every scan row carries exact rational values as "num/den" strings next to a
float rendering with 17 significant digits, so downstream tools never have
to reconstruct rationals from decimals.  CSV output is RFC-4180 style with
a header row; JSON output is a single document with a "records" array and,
where applicable, a "summary" object.  The header names below are the
schema; consumers should validate against them exactly.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from enum import Enum

from .rational import float17, format_rational


class ScanKind(str, Enum):
    POSITIONS = "positions"
    SIZES = "sizes"
    PHI = "phi"
    ESCAPE = "escape"
    SIMULATION = "simulation"
    PO_EXPANSION = "po-expansion"
    DIFFUSION = "diffusion"


SCHEMAS: dict[ScanKind, list[str]] = {
    ScanKind.POSITIONS: ["index", "a1", "a2", "a3", "a4", "D", "D_float"],
    ScanKind.SIZES: ["h", "a1", "a2", "D", "D_float", "J_h", "J_h_float", "extremum"],
    ScanKind.PHI: ["x", "phi", "phi_float"],
    ScanKind.ESCAPE: [
        "index", "a1", "a2", "D", "D_float", "nu", "gamma", "iterations", "residual",
    ],
    ScanKind.SIMULATION: ["n", "msd", "stderr", "survivors"],
    ScanKind.PO_EXPANSION: ["point", "class", "period", "J", "J_float"],
    ScanKind.DIFFUSION: [
        "map", "placement", "a1", "a2", "a3", "a4", "D", "D_float", "D_rw", "D_rw_float",
    ],
}


@dataclass(frozen=True)
class ScanRecord:
    """One output row: a schema kind plus its column values (strings)."""

    kind: ScanKind
    values: dict

    def row(self) -> list[str]:
        return [str(self.values.get(col, "")) for col in SCHEMAS[self.kind]]


def exact_pair(x) -> tuple[str, str]:
    """(exact "num/den", 17-digit float) rendering of a rational."""
    return format_rational(x), float17(x)


def write_csv(records: list[ScanRecord], out) -> None:
    if not records:
        return
    kind = records[0].kind
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCHEMAS[kind])
    for record in records:
        writer.writerow(record.row())


def write_json(records: list[ScanRecord], out, summary: dict | None = None) -> None:
    doc = {"records": [r.values for r in records]}
    if records:
        doc["schema"] = SCHEMAS[records[0].kind]
    if summary is not None:
        doc["summary"] = summary
    json.dump(doc, out, indent=2, default=str)
    out.write("\n")


def emit(records: list[ScanRecord], fmt: str, path: str | None, summary: dict | None = None) -> None:
    """Write records as CSV or JSON to a path ("-" or None means stdout).

    In CSV mode a non-empty summary is printed to stdout as JSON so that a
    file capture of the table stays schema-clean.
    """
    buffer = io.StringIO()
    if fmt == "csv":
        write_csv(records, buffer)
    else:
        write_json(records, buffer, summary)
    text = buffer.getvalue()
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if fmt == "csv" and summary:
        json.dump(summary, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")
