"""Result records and their text, CSV and NDJSON renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

from .api import Analysis
from .classify import PRECEDENCE
from .snre import Snre, monomial_count

MAX_INDICATOR_LENGTH = 4096  # longer indicator vectors are left out of records

# Column order of CSV output and key order of NDJSON output.
FIELDS = (
    "id", "d", "k", "indicators", "types", "primary", "provenance", "entropy", "residual",
    "units", "iterations", "method", "log_degree", "degree", "empty", "flags",
)


@dataclass(frozen=True)
class ResultRecord:
    id: str
    d: int
    k: int
    indicators: list
    types: list
    primary: str | None
    provenance: str | None
    entropy: float
    residual: float
    units: str
    iterations: int
    method: str
    log_degree: float
    degree: float
    empty: bool
    flags: list

    def __post_init__(self):
        if not (math.isfinite(self.entropy) and math.isfinite(self.residual)):
            raise ValueError("entropy and residual must be finite")

    def as_dict(self) -> dict:
        d = asdict(self)
        return {key: d[key] for key in FIELDS}


def make_record(ident: str, f: Snre, analysis: Analysis, bits: bool = False) -> ResultRecord:
    r, label = analysis.result, analysis.label
    scale = math.log(2) if bits else 1.0
    small = monomial_count(f.d, f.k) <= MAX_INDICATOR_LENGTH
    indicators = [list(v) for v in f.indicators()] if small else []
    return ResultRecord(
        id=ident,
        d=f.d,
        k=f.k,
        indicators=indicators,
        types=[x for x in PRECEDENCE if label and x in label.applicable],
        primary=label.primary if label else None,
        provenance=label.provenance if label else None,
        entropy=float(r.h) / scale,
        residual=float(r.residual) / scale,
        units="bits" if bits else "nats",
        iterations=r.iterations,
        method=r.method,
        log_degree=float(r.log_degree),
        degree=float(r.degree),
        empty=r.empty,
        flags=sorted(r.flags),
    )


def to_ndjson(records) -> str:
    return "".join(json.dumps(rec.as_dict()) + "\n" for rec in records)


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ";".join(_cell(v) if not isinstance(v, list) else "".join(map(str, v)) for v in value)
    if value is None:
        return ""
    return str(value)


def to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for rec in records:
        row = rec.as_dict()
        writer.writerow([_cell(row[key]) for key in FIELDS])
    return buf.getvalue()


def to_text(rec: ResultRecord, f: Snre) -> str:
    types = ",".join(rec.types) or "undecided"
    lines = [
        f"input: {rec.id}",
        f"system (d={rec.d}, k={rec.k}):",
        *("  " + line for line in str(f).splitlines()),
        f"type: {types}" + (f" (primary {rec.primary}, {rec.provenance})" if rec.primary else ""),
        f"entropy: {rec.entropy:.12f} {rec.units} (residual {rec.residual:.1e}, "
        f"{rec.method}, {rec.iterations} iterations)",
        f"degree: ln kappa = {rec.log_degree:.6f}, kappa = {rec.degree:.6f}",
        f"flags: {', '.join(rec.flags) or 'none'}",
    ]
    return "\n".join(lines) + "\n"
