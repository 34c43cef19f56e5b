"""Entropy tables over indicator-vector pairs for two symbols on the binary tree.

The three tables cover a-equations with 2, 3 and 4 items against b-equations
with fewer items.  ``GOLDEN`` holds the reference values as six-decimal
strings.  They are the output of a finite double-precision procedure rather
than converged limits (see ``truncated_value``), so the converged table
differs from them in most cells.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .api import analyze
from .classify import classify_type_22
from .series import entropy_type_D, entropy_type_O
from .snre import Snre

Vec = tuple[int, int, int]

_ROWS_2 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
_ROWS_3 = _ROWS_2 + [(1, 1, 0), (1, 0, 1), (0, 1, 1), (0, 2, 0)]
_ROWS_4 = _ROWS_3 + [(1, 1, 1), (1, 2, 0), (0, 2, 1)]

TABLES: list[tuple[list[Vec], list[Vec]]] = [
    ([(1, 1, 0), (1, 0, 1), (0, 1, 1), (0, 2, 0)], _ROWS_2),
    ([(1, 1, 1), (1, 2, 0), (0, 2, 1)], _ROWS_3),
    ([(1, 2, 1)], _ROWS_4),
]

# GOLDEN[t][(v_a, v_b)] as printed
_GOLDEN_COLUMNS = [
    {
        (1, 1, 0): ["0.285443", "0.253877", "0.234348"],
        (1, 0, 1): ["0.254262", "0.216424", "0.203677"],
        (0, 1, 1): ["0.214332", "0.252677", "0"],
        (0, 2, 0): ["0.346235", "0.295580", "0"],
    },
    {
        (1, 1, 1): ["0.404347", "0.346538", "0.325765", "0.474630", "0.462992", "0.432619", "0.455134"],
        (1, 2, 0): ["0.429271", "0.372742", "0.346574", "0.490218", "0.480426", "0.451472", "0.472200"],
        (0, 2, 1): ["0.517933", "0.427385", "0", "0.527259", "0.523983", "0.516799", "0.522268"],
    },
    {
        (1, 2, 1): [
            "0.508156", "0.432802", "0.407355", "0.570417", "0.556489",
            "0.507662", "0.537203", "0.625995", "0.633417", "0.611294",
        ],
    },
]

GOLDEN: list[dict[tuple[Vec, Vec], str]] = [
    {(va, vb): cells[r] for va, cells in cols.items() for r, vb in enumerate(rows)}
    for cols, (_, rows) in zip(_GOLDEN_COLUMNS, TABLES)
]

GOLDEN_TOL = 1e-5


@dataclass(frozen=True)
class Cell:
    table: int  # 1-based
    va: Vec
    vb: Vec
    value: float


def cell_system(va: Vec, vb: Vec) -> Snre:
    return Snre.from_indicators(2, 2, [va, vb])


def truncated_value(f: Snre) -> float:
    """Emulate a finite double-precision evaluation of the dominant-symbol series.

    Sums ``ln a_1 + sum_j 2**-j ln(F_a / F_a,lead)`` with the leading monomial
    taken as the one with the highest power of the first symbol, using the
    exact counts rounded to doubles, and stops at the first step where a
    degree-2 monomial overflows.  The series is applied even where the
    first symbol does not lead at every step.  Oscillating systems use the
    twice-iterated series and systems whose dominant series is identically
    zero return 0.  This is a diagnostic that reproduces the golden values,
    not an entropy method.
    """
    label = classify_type_22(f)
    if label.primary == "O":
        return entropy_type_O(f).h
    if "D" in label.applicable and entropy_type_D(f, label.leader or 1).h == 0.0:
        return 0.0
    va = f.indicators()[0]
    lead = next(i for i, c in enumerate(va) if c)
    a, b = f.initial
    total = math.log(a)
    j = 1
    while True:
        fa, fb = float(a), float(b)
        mons = [fa * fa, fa * fb, fb * fb]
        if any(math.isinf(x) for x in mons):
            break
        r = sum(c * x for c, x in zip(va, mons)) / mons[lead]
        total += 2.0**-j * math.log(r)
        j += 1
        a, b = f.evaluate((a, b))
    return total / 4


def compute_tables(procedure: str = "limit", method: str = "auto", tol: float = 1e-12, max_iter: int = 200):
    """All cells in table order; computed concurrently, returned in a fixed order."""
    jobs = [(t, va, vb) for t, (cols, rows) in enumerate(TABLES, 1) for va in cols for vb in rows]

    def run(job):
        t, va, vb = job
        f = cell_system(va, vb)
        if procedure == "truncated":
            value = truncated_value(f)
        elif procedure == "limit":
            value = analyze(f, method, tol, max_iter).result.h
        else:
            raise ValueError(f"unknown procedure {procedure!r}")
        return Cell(t, va, vb, value)

    with ThreadPoolExecutor(max_workers=4) as pool:
        return list(pool.map(run, jobs))


def vec_name(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def tables_csv(cells: list[Cell], scale: float = 1.0) -> str:
    by_key = {(c.table, c.va, c.vb): c.value for c in cells}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for t, (cols, rows) in enumerate(TABLES, 1):
        if t > 1:
            buf.write("\n")
        writer.writerow(["v_b\\v_a"] + [vec_name(v) for v in cols])
        for vb in rows:
            writer.writerow([vec_name(vb)] + [f"{by_key[(t, va, vb)] / scale:.6f}" for va in cols])
    return buf.getvalue()


def golden_diff(cells: list[Cell], tol: float = GOLDEN_TOL) -> list[str]:
    out = []
    for c in cells:
        expected = GOLDEN[c.table - 1][(c.va, c.vb)]
        gap = abs(c.value - float(expected))
        if gap > tol:
            out.append(
                f"table {c.table} v_a={vec_name(c.va)} v_b={vec_name(c.vb)}: "
                f"got {c.value:.6f}, expected {expected} (diff {gap:.2e})"
            )
    return out
