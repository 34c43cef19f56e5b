"""Growth-type labels for recursive count systems.

The four labels describe how the per-symbol counts compare along the
recursion:

    E  every symbol has the same count at every height
    D  one symbol's count is at least every other's at every height
    C  the total count obeys c_n = c_{n-1}**d + g with 0 <= g <= c_{n-1}**d
    O  the leading symbol alternates between heights

For two symbols on the binary tree the label follows from a finite case
analysis of the indicator vectors.  A numerical detector covers everything
else and cross-checks the case analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entropy import NEG_INF, trace
from .errors import UnsupportedCase, ValidationError
from .snre import Snre, dead_symbols, monomials, multinomial

PRECEDENCE = ("E", "O", "C", "D")

# normalized (2,2) indicator pairs, larger count first
OSCILLATING = {((0, 1, 1), (1, 0, 0))}
COOPERATING = {
    ((0, 2, 1), (1, 0, 0)),
    ((0, 2, 1), (1, 1, 0)),
    ((1, 2, 0), (0, 1, 1)),
}

EQUAL_TOL = 1e-12
LEAD_TOL = 1e-9


@dataclass(frozen=True)
class TypeLabel:
    applicable: frozenset[str]
    primary: str | None  # None means undecided
    provenance: str
    leader: int | None = None  # dominant symbol (D) or the symbol leading at odd heights (O)

    def __post_init__(self):
        if self.primary is not None and self.primary not in self.applicable:
            raise ValueError("primary label must be applicable")
        if self.primary is None and self.applicable:
            raise ValueError("a non-empty label needs a primary element")

    @property
    def undecided(self) -> bool:
        return self.primary is None

    def __str__(self) -> str:
        return ",".join(x for x in PRECEDENCE if x in self.applicable) or "undecided"


@dataclass(frozen=True)
class RatioTrace:
    log_ratios: tuple[float, ...]  # ln(gamma_1 / gamma_2) for n = 1..N
    pattern: str  # constant-side, alternating or undecided

    def ratios(self) -> list[float]:
        # tau can grow doubly exponentially; out-of-range values saturate
        return [math.exp(x) if x < 709.0 else math.inf for x in self.log_ratios]


def _make_label(labels, provenance, leader=None) -> TypeLabel:
    labels = frozenset(labels)
    primary = next((x for x in PRECEDENCE if x in labels), None)
    return TypeLabel(labels, primary, provenance, leader)


def is_equal_growth(f: Snre) -> bool:
    """All counts coincide at every height: equal item counts and equal starting values."""
    return len(set(f.counts)) == 1 and len(set(f.initial)) == 1


def cooperating_remainder(f: Snre) -> dict | None:
    """Coefficients of ``g = sum_i F_i - (x_1 + ... + x_k)**d`` if all are non-negative, else None."""
    total = {}
    for eq in f.equations:
        for m, c in eq.terms:
            total[m] = total.get(m, 0) + c
    out = {}
    for m in monomials(f.d, f.k):
        g = total.get(m, 0) - multinomial(m)
        if g < 0:
            return None
        if g:
            out[m] = g
    return out


def _from_basic_set(f: Snre) -> bool:
    if f.initial != f.counts:
        return False
    return all(c <= multinomial(m) for eq in f.equations for m, c in eq.terms)


def classify_type_22(f: Snre) -> TypeLabel:
    if (f.d, f.k) != (2, 2):
        raise UnsupportedCase(
            f"case analysis covers d=2, k=2 only (got d={f.d}, k={f.k}); use detect_empirically"
        )
    if not _from_basic_set(f):
        raise UnsupportedCase("case analysis needs the system of a basic set; use detect_empirically")
    dead = dead_symbols(f)
    if len(dead) == 2:
        raise UnsupportedCase("every symbol dies out")
    if dead:
        (alive,) = {1, 2} - dead
        return _make_label({"D"}, "theorem-case", alive)
    labels = set()
    if cooperating_remainder(f) is not None:
        labels.add("C")
    if is_equal_growth(f):
        return _make_label(labels | {"E", "D"}, "theorem-case", 1)
    swap = f.counts[0] < f.counts[1]
    g = f.swapped((2, 1)) if swap else f
    pair = g.indicators()
    if pair in OSCILLATING:
        labels.add("O")
    elif pair in COOPERATING:
        labels.add("C")
    else:
        labels.add("D")
    return _make_label(labels, "theorem-case", 2 if swap else 1)


def _lse(xs) -> float:
    live = [x for x in xs if x > NEG_INF]
    top = max(live)
    return top + math.log(math.fsum(math.exp(x - top) for x in live))


def detect_empirically(f: Snre, steps: int = 40) -> tuple[TypeLabel, RatioTrace]:
    """Label a system from its numerically iterated counts.

    Checks, at every height up to ``steps``: equal offsets (E), one symbol
    never behind after a burn-in of two steps (D), a strictly alternating
    leader in the second half with at least three switches (O), and the
    cooperating inequality for the total count (C).  Returns an empty label
    when nothing fits.
    """
    if steps < 8:
        raise ValidationError("need at least 8 steps")
    if dead_symbols(f):
        raise ValidationError("empirical detection needs every symbol alive (ratios undefined)")
    states = trace(f, steps)
    deltas = [s.delta for s in states]
    labels = set()

    if all(abs(x) <= EQUAL_TOL for dl in deltas for x in dl):
        labels.add("E")

    dominant = [s for s in range(f.k) if all(dl[s] >= -LEAD_TOL for dl in deltas[2:])]
    if dominant:
        labels.add("D")

    leaders = []
    for dl in deltas:
        order = sorted(range(f.k), key=lambda s: dl[s], reverse=True)
        strict = f.k == 1 or dl[order[1]] < -LEAD_TOL
        leaders.append(order[0] if strict else None)
    switches = sum(1 for x, y in zip(leaders, leaders[1:]) if x is not None and y is not None and x != y)
    half = leaders[len(leaders) // 2 :]
    alternating = (
        f.k > 1
        and switches >= 3
        and None not in half
        and all(x != y for x, y in zip(half, half[1:]))
        and all(x == y for x, y in zip(half, half[2:]))
    )
    if alternating:
        labels.add("O")

    coop = True
    for prev, cur in zip(states, states[1:]):
        gap = cur.increment + _lse(cur.delta) - f.d * _lse(prev.delta)
        if not -EQUAL_TOL <= gap <= math.log(2) + EQUAL_TOL:
            coop = False
            break
    if coop:
        labels.add("C")

    leader = None
    if "O" in labels:
        leader = leaders[len(leaders) - 1 - ((len(leaders) - 1) % 2)] + 1  # leader at odd heights
    elif dominant:
        leader = dominant[0] + 1

    log_ratios = tuple(dl[0] - dl[1] for dl in deltas) if f.k >= 2 else ()
    if alternating:
        pattern = "alternating"
    elif f.k >= 2 and (all(x >= -LEAD_TOL for x in log_ratios[2:]) or all(x <= LEAD_TOL for x in log_ratios[2:])):
        pattern = "constant-side"
    else:
        pattern = "undecided"
    return _make_label(labels, "empirical", leader), RatioTrace(log_ratios, pattern)
