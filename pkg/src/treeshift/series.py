"""Series formulas for the entropy of labeled systems.

Each method rewrites the log-count recursion as a linear recursion driven by
bounded correction terms, and sums the resulting geometric series.

E   all counts equal: gamma_n = c * gamma_{n-1}**d, solved exactly.
D   two symbols, one dominant.  With ``K`` the exponent matrix of the leading
    monomials (highest power of the dominant symbol first),
    v_n = K v_{n-1} + ln r_{n-1} with 1 <= r <= item count.  ``K`` has row sums
    d, so its Perron root is d with right eigenvector (1, 1); projecting onto
    the left eigenvector w gives h = (d-1)/d**2 * (w.v_1 + sum_j d**-j w.ln r_j).
C   the total count satisfies c_n = c_{n-1}**d * (1 + g(x_{n-1})) with x the
    normalized count vector, so h = (d-1)/d**2 * (ln c_1 + sum_j d**-j ln(1 + g(x_j))).
O   two symbols whose lead alternates.  Composing the system with itself
    gives a degree d**2 recursion in which the odd-step leader dominates its
    own leading monomial, and the D argument runs along every second step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classify import LEAD_TOL, cooperating_remainder, is_equal_growth
from .entropy import (
    NEG_INF,
    EntropyResult,
    _result,
    empty_result,
    entropy_generic,
    initial_state,
    iterate_log,
    log_values,
)
from .errors import ConvergenceError, UnsupportedCase, ValidationError
from .snre import Snre, dead_symbols, multinomial


@dataclass
class SeriesAccumulator:
    """Partial sums of a correction series and a bound on what is left."""

    ratio: float  # geometric weight per term
    scale: float  # h = scale * limit of the partial sums
    partial: list[float] = field(default_factory=list)
    log_terms: list[float] = field(default_factory=list)  # the ln r_j, before weighting
    term_bound: float = 0.0

    def add(self, weight: float, log_r: float) -> None:
        self.log_terms.append(log_r)
        self.partial.append(self.partial[-1] + weight * log_r)

    def tail(self) -> float:
        """Bound on the unsummed remainder, given every ``ln r_j`` lies in ``[0, term_bound]``."""
        n = len(self.partial) - 1
        return self.term_bound * self.ratio ** (n + 1) / (1 - self.ratio)

    @property
    def value(self) -> float:
        return self.partial[-1]


@dataclass(frozen=True)
class LinearizedRecursion:
    """Leading-monomial exponents ``K`` and its Perron eigenvectors (right ``u``, left ``w``, ``w.u = 1``)."""

    K: tuple[tuple[int, int], tuple[int, int]]
    u: tuple[float, float]
    w: tuple[float, float]


def _require_two(f: Snre, what: str) -> None:
    if f.k != 2:
        raise UnsupportedCase(f"{what} needs exactly two symbols (got k={f.k})")
    if f.d < 2:
        raise UnsupportedCase(f"{what} needs d >= 2")
    if dead_symbols(f):
        raise ValidationError(f"{what} needs every symbol alive")


def linearize(f: Snre) -> LinearizedRecursion:
    """Exponent matrix of the leading monomials, symbol 1 taken as dominant."""
    d = f.d
    rows = []
    for eq in f.equations:
        if not eq.terms:
            raise ValidationError(f"equation {eq.owner} is empty")
        rows.append(tuple(eq.terms[0][0]))  # canonical order puts the highest power of symbol 1 first
    (p, _), (q, _) = rows
    if p == 0:
        raise ValidationError("the dominant symbol's equation cannot consist of the other symbol alone")
    if p == d:
        w = (1.0, 0.0)
    else:
        w = (q / (q + d - p), (d - p) / (q + d - p))
    return LinearizedRecursion((rows[0], rows[1]), (1.0, 1.0), w)


def entropy_type_E(f: Snre) -> EntropyResult:
    if not is_equal_growth(f):
        raise ValidationError("closed form needs equal counts and equal starting values")
    c, x = f.counts[0], f.initial[0]
    if c == 0 or x == 0:
        return empty_result(f, 0, "E-closed-form")
    d = f.d
    h = ((d - 1) * math.log(x) + math.log(c)) / d**2
    return _result(f, h, 0.0, 0, "E-closed-form")


def _run(f, acc, step_term, tol, max_iter, first_step=1, stride=1):
    """Drive the iteration, feeding each ``stride``-th state to ``step_term``.

    ``step_term`` returns ``ln r`` for the state or None when its runtime
    precondition fails.  Returns the state count or None on failure.
    """
    state = initial_state(f)
    j = 0
    while state.n < first_step:
        state = iterate_log(f, state)
    while True:
        log_r = step_term(state)
        if log_r is None:
            return None
        j += 1
        acc.add(acc.ratio**j, log_r)
        if acc.scale * acc.tail() < tol:
            return state.n
        if state.n + stride > max_iter:
            raise ConvergenceError(
                f"series tail {acc.scale * acc.tail():.3g} above tolerance after {state.n} steps",
                width=acc.scale * acc.tail(),
            )
        for _ in range(stride):
            state = iterate_log(f, state)


def _fallback(f, tol, max_iter):
    return entropy_generic(f, tol, max_iter).with_flags("fallback-generic")


def d_series(f: Snre, dominant: int = 1, max_iter: int = 200, tol: float = 1e-12):
    """Accumulate the dominating-symbol series; returns ``(accumulator, iterations)`` or ``(acc, None)``."""
    _require_two(f, "dominating series")
    g = f.swapped((2, 1)) if dominant == 2 else f
    lin = linearize(g)
    d = g.d
    K = np.array(lin.K, dtype=float)
    w = np.array(lin.w)
    v1 = np.array([math.log(x) for x in g.initial])
    acc = SeriesAccumulator(ratio=1.0 / d, scale=(d - 1) / d**2 * lin.u[0])
    acc.partial.append(float(w @ v1))
    acc.term_bound = max(math.log(c) for c in g.counts)

    def term(state):
        delta = np.array(state.delta)
        if delta[0] < delta[1] - LEAD_TOL:
            return None
        log_r = log_values(g, delta) - K @ delta
        return float(w @ log_r)

    return acc, _run(g, acc, term, tol, max_iter)


def entropy_type_D(f: Snre, dominant: int = 1, tol: float = 1e-12, max_iter: int = 200) -> EntropyResult:
    acc, n = d_series(f, dominant, max_iter, tol)
    if n is None:
        return _fallback(f, tol, max_iter)
    return _result(f, acc.scale * acc.value, acc.scale * acc.tail(), n, "D-series")


def c_series(f: Snre, max_iter: int = 200, tol: float = 1e-12):
    if f.d < 2:
        raise UnsupportedCase("cooperating series needs d >= 2")
    g = cooperating_remainder(f)
    if g is None:
        raise ValidationError("total count is not of cooperating shape")
    d = f.d
    mons = np.array(list(g), dtype=float).reshape(-1, f.k)
    coef = np.array(list(g.values()), dtype=float)
    acc = SeriesAccumulator(ratio=1.0 / d, scale=(d - 1) / d**2)
    acc.partial.append(math.log(sum(f.initial)))
    acc.term_bound = math.log1p(max((c / multinomial(m) for m, c in g.items()), default=0.0))

    def term(state):
        delta = np.array(state.delta)
        live = delta > NEG_INF
        x = np.zeros(f.k)
        x[live] = np.exp(delta[live])
        x /= x.sum()
        return math.log1p(float(coef @ np.prod(x**mons, axis=1))) if len(coef) else 0.0

    return acc, _run(f, acc, term, tol, max_iter)


def entropy_type_C(f: Snre, tol: float = 1e-12, max_iter: int = 200) -> EntropyResult:
    if initial_state(f).empty:
        return empty_result(f, 1, "C-series")
    acc, n = c_series(f, max_iter, tol)
    return _result(f, acc.scale * acc.value, acc.scale * acc.tail(), n, "C-series")


def compose(f: Snre) -> Snre:
    """The system iterated twice: ``H_i = F_i(F_1, ..., F_k)``, of degree ``d**2``."""
    polys = [{m: c for m, c in eq.terms} for eq in f.equations]

    def mul(p, q):
        out = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return out

    def power(p, e):
        out = {(0,) * f.k: 1}
        for _ in range(e):
            out = mul(out, p)
        return out

    terms = {}
    for i, p in enumerate(polys, 1):
        total = {}
        for m, c in p.items():
            prod = {(0,) * f.k: c}
            for s, e in enumerate(m):
                if e:
                    prod = mul(prod, power(polys[s], e))
            for mm, cc in prod.items():
                total[mm] = total.get(mm, 0) + cc
        terms[i] = total
    return Snre.from_terms(f.d**2, f.k, terms, f.evaluate(f.initial))


def o_series(f: Snre, max_iter: int = 200, tol: float = 1e-12):
    _require_two(f, "oscillating series")
    h2 = compose(f)
    dd = f.d**2
    leaders = [s for s in (1, 2) if h2.equations[s - 1].terms and h2.equations[s - 1].terms[0][0][s - 1] == dd]
    if not leaders:
        raise ValidationError("no symbol leads its own twice-iterated equation")
    g = f if leaders[0] == 1 else f.swapped((2, 1))
    h2 = compose(g) if g is not f else h2
    if h2.equations[0].terms[0][0][0] != dd:
        raise ValidationError("no symbol leads its own twice-iterated equation")
    d = g.d
    s1 = initial_state(g)
    parity = 1 if s1.delta[0] >= s1.delta[1] - LEAD_TOL else 2
    start = s1 if parity == 1 else iterate_log(g, s1)
    alpha_p = start.magnitude + start.delta[0]
    acc = SeriesAccumulator(ratio=1.0 / dd, scale=(d - 1) / d ** (parity + 1))
    acc.partial.append(alpha_p)
    acc.term_bound = math.log(h2.equations[0].count)

    def term(state):
        delta = np.array(state.delta)
        if delta[0] < delta[1] - LEAD_TOL:
            return None
        inner = log_values(g, delta)
        return float(log_values(g, inner)[0] - dd * delta[0])

    return acc, _run(g, acc, term, tol, max_iter, first_step=parity, stride=2)


def entropy_type_O(f: Snre, tol: float = 1e-12, max_iter: int = 200) -> EntropyResult:
    acc, n = o_series(f, max_iter, tol)
    if n is None:
        return _fallback(f, tol, max_iter)
    return _result(f, acc.scale * acc.value, acc.scale * acc.tail(), n, "O-series")
