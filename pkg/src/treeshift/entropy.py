"""Log-domain iteration of a recursive count system and the generic entropy limit.

Raw log-counts grow like ``d**n``, so the iteration stores them as a shared
magnitude ``M_n = max_i ln gamma[i][n]`` plus non-positive offsets
``delta_i = ln gamma[i][n] - M_n``.  One step only needs the offsets:

    ln gamma[i][n] = d * M_{n-1} + ln sum_m c_m exp(sum_j e_mj delta_j)

and the entropy is read off from ``s_n = M_n / d**n``, which is updated by the
bounded increment ``L_n / d**n`` where ``L_n = M_n - d * M_{n-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, ValidationError
from .snre import Snre, classify_symbols, dead_symbols

NEG_INF = -math.inf
EPS = 2.0**-52

FLAGS = frozenset(
    {
        "empty",
        "dead-symbols",
        "corollary-discrepancy",
        "normalization-discrepancy",
        "cesaro",
        "fallback-generic",
        "unverified",
    }
)

METHODS = ("generic-iteration", "E-closed-form", "D-series", "C-series", "O-series", "linear-1d")


@dataclass(frozen=True)
class LogState:
    n: int
    magnitude: float  # M_n
    log_magnitude: float  # ln M_n, -inf when M_n == 0
    scaled: float  # M_n / d**n
    delta: tuple[float, ...]
    increment: float  # L_n

    @property
    def empty(self) -> bool:
        return all(x == NEG_INF for x in self.delta)

    def log_counts(self) -> tuple[float, ...]:
        return tuple(self.magnitude + x for x in self.delta)

    def log_total(self) -> float:
        live = [x for x in self.delta if x > NEG_INF]
        if not live:
            return NEG_INF
        return self.magnitude + math.log(math.fsum(math.exp(x) for x in live))


@dataclass(frozen=True)
class EntropyResult:
    h: float
    residual: float
    iterations: int
    method: str
    log_degree: float = 0.0
    degree: float = 1.0
    empty: bool = False
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not self.flags <= FLAGS:
            raise ValueError(f"unknown flags {sorted(self.flags - FLAGS)}")
        if not (self.h >= 0 and self.residual >= 0 and math.isfinite(self.h)):
            raise ValueError(f"invalid entropy result h={self.h}, residual={self.residual}")

    def with_flags(self, *extra) -> EntropyResult:
        return EntropyResult(
            self.h, self.residual, self.iterations, self.method, self.log_degree, self.degree,
            self.empty, self.flags | frozenset(extra),
        )


@lru_cache(maxsize=4096)
def _compiled(f: Snre):
    out = []
    for eq in f.equations:
        if eq.terms:
            exps = np.array([m for m, _ in eq.terms], dtype=float)
            coef = np.array([c for _, c in eq.terms], dtype=float)
        else:
            exps = np.zeros((0, f.k))
            coef = np.zeros(0)
        out.append((exps, coef))
    return out


def log_values(f: Snre, delta) -> np.ndarray:
    """``ln F_i(exp(delta))`` for every equation, with dead offsets (-inf) masked out."""
    delta = np.asarray(delta, dtype=float)
    dead = np.isneginf(delta)
    live = ~dead
    values = np.full(f.k, NEG_INF)
    for i, (exps, coef) in enumerate(_compiled(f)):
        if not len(coef):
            continue
        keep = ~(exps[:, dead] > 0).any(axis=1)
        if not keep.any():
            continue
        t = exps[keep][:, live] @ delta[live]
        top = t.max()
        values[i] = top + math.log(float(np.dot(coef[keep], np.exp(t - top))))
    return values


def _log_magnitude(magnitude: float, prev_log: float, d: int, increment: float) -> float:
    if math.isfinite(magnitude):
        return math.log(magnitude) if magnitude > 0 else NEG_INF
    # past the float range: M_n = M_{n-1} (d + L_n / M_{n-1}) and L_n / M_{n-1} is negligible
    if prev_log == NEG_INF:
        return math.log(increment) if increment > 0 else NEG_INF
    x = d + increment * math.exp(-prev_log)
    return prev_log + math.log(x) if x > 0 else NEG_INF


def initial_state(f: Snre) -> LogState:
    values = [math.log(x) if x > 0 else NEG_INF for x in f.initial]
    top = max(values)
    if top == NEG_INF:
        return LogState(1, 0.0, NEG_INF, 0.0, tuple(values), NEG_INF)
    delta = tuple(v - top for v in values)
    return LogState(1, top, math.log(top) if top > 0 else NEG_INF, top / f.d, delta, top)


def iterate_log(f: Snre, state: LogState) -> LogState:
    n = state.n + 1
    if state.empty:
        return LogState(n, state.magnitude, state.log_magnitude, state.scaled, state.delta, NEG_INF)
    values = log_values(f, state.delta)
    top = float(values.max())
    if top == NEG_INF:
        return LogState(n, state.magnitude, state.log_magnitude, state.scaled, tuple(values), NEG_INF)
    delta = tuple(float(v) - top for v in values)
    magnitude = f.d * state.magnitude + top
    return LogState(
        n=n,
        magnitude=magnitude,
        log_magnitude=_log_magnitude(magnitude, state.log_magnitude, f.d, top),
        scaled=state.scaled + top / f.d**n,
        delta=delta,
        increment=top,
    )


def trace(f: Snre, steps: int) -> list[LogState]:
    """States for ``n = 1..steps``."""
    states = [initial_state(f)]
    while len(states) < steps:
        states.append(iterate_log(f, states[-1]))
    return states


def increment_bound(f: Snre) -> float:
    """Upper bound on ``L_n``: the offsets are non-positive, so no step exceeds the largest count."""
    return math.log(max(max(f.counts), 1))


def tail_bound(d: int, n: int, bound: float, growth: float) -> float:
    """Bound on ``sum_{m > n} |L_m| / d**m`` when ``|L_m| <= bound + growth * (m - n)``."""
    scale = d ** -float(n)
    return scale * (bound / (d - 1) + growth * d / (d - 1) ** 2)


EXACT_DEGREE_BITS = 1 << 16  # exact counts are used while they fit in this many bits


def _log_log_points(f: Snre, steps: int) -> list[tuple[int, float]]:
    """``(n, ln ln max_i gamma[i][n])`` for ``n = 1..steps``.

    For slowly growing systems ``M_n = d M_{n-1} + L_n`` cancels almost
    completely and floating-point errors grow like ``d**n``, so exact integer
    counts are used as long as they stay small.  Once they get large the growth
    is doubly exponential and the float trace is accurate.
    """
    pts = []
    values = tuple(f.initial)
    n = 1
    while n <= steps:
        top = max(values)
        if top.bit_length() > EXACT_DEGREE_BITS:
            break
        if top > 1:
            pts.append((n, math.log(math.log(top))))
        values = f.evaluate(values)
        n += 1
    if n <= steps:
        pts += [(s.n, s.log_magnitude) for s in trace(f, steps)[n - 1 :] if s.log_magnitude > NEG_INF]
    return pts


def degree_estimate(f: Snre, steps: int = 60) -> tuple[float, float]:
    """Least-squares growth rate of ``ln M_n`` over the last half of the trace; returns ``(ln kappa, kappa)``."""
    if len(dead_symbols(f)) == f.k:
        raise ValidationError("degree is undefined: every symbol dies out")
    if not classify_symbols(f).essential:
        return 0.0, 1.0
    steps = max(steps, 8)
    pts = [p for p in _log_log_points(f, steps) if p[0] > steps // 2]
    if len(pts) < 2:
        return 0.0, 1.0
    x, y = np.array(pts).T
    slope = float(np.polyfit(x, y, 1)[0])
    return slope, math.exp(slope)


def _result(f: Snre, h, residual, iterations, method, flags=(), empty=False, degree=None) -> EntropyResult:
    flags = set(flags)
    dead = dead_symbols(f)
    if dead and len(dead) < f.k:
        flags.add("dead-symbols")
    if empty:
        flags.add("empty")
        log_deg, kappa = 0.0, 1.0
    elif degree is not None:
        log_deg, kappa = degree
    else:
        log_deg, kappa = degree_estimate(f)
    cap = math.log(max(max(f.counts), max(f.initial), 1))
    if f.d > 1:
        cap /= f.d
    if h > cap + 1e-9 + residual:
        raise ArithmeticError(f"entropy {h} exceeds the a-priori bound {cap}")
    return EntropyResult(max(float(h), 0.0), float(residual), iterations, method, log_deg, kappa, empty, frozenset(flags))


def empty_result(f: Snre, iterations: int, method: str) -> EntropyResult:
    return _result(f, 0.0, 0.0, iterations, method, empty=True)


def entropy_generic(f: Snre, tol: float = 1e-12, max_iter: int = 200) -> EntropyResult:
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if f.d == 1:
        return entropy_linear(f, tol, max_iter)
    d = f.d
    state = initial_state(f)
    if state.empty:
        return empty_result(f, 1, "generic-iteration")
    up = increment_bound(f)
    sizes = [abs(state.increment)]
    tail = math.inf
    while state.n < max_iter:
        prev, state = state, iterate_log(f, state)
        if state.empty:
            return empty_result(f, state.n, "generic-iteration")
        if state.delta == prev.delta:
            # fixed offsets repeat the same increment forever: sum the tail exactly
            h = (state.scaled + state.increment * d ** -float(state.n) / (d - 1)) * (d - 1) / d
            return _result(f, h, 2 * state.n * EPS * max(abs(h), 1.0), state.n, "generic-iteration")
        sizes.append(abs(state.increment))
        recent = sizes[-4:]
        growth = max(0.0, max(b - a for a, b in zip(recent, recent[1:])))
        bound = max(up, max(sizes))
        tail = tail_bound(d, state.n, bound, growth)
        if state.n >= 3 and tail * (d - 1) / d < tol:
            break
    residual = tail * (d - 1) / d
    if residual >= tol:
        raise ConvergenceError(
            f"tail bound {residual:.3g} still above tolerance after {state.n} steps", width=residual
        )
    return _result(f, state.scaled * (d - 1) / d, residual, state.n, "generic-iteration")


def _period(xs: list[float], max_period: int) -> int | None:
    for p in range(1, max_period + 1):
        window = xs[-4 * p :]
        if len(window) < 4 * p:
            return None
        if all(abs(window[i] - window[i + p]) <= 1e-14 * (1 + abs(window[i])) for i in range(len(window) - p)):
            return p
    return None


def entropy_linear(f: Snre, tol: float = 1e-12, max_iter: int = 200) -> EntropyResult:
    """One generator: the counts follow a linear recursion and ``h`` is the log of its spectral radius.

    Power iteration in normalized form.  For a positive vector ``x`` the
    ratios ``(A x)_i / x_i`` bracket the spectral radius, which certifies the
    result.  If the increments settle into an exact cycle (imprimitive
    matrices), their average over one period is returned instead.
    """
    if f.d != 1:
        raise ValidationError("linear iteration needs d = 1")
    state = initial_state(f)
    if state.empty:
        return empty_result(f, 1, "linear-1d")
    increments = []
    width = math.inf
    while state.n < max_iter:
        values = log_values(f, state.delta)
        live = [i for i in range(f.k) if values[i] > NEG_INF]
        if not live:
            return empty_result(f, state.n + 1, "linear-1d")
        ratios = [values[i] - state.delta[i] for i in live if state.delta[i] > NEG_INF]
        if ratios and all(state.delta[i] > NEG_INF for i in live):
            lo, hi = min(ratios), max(ratios)
            width = hi - lo
            if width < 2 * tol:
                return _result(f, max((lo + hi) / 2, 0.0), width / 2, state.n, "linear-1d")
        state = iterate_log(f, state)
        increments.append(state.increment)
        p = _period(increments, f.k) if len(increments) >= 8 else None
        if p is not None and p > 1:
            last = increments[-p:]
            prev = increments[-2 * p : -p]
            h = math.fsum(last) / p
            spread = abs(h - math.fsum(prev) / p)
            return _result(f, max(h, 0.0), spread + 1e-15 * p, state.n, "linear-1d", flags={"cesaro"})
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} steps; last bracket width {width:.3g}", width=width
    )
