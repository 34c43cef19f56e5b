"""Named families: golden mean shifts, k-colored chessboards, and the free-group golden mean shift."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

from .entropy import EntropyResult, degree_estimate, entropy_generic, initial_state, iterate_log, log_values
from .errors import ConsistencyError, UnsupportedCase, ValidationError
from .series import d_series
from .sft import BasicSet, ForbiddenSet, free_ball_size
from .snre import Snre, build_snre


def gms_basic(d: int, k: int = 2) -> BasicSet:
    """Hom-shift in which the last symbol may not sit next to itself."""
    if d < 1 or k < 2:
        raise ValidationError(f"golden mean shift needs d >= 1 and k >= 2, got d={d}, k={k}")
    every = frozenset(itertools.product(range(1, k + 1), repeat=d))
    avoid = frozenset(t for t in every if k not in t)
    return BasicSet(d, k, (every,) * (k - 1) + (avoid,))


def gms_forbidden(d: int, k: int = 2) -> ForbiddenSet:
    return ForbiddenSet.hom_shift(d, [(k, k)])


def chessboard_basic(d: int, k: int) -> BasicSet:
    """Hom-shift in which no symbol may sit next to itself."""
    if d < 1 or k < 1:
        raise ValidationError(f"need d >= 1 and k >= 1, got d={d}, k={k}")
    if k == 1:
        warnings.warn("a one-colored chessboard is the empty shift", stacklevel=2)
    every = list(itertools.product(range(1, k + 1), repeat=d))
    return BasicSet(d, k, tuple(frozenset(t for t in every if i not in t) for i in range(1, k + 1)))


def is_chessboard(f: Snre) -> bool:
    return f.k > 1 and f == build_snre(chessboard_basic(f.d, f.k))


def chessboard_discrepancy(f: Snre) -> bool:
    """True for chessboards where ``ln(k-1)`` and ``d * ln(k-1)`` differ."""
    return f.d >= 2 and f.k >= 3 and is_chessboard(f)


@dataclass(frozen=True)
class FreeGroupGms:
    """Golden mean shift on the free group of rank ``d``.

    Away from the identity every element has ``q = 2d - 1`` children (one per
    generator or inverse except the one leading back), so subtrees follow the
    golden mean system on ``q`` generators.  The identity has ``2d`` children.
    """

    d: int
    k: int = 2

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError("free-group golden mean shift needs rank d >= 2")
        if self.k < 2:
            raise ValidationError("need at least two symbols")

    @property
    def q(self) -> int:
        return 2 * self.d - 1

    @property
    def interior(self) -> Snre:
        return build_snre(gms_basic(self.q, self.k))

    @property
    def root(self) -> Snre:
        """Counts at the identity, one level above an interior layer: degree ``2d``."""
        return build_snre(gms_basic(2 * self.d, self.k))


@dataclass(frozen=True)
class FreeGroupReport:
    result: EntropyResult
    series_value: float
    root_corrected: float
    unnormalized_series: float  # A_inf / q**2, off by the factor (q - 1)
    semigroup_value: float  # entropy of the golden mean shift on the q-ary tree
    log_degree: float
    degree: float
    height: int


def root_corrected_entropy(g: FreeGroupGms, height: int = 40) -> float:
    """``ln(count of height-n patterns) / |G_n|`` evaluated through the interior iteration."""
    interior, root = g.interior, g.root
    state = initial_state(interior)
    while state.n < height - 1:
        state = iterate_log(interior, state)
    top = log_values(root, state.delta)
    live = [x for x in top if x > -math.inf]
    peak = max(live)
    log_total = 2 * g.d * state.magnitude + peak + math.log(math.fsum(math.exp(x - peak) for x in live))
    return float(log_total) / free_ball_size(g.d, height)


def fd_gms_entropy(d: int, tol: float = 1e-12, k: int = 2, experimental: bool = False, height: int = 40):
    """Entropy of the free-group golden mean shift, computed two ways.

    The series route sums ``A_inf = ln a_1 + sum_j q**-j ln r_j`` for the
    interior system and normalizes by the free-group ball size, giving
    ``(q - 1) * A_inf / q**2``.  The root-corrected route counts patterns on
    the free-group ball directly at a fixed height.  Returns a report with
    both values; they must agree.
    """
    g = FreeGroupGms(d, k)
    q = g.q
    flags = {"normalization-discrepancy"}
    if k == 2:
        acc, n = d_series(g.interior, 1, tol=tol)
        if n is None:
            raise ConsistencyError("golden mean interior system lost dominance")
        a_inf = acc.value
        residual = acc.tail() * (q - 1) / q**2
        method = "D-series"
    elif experimental:
        semi = entropy_generic(g.interior, tol)
        a_inf = semi.h * q**2 / (q - 1)
        residual, n, method = semi.residual, semi.iterations, semi.method
        flags.add("unverified")
    else:
        raise UnsupportedCase("free-group golden mean shift with k >= 3 needs the experimental flag")
    series_value = a_inf * (q - 1) / q**2
    rooted = root_corrected_entropy(g, height)
    if abs(series_value - rooted) > 10 * max(tol, residual):
        raise ConsistencyError(
            f"series value {series_value!r} and root-corrected value {rooted!r} disagree"
        )
    log_deg, kappa = degree_estimate(g.interior)
    result = EntropyResult(series_value, residual, n, method, log_deg, kappa, False, frozenset(flags))
    semigroup = entropy_generic(g.interior, tol).h
    return FreeGroupReport(result, series_value, rooted, a_inf / q**2, semigroup, log_deg, kappa, height)
