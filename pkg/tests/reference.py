"""Independent reference computations used by the tests.

Nothing here goes through the package's normalized log iteration: counts are
carried as high-precision floats with unbounded exponent range and the
entropy is read off directly as ln(total count) / ball size.
"""

import itertools
import math

import mpmath
import numpy as np

mpmath.mp.dps = 80


def raw_entropy(d, k, equations, n=None, initial=None):
    """ln(sum_i gamma_i(n)) / |E_n| with gamma iterated in mpmath.

    ``equations[i]`` is a list of (exponents, coefficient) pairs.
    """
    if n is None:
        n = 80 if d == 2 else max(12, int(70 / math.log10(d)))
    gam = [mpmath.mpf(sum(c for _, c in eq)) for eq in equations] if initial is None else list(map(mpmath.mpf, initial))
    for _ in range(n - 1):
        new = []
        for eq in equations:
            total = mpmath.mpf(0)
            for e, c in eq:
                term = mpmath.mpf(c)
                for g, x in zip(gam, e):
                    if x:
                        term *= g**x
                total += term
            new.append(total)
        gam = new
    total = sum(gam)
    if total == 0:
        return 0.0
    size = n + 1 if d == 1 else (d ** (n + 1) - 1) // (d - 1)
    return float(mpmath.log(total) / size)


def snre_entropy(f, n=None):
    return raw_entropy(f.d, f.k, [list(eq.terms) for eq in f.equations], n, f.initial)


def indicator_entropy(va, vb, n=80):
    mons = [(2, 0), (1, 1), (0, 2)]
    eqs = [[(m, c) for m, c in zip(mons, v) if c] for v in (va, vb)]
    return raw_entropy(2, 2, eqs, n)


def spectral_entropy(matrix):
    """ln of the spectral radius of a non-negative matrix."""
    rho = max(abs(np.linalg.eigvals(np.array(matrix, dtype=float))))
    return math.log(rho)


def saturating_counts(f, n_max):
    """Counts truncated at 2 (0, 1 or 'at least 2'); min(x, 2) commutes with + and *."""
    sat = lambda x: min(x, 2)
    gam = [sat(x) for x in f.initial]
    out = [tuple(gam)]
    for _ in range(n_max - 1):
        new = []
        for eq in f.equations:
            total = 0
            for e, c in eq.terms:
                term = sat(c)
                for g, x in zip(gam, e):
                    for _ in range(x):
                        term = sat(term * g)
                total = sat(total + term)
            new.append(total)
        gam = new
        out.append(tuple(gam))
    return out


ALL_TUPLES_22 = [(1, 1), (1, 2), (2, 1), (2, 2)]


def nonempty_subsets(items):
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def all_basic_sets_22():
    """The 225 basic sets on two symbols with non-empty B^(1) and B^(2)."""
    from treeshift import BasicSet

    subsets = list(nonempty_subsets(ALL_TUPLES_22))
    return [BasicSet(2, 2, (frozenset(x), frozenset(y))) for x in subsets for y in subsets]
