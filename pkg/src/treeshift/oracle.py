"""Brute-force counting of admissible labelings of small trees.

Nodes of the height-``n`` tree are numbered breadth first: the root is 0 and
the children of node ``p`` are ``p*d + 1 .. p*d + d``.  The search labels the
internal nodes in that order, trying every tuple of child symbols and
keeping it only if it lies in the basic set of the parent's label.  Nothing
here uses the recursion, so agreement with it is a real check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InfeasibleError, ValidationError
from .sft import BasicSet, ball_size
from .snre import build_snre, exact_counts

LABELING_LIMIT = 2**26


def feasible(d: int, k: int, n: int) -> bool:
    return k ** (ball_size(d, n) - 1) <= LABELING_LIMIT


def count_rooted(b: BasicSet, n: int, root_symbol: int) -> int:
    if not 1 <= root_symbol <= b.k:
        raise ValidationError(f"root symbol {root_symbol} out of range 1..{b.k}")
    if n < 0:
        raise ValidationError("height must be non-negative")
    if not feasible(b.d, b.k, n):
        raise InfeasibleError(
            f"{b.k}^{ball_size(b.d, n) - 1} labelings exceed the limit {LABELING_LIMIT}"
        )
    d = b.d
    internal = ball_size(d, n - 1) if n > 0 else 0
    labels = [0] * ball_size(d, n)
    labels[0] = root_symbol
    candidates = list(itertools.product(range(1, b.k + 1), repeat=d))

    def search(p: int) -> int:
        if p == internal:
            return 1
        allowed = b.allowed(labels[p])
        total = 0
        for t in candidates:
            if t not in allowed:
                continue
            labels[p * d + 1 : p * d + d + 1] = t
            total += search(p + 1)
        return total

    return search(0)


@dataclass
class OracleReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)  # (symbol, n, recursion count, brute-force count)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        good = self.checked - len(self.mismatches)
        head = "OK" if self.ok else "MISMATCH"
        return f"{head}: {good}/{self.checked} counts match"


def verify_snre(b: BasicSet, n_max: int) -> OracleReport:
    counts = exact_counts(build_snre(b), n_max)
    report = OracleReport()
    for n in range(1, n_max + 1):
        for i in range(1, b.k + 1):
            brute = count_rooted(b, n, i)
            report.checked += 1
            if brute != counts[n][i - 1]:
                report.mismatches.append((i, n, counts[n][i - 1], brute))
    return report
