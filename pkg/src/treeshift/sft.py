"""Alphabets, forbidden transitions, basic sets and transition matrices.

Symbols are the integers ``1..k`` and generators are ``1..d``.  A basic set
lists, for every root symbol ``i``, the admissible tuples of child symbols
``(i_1, ..., i_d)`` where child ``j`` hangs off generator ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ValidationError

ANY = 0  # wildcard generator: the transition is forbidden along every generator

_BALL_LIMIT = 1 << 128


@dataclass(frozen=True)
class Alphabet:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValidationError(f"alphabet size must be a positive integer, got {self.k!r}")

    @property
    def symbols(self) -> range:
        return range(1, self.k + 1)


@dataclass(frozen=True)
class ForbiddenSet:
    """Forbidden transitions ``(a, g, b)``: symbol ``b`` may not follow ``a`` along generator ``g``.

    ``g == ANY`` forbids the transition along every generator.  ``hom`` is
    true when every triple is a wildcard, i.e. the same constraint holds in
    every direction.
    """

    d: int
    triples: frozenset[tuple[int, int, int]]
    hom: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise ValidationError(f"generator count must be positive, got {self.d}")
        for a, g, b in self.triples:
            if not (g == ANY or 1 <= g <= self.d):
                raise ValidationError(f"generator {g} out of range 1..{self.d}")
        if self.hom and any(g != ANY for _, g, _ in self.triples):
            raise ValidationError("hom forbidden sets must use wildcard generators only")

    @classmethod
    def hom_shift(cls, d: int, pairs) -> ForbiddenSet:
        return cls(d, frozenset((a, ANY, b) for a, b in pairs), hom=True)

    def forbids(self, a: int, g: int, b: int) -> bool:
        return (a, g, b) in self.triples or (a, ANY, b) in self.triples

    def check(self, alphabet: Alphabet) -> None:
        for a, g, b in self.triples:
            for s in (a, b):
                if not 1 <= s <= alphabet.k:
                    raise ValidationError(f"symbol {s} out of range 1..{alphabet.k}")


@dataclass(frozen=True)
class BasicSet:
    """Admissible 2-blocks: ``blocks[i - 1]`` is the set of child tuples allowed under root ``i``."""

    d: int
    k: int
    blocks: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise ValidationError(f"need d >= 1 and k >= 1, got d={self.d}, k={self.k}")
        if len(self.blocks) != self.k:
            raise ValidationError(f"expected {self.k} block sets, got {len(self.blocks)}")
        for i, tuples in enumerate(self.blocks, 1):
            for t in tuples:
                if len(t) != self.d:
                    raise ValidationError(f"block under symbol {i} has length {len(t)}, expected {self.d}")
                for s in t:
                    if not 1 <= s <= self.k:
                        raise ValidationError(f"symbol {s} out of range 1..{self.k}")

    @classmethod
    def from_dict(cls, d: int, k: int, blocks: dict) -> BasicSet:
        return cls(d, k, tuple(frozenset(map(tuple, blocks.get(i, ()))) for i in range(1, k + 1)))

    def allowed(self, i: int) -> frozenset[tuple[int, ...]]:
        return self.blocks[i - 1]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def is_subset(self, other: BasicSet) -> bool:
        return all(x <= y for x, y in zip(self.blocks, other.blocks))


@dataclass(frozen=True)
class TransitionMatrices:
    """One binary ``k x k`` matrix per generator; ``matrices[g][a-1][b-1] == 1`` allows ``a -> b``."""

    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if not self.matrices:
            raise ValidationError("need at least one matrix")
        k = len(self.matrices[0])
        for m in self.matrices:
            if len(m) != k or any(len(row) != k for row in m):
                raise ValidationError("transition matrices must all be square with the same size")
            if any(x not in (0, 1) for row in m for x in row):
                raise ValidationError("transition matrices must be binary")

    @classmethod
    def of(cls, *mats) -> TransitionMatrices:
        return cls(tuple(tuple(tuple(int(x) for x in row) for row in m) for m in mats))

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def k(self) -> int:
        return len(self.matrices[0])

    @property
    def is_hom(self) -> bool:
        return all(m == self.matrices[0] for m in self.matrices)


def ball_size(d: int, n: int) -> int:
    """Number of nodes of the rooted ``d``-ary tree of height ``n``."""
    if d < 1 or n < 0:
        raise ValidationError(f"need d >= 1 and n >= 0, got d={d}, n={n}")
    size = n + 1 if d == 1 else (d ** (n + 1) - 1) // (d - 1)
    if size >= _BALL_LIMIT:
        raise OverflowError(f"ball size for d={d}, n={n} exceeds 128 bits")
    return size


def free_ball_size(d: int, n: int) -> int:
    """Number of elements of word length at most ``n`` in the free group of rank ``d``."""
    if n == 0:
        return 1
    size = 1 + 2 * d * ball_size(2 * d - 1, n - 1)
    if size >= _BALL_LIMIT:
        raise OverflowError(f"free-group ball size for d={d}, n={n} exceeds 128 bits")
    return size


def full_basic(d: int, k: int) -> BasicSet:
    every = frozenset(itertools.product(range(1, k + 1), repeat=d))
    return BasicSet(d, k, (every,) * k)


def forbidden_to_basic(f: ForbiddenSet, alphabet: Alphabet) -> BasicSet:
    f.check(alphabet)
    k = alphabet.k
    blocks = []
    for i in alphabet.symbols:
        per_gen = [[s for s in alphabet.symbols if not f.forbids(i, g, s)] for g in range(1, f.d + 1)]
        blocks.append(frozenset(itertools.product(*per_gen)))
    return BasicSet(f.d, k, tuple(blocks))


def matrices_to_basic(m: TransitionMatrices) -> BasicSet:
    k = m.k
    blocks = []
    for i in range(k):
        per_gen = [[b + 1 for b in range(k) if mat[i][b]] for mat in m.matrices]
        blocks.append(frozenset(itertools.product(*per_gen)))
    return BasicSet(m.d, k, tuple(blocks))


def _projections(b: BasicSet, i: int) -> list[set[int]]:
    proj = [set() for _ in range(b.d)]
    for t in b.allowed(i):
        for j, s in enumerate(t):
            proj[j].add(s)
    return proj


def is_matrix_representable(b: BasicSet) -> bool:
    """True when every ``B^(i)`` is the Cartesian product of its coordinate projections.

    An empty ``B^(i)`` is representable (a zero row in some matrix).
    """
    for i in range(1, b.k + 1):
        tuples = b.allowed(i)
        if not tuples:
            continue
        proj = _projections(b, i)
        size = 1
        for p in proj:
            size *= len(p)
        if size != len(tuples):
            return False
    return True


def basic_to_matrices(b: BasicSet) -> TransitionMatrices:
    if not is_matrix_representable(b):
        raise ValidationError("basic set is not a product of per-generator constraints")
    mats = [[[0] * b.k for _ in range(b.k)] for _ in range(b.d)]
    for i in range(1, b.k + 1):
        if not b.allowed(i):
            continue  # all-zero row in every matrix
        for j, p in enumerate(_projections(b, i)):
            for s in p:
                mats[j][i - 1][s - 1] = 1
    return TransitionMatrices.of(*mats)
