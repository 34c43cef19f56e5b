"""Recursive polynomial systems for rooted block counts.

For a basic set ``B`` the number ``gamma[i][n]`` of admissible labelings of
the height-``n`` tree with root symbol ``i`` satisfies

    gamma[i][n] = sum over (i_1..i_d) in B^(i) of prod_j gamma[i_j][n-1]

with ``gamma[*][0] = 1``.  Collecting equal products gives one polynomial per
symbol whose monomials all have total degree ``d``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb

from .errors import ValidationError
from .sft import BasicSet

Monomial = tuple[int, ...]  # exponent vector, one entry per symbol, summing to d


def monomials(d: int, k: int) -> list[Monomial]:
    """All degree-``d`` exponent vectors in canonical order (descending exponent of symbol 1, then 2, ...)."""
    if k == 1:
        return [(d,)]
    return [(first,) + rest for first in range(d, -1, -1) for rest in monomials(d - first, k - 1)]


def canonical_key(e: Monomial) -> tuple[int, ...]:
    return tuple(-x for x in e)


def monomial_count(d: int, k: int) -> int:
    return comb(d + k - 1, k - 1)


def multinomial(e: Monomial) -> int:
    n, out = 0, 1
    for x in e:
        n += x
        out *= comb(n, x)
    return out


def monomial_name(e: Monomial) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    parts = []
    for s, x in enumerate(e):
        name = letters[s] if len(e) <= 26 else f"x{s + 1}"
        if x == 1:
            parts.append(name)
        elif x > 1:
            parts.append(f"{name}^{x}")
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class SnreEquation:
    owner: int
    terms: tuple[tuple[Monomial, int], ...]  # canonical order, coefficients >= 1

    @property
    def count(self) -> int:
        return sum(c for _, c in self.terms)

    def coefficient(self, e: Monomial) -> int:
        for m, c in self.terms:
            if m == e:
                return c
        return 0

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(monomial_name(m) if c == 1 else f"{c}*{monomial_name(m)}" for m, c in self.terms)


@dataclass(frozen=True)
class Snre:
    d: int
    k: int
    equations: tuple[SnreEquation, ...]
    initial: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise ValidationError(f"need d >= 1 and k >= 1, got d={self.d}, k={self.k}")
        if len(self.equations) != self.k:
            raise ValidationError(f"expected {self.k} equations, got {len(self.equations)}")
        for i, eq in enumerate(self.equations, 1):
            if eq.owner != i:
                raise ValidationError(f"equation {i} is owned by symbol {eq.owner}")
            for m, c in eq.terms:
                if len(m) != self.k or sum(m) != self.d or min(m) < 0:
                    raise ValidationError(f"malformed monomial {m} in equation {i}")
                if c < 1:
                    raise ValidationError(f"coefficient {c} in equation {i} must be positive")
        if not self.initial:
            object.__setattr__(self, "initial", tuple(eq.count for eq in self.equations))
        elif len(self.initial) != self.k or min(self.initial) < 0:
            raise ValidationError("initial values must be k non-negative integers")

    @classmethod
    def from_terms(cls, d: int, k: int, terms: dict, initial=()) -> Snre:
        """Build from ``{symbol: {exponents: coefficient}}``; missing symbols get empty equations."""
        eqs = []
        for i in range(1, k + 1):
            raw = {tuple(m): c for m, c in terms.get(i, {}).items() if c}
            for m in raw:
                if len(m) != k or sum(m) != d or min(m) < 0:
                    raise ValidationError(f"malformed monomial {m} for d={d}, k={k}")
            eqs.append(SnreEquation(i, tuple(sorted(raw.items(), key=lambda mc: canonical_key(mc[0])))))
        return cls(d, k, tuple(eqs), tuple(initial))

    @classmethod
    def from_indicators(cls, d: int, k: int, vectors, initial=()) -> Snre:
        basis = monomials(d, k)
        terms = {}
        for i, v in enumerate(vectors, 1):
            if len(v) != len(basis):
                raise ValidationError(f"indicator vector {v} must have {len(basis)} entries")
            terms[i] = {m: c for m, c in zip(basis, v) if c}
        return cls.from_terms(d, k, terms, initial)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(eq.count for eq in self.equations)

    def indicators(self) -> tuple[tuple[int, ...], ...]:
        return tuple(indicator_vector(eq, self.d, self.k) for eq in self.equations)

    def swapped(self, perm) -> Snre:
        """Relabel symbols: new symbol ``s`` is old symbol ``perm[s-1]``."""
        terms = {}
        for new, old in enumerate(perm, 1):
            eq = self.equations[old - 1]
            terms[new] = {tuple(m[p - 1] for p in perm): c for m, c in eq.terms}
        return Snre.from_terms(self.d, self.k, terms, tuple(self.initial[p - 1] for p in perm))

    def evaluate(self, values) -> tuple[int, ...]:
        """One exact step of the recursion."""
        out = []
        for eq in self.equations:
            total = 0
            for m, c in eq.terms:
                p = c
                for v, e in zip(values, m):
                    if e:
                        p *= v**e
                total += p
            out.append(total)
        return tuple(out)

    def __str__(self) -> str:
        return "\n".join(f"gamma_{eq.owner} = {eq}" for eq in self.equations)


def build_snre(b: BasicSet) -> Snre:
    terms = {}
    for i in range(1, b.k + 1):
        tally = Counter()
        for t in b.allowed(i):
            e = [0] * b.k
            for s in t:
                e[s - 1] += 1
            tally[tuple(e)] += 1
        terms[i] = dict(tally)
    return Snre.from_terms(b.d, b.k, terms)


def indicator_vector(eq: SnreEquation, d: int, k: int) -> tuple[int, ...]:
    return tuple(eq.coefficient(m) for m in monomials(d, k))


def exact_counts(f: Snre, n_max: int) -> list[tuple[int, ...]]:
    """Exact integer counts ``gamma[.][n]`` for ``n = 0..n_max``."""
    out = [(1,) * f.k]
    if n_max >= 1:
        out.append(tuple(f.initial))
    while len(out) <= n_max:
        out.append(f.evaluate(out[-1]))
    return out


def induces(f: Snre, a: int, b: int) -> bool:
    return any(m[b - 1] > 0 for m, _ in f.equations[a - 1].terms)


def _edges(f: Snre) -> dict[int, set[int]]:
    return {a: {b for b in range(1, f.k + 1) if induces(f, a, b)} for a in range(1, f.k + 1)}


def connects(f: Snre, a: int, b: int) -> bool:
    """Reachability along a path of at least one edge in the induces digraph."""
    edges = _edges(f)
    seen, stack = set(), list(edges[a])
    while stack:
        x = stack.pop()
        if x == b:
            return True
        if x not in seen:
            seen.add(x)
            stack.extend(edges[x])
    return False


def components(f: Snre) -> list[frozenset[int]]:
    """Strongly connected components of the induces digraph, sources first."""
    edges = _edges(f)
    reach = {a: {b for b in edges if connects(f, a, b)} | {a} for a in edges}
    comps = []
    for a in edges:
        comp = frozenset(b for b in reach[a] if a in reach[b])
        if comp not in comps:
            comps.append(comp)
    # a component precedes every component it reaches
    comps.sort(key=lambda c: -len(reach[next(iter(c))]))
    return comps


def is_chain(f: Snre) -> bool:
    """True when every pair of components is ordered by reachability (a single chain)."""
    comps = components(f)
    reps = [next(iter(c)) for c in comps]
    return all(connects(f, x, y) or connects(f, y, x) for i, x in enumerate(reps) for y in reps[i + 1 :])


@dataclass(frozen=True)
class SymbolClassification:
    essential: frozenset[int]
    inessential: frozenset[int]
    dead: frozenset[int]
    steps_used: int


def dead_symbols(f: Snre) -> frozenset[int]:
    """Symbols whose counts are eventually zero."""
    dead = {i for i in range(1, f.k + 1) if not f.equations[i - 1].terms or f.initial[i - 1] == 0}
    changed = True
    while changed:
        changed = False
        for i in range(1, f.k + 1):
            if i in dead:
                continue
            if all(any(m[s - 1] for s in dead) for m, _ in f.equations[i - 1].terms):
                dead.add(i)
                changed = True
    return frozenset(dead)


def prune_dead(f: Snre, dead=None) -> Snre:
    """Drop every term that involves a dead symbol."""
    dead = dead_symbols(f) if dead is None else dead
    terms = {}
    for eq in f.equations:
        terms[eq.owner] = {m: c for m, c in eq.terms if not any(m[s - 1] for s in dead)}
    return Snre.from_terms(f.d, f.k, terms, f.initial)


def classify_symbols(f: Snre) -> SymbolClassification:
    dead = dead_symbols(f)
    live = prune_dead(f, dead)
    alive = [i for i in range(1, f.k + 1) if i not in dead]
    # Start from the real first-level counts: a dead child can still sit on the
    # last layer, so a symbol like c = a^2 + c^2 with a dead keeps growing.
    # Growth only travels along monomials free of dead symbols.
    current = {i for i in alive if f.initial[i - 1] >= 2}
    steps = 1
    while len(current) < len(alive):
        grown = current | {a for a in alive if any(induces(live, a, b) for b in current)}
        if grown == current:
            break
        current = grown
        steps += 1
    return SymbolClassification(
        essential=frozenset(current),
        inessential=frozenset(alive) - current,
        dead=dead,
        steps_used=steps,
    )
