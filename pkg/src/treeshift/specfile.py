"""Line-oriented input format.

    # golden mean shift on the binary tree
    d=2
    k=2
    forbid 2 * 2

Directives (``#`` starts a comment, blank lines are ignored):

    d=<int>                 number of generators
    k=<int>                 number of symbols
    forbid <a> <g> <b>      symbol b may not follow a along generator g (``*`` = every generator)
    block <i>: <i_1> ... <i_d>    an admissible child tuple under root symbol i
    snre <i>: [<c> *] <monomial> [+ ...]    a term of the equation for symbol i

Monomials are products of symbol names with optional exponents, e.g.
``a^2``, ``a*b`` or ``x3^2*x1`` (``a`` is symbol 1, ``xN`` is symbol N).
A file uses exactly one of forbid, block and snre.  A file with none of them
describes the full shift.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ValidationError
from .sft import ANY, Alphabet, BasicSet, ForbiddenSet, forbidden_to_basic
from .snre import Snre, build_snre

MAX_D = 64
MAX_K = 64
MAX_COEFFICIENT = 10**12
MAX_TUPLES = 2**20  # largest k**d for which a basic set is expanded

_INT = re.compile(r"[0-9]{1,6}")
_SETTING = re.compile(r"^([dk])\s*=\s*(\S+)$")
_FACTOR = re.compile(r"^(?:([a-z])|x([0-9]{1,3}))(?:\^([0-9]{1,3}))?$")


@dataclass(frozen=True)
class SpecFile:
    d: int
    k: int
    style: str  # forbid, block or snre
    forbidden: ForbiddenSet | None = None
    basic: BasicSet | None = None
    system: Snre | None = None

    def basic_set(self) -> BasicSet | None:
        if self.basic is not None:
            return self.basic
        if self.forbidden is not None:
            if self.k**self.d > MAX_TUPLES:
                raise ValidationError(f"k^d = {self.k}^{self.d} tuples is too many to expand")
            return forbidden_to_basic(self.forbidden, Alphabet(self.k))
        return None

    def to_snre(self) -> Snre:
        if self.system is not None:
            return self.system
        return build_snre(self.basic_set())


def _int(token: str, what: str, line: int) -> int:
    if not _INT.fullmatch(token):
        raise ValidationError(f"expected a non-negative integer for {what}, got {token!r}", line)
    return int(token)


def _symbol(token: str, k: int, line: int) -> int:
    s = _int(token, "symbol", line)
    if not 1 <= s <= k:
        raise ValidationError(f"symbol {s} out of range 1..{k}", line)
    return s


def _monomial(text: str, d: int, k: int, line: int) -> tuple[tuple[int, ...], int]:
    factors = [x.strip() for x in text.split("*")]
    coef = 1
    if factors and _INT.fullmatch(factors[0]):
        coef = int(factors.pop(0))
        if coef < 1:
            raise ValidationError("coefficients must be positive", line)
    if not factors or any(not x for x in factors):
        raise ValidationError(f"malformed monomial {text.strip()!r}", line)
    exps = [0] * k
    for x in factors:
        m = _FACTOR.fullmatch(x)
        if not m:
            raise ValidationError(f"malformed factor {x!r}", line)
        s = ord(m.group(1)) - ord("a") + 1 if m.group(1) else int(m.group(2))
        if not 1 <= s <= k:
            raise ValidationError(f"symbol {x!r} out of range 1..{k}", line)
        exps[s - 1] += int(m.group(3)) if m.group(3) else 1
    if sum(exps) != d:
        raise ValidationError(f"monomial {text.strip()!r} has degree {sum(exps)}, expected {d}", line)
    return tuple(exps), coef


def parse_spec(text) -> SpecFile:
    """Parse a spec file; any problem raises ``ValidationError`` carrying the line number."""
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")
    settings: dict[str, tuple[int, int]] = {}
    decls: list[tuple[str, int, str]] = []
    style = None
    lines = text.splitlines()
    for no, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        m = _SETTING.match(body)
        if m:
            key = m.group(1)
            if key in settings:
                raise ValidationError(f"{key} is set twice", no)
            value = _int(m.group(2), key, no)
            limit = MAX_D if key == "d" else MAX_K
            if not 1 <= value <= limit:
                raise ValidationError(f"{key} must be between 1 and {limit}", no)
            settings[key] = (value, no)
            continue
        word, _, rest = body.replace("\t", " ").partition(" ")
        if word not in ("forbid", "block", "snre"):
            head = word.split(":")[0]
            if head in ("block", "snre"):
                word, rest = head, body[len(head) :]
            else:
                raise ValidationError(f"unknown directive {word!r}", no)
        if style is None:
            style = word
        elif word != style:
            raise ValidationError(f"cannot mix {word!r} lines with {style!r} lines", no)
        decls.append((word, no, rest.strip()))

    for key in ("d", "k"):
        if key not in settings:
            raise ValidationError(f"missing {key}=<int>", len(lines) + 1)
    d, k = settings["d"][0], settings["k"][0]
    style = style or "forbid"

    if style == "forbid":
        triples = set()
        for _, no, rest in decls:
            parts = rest.split()
            if len(parts) != 3:
                raise ValidationError("expected: forbid <a> <g> <b>", no)
            a = _symbol(parts[0], k, no)
            b = _symbol(parts[2], k, no)
            if parts[1] == "*":
                g = ANY
            else:
                g = _int(parts[1], "generator", no)
                if not 1 <= g <= d:
                    raise ValidationError(f"generator {g} out of range 1..{d}", no)
            triples.add((a, g, b))
        hom = bool(triples) and all(g == ANY for _, g, _ in triples)
        return SpecFile(d, k, style, forbidden=ForbiddenSet(d, frozenset(triples), hom))

    if style == "block":
        blocks: dict[int, set] = {}
        for _, no, rest in decls:
            head, sep, tail = rest.partition(":")
            if not sep:
                raise ValidationError("expected: block <i>: <i_1> ... <i_d>", no)
            i = _symbol(head.strip(), k, no)
            children = tail.split()
            if len(children) != d:
                raise ValidationError(f"block needs {d} child symbols, got {len(children)}", no)
            blocks.setdefault(i, set()).add(tuple(_symbol(c, k, no) for c in children))
        return SpecFile(d, k, style, basic=BasicSet.from_dict(d, k, blocks))

    terms: dict[int, dict] = {}
    for _, no, rest in decls:
        head, sep, tail = rest.partition(":")
        if not sep:
            raise ValidationError("expected: snre <i>: <c> * <monomial>", no)
        i = _symbol(head.strip(), k, no)
        for piece in tail.split("+"):
            exps, coef = _monomial(piece, d, k, no)
            eq = terms.setdefault(i, {})
            eq[exps] = eq.get(exps, 0) + coef
            if eq[exps] > MAX_COEFFICIENT:
                raise ValidationError(f"coefficient exceeds {MAX_COEFFICIENT}", no)
    return SpecFile(d, k, style, system=Snre.from_terms(d, k, terms))
