"""Choosing an entropy method for a system."""

from __future__ import annotations

from dataclasses import dataclass

from .classify import TypeLabel, classify_type_22, detect_empirically, is_equal_growth
from .entropy import EntropyResult, entropy_generic
from .errors import UnsupportedCase, ValidationError
from .series import entropy_type_C, entropy_type_D, entropy_type_E, entropy_type_O
from .shifts import chessboard_discrepancy
from .snre import Snre, dead_symbols


@dataclass(frozen=True)
class Analysis:
    label: TypeLabel | None
    result: EntropyResult


def label_for(f: Snre) -> TypeLabel | None:
    """Case-analysis label at (2,2), empirical label elsewhere, None when neither applies."""
    try:
        return classify_type_22(f)
    except UnsupportedCase:
        pass
    if dead_symbols(f):
        return None
    return detect_empirically(f, 40)[0]


def _closed_form(f: Snre, label: TypeLabel | None, tol: float, max_iter: int) -> EntropyResult | None:
    if is_equal_growth(f):
        return entropy_type_E(f)
    if label is None or label.provenance != "theorem-case" or dead_symbols(f):
        return None
    if label.primary == "O":
        return entropy_type_O(f, tol, max_iter)
    if label.primary == "C":
        return entropy_type_C(f, tol, max_iter)
    if label.primary == "D":
        return entropy_type_D(f, label.leader or 1, tol, max_iter)
    return None


def analyze(f: Snre, method: str = "auto", tol: float = 1e-12, max_iter: int = 200) -> Analysis:
    """Label the system and compute its entropy.

    ``method`` is ``generic`` (always iterate), ``closed`` (series or closed
    form only, error if none applies) or ``auto`` (closed form when one
    applies, iteration otherwise).
    """
    if method not in ("auto", "generic", "closed"):
        raise ValidationError(f"unknown method {method!r}")
    if tol <= 0 or max_iter < 2:
        raise ValidationError("need tol > 0 and max_iter >= 2")
    label = label_for(f)
    result = None
    if method != "generic":
        result = _closed_form(f, label, tol, max_iter)
        if result is None and method == "closed":
            raise ValidationError("no closed-form series applies to this system")
    if result is None:
        result = entropy_generic(f, tol, max_iter)
    if chessboard_discrepancy(f):
        result = result.with_flags("corollary-discrepancy")
    return Analysis(label, result)


def entropy(f: Snre, method: str = "auto", tol: float = 1e-12, max_iter: int = 200) -> EntropyResult:
    return analyze(f, method, tol, max_iter).result
