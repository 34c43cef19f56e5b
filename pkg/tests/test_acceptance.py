"""One test per acceptance criterion.  Each prints a PASS/FAIL line with its evidence."""

import math
import time

import pytest

from reference import all_basic_sets_22
from treeshift import analyze, build_snre, chessboard_basic, degree_estimate, entropy_generic, fd_gms_entropy, gms_basic
from treeshift.classify import classify_type_22, detect_empirically
from treeshift.cli import main
from treeshift.oracle import verify_snre
from treeshift.snre import Snre, exact_counts
from treeshift.tables import GOLDEN, compute_tables, golden_diff

SWEEP = [build_snre(b) for b in all_basic_sets_22()]


@pytest.fixture
def verdict(capsys):
    def report(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail

    return report


def test_table_reproduction(verdict, capsys):
    start = time.perf_counter()
    code = main(["table", "--d", "2", "--k", "2", "--golden"])
    elapsed = time.perf_counter() - start
    _, err = capsys.readouterr()
    cells = compute_tables()
    diffs = golden_diff(cells)
    zeros = sum(1 for g in GOLDEN for v in g.values() if float(v) == 0)
    worst = max(abs(c.value - float(GOLDEN[c.table - 1][(c.va, c.vb)])) for c in cells)
    ok = code == 0 and not diffs and zeros == 4 and elapsed < 1.0
    verdict(
        "table reproduction",
        ok,
        f"exit {code}, {len(diffs)}/43 cells off by more than 1e-5 (worst {worst:.2e}), "
        f"{zeros} printed zero cells, {elapsed:.2f}s",
    )


def test_oracle_equivalence(verdict):
    start = time.perf_counter()
    checked = mismatches = 0
    for b in all_basic_sets_22():
        report = verify_snre(b, 3)
        checked += report.checked
        mismatches += len(report.mismatches)
    elapsed = time.perf_counter() - start
    ok = len(SWEEP) == 225 and mismatches == 0 and elapsed < 30
    verdict("oracle equivalence", ok, f"{checked} counts over 225 basic sets, {mismatches} mismatches, {elapsed:.1f}s")


def test_method_agreement(verdict):
    worst, used = 0.0, {}
    for f in SWEEP:
        closed = analyze(f, "closed", tol=1e-12).result
        if "fallback-generic" in closed.flags:
            continue  # the series did not apply at runtime
        generic = analyze(f, "generic", tol=1e-12).result
        used[closed.method] = used.get(closed.method, 0) + 1
        worst = max(worst, abs(closed.h - generic.h))
    ok = worst <= 1e-9 and sum(used.values()) > 0
    verdict("method agreement", ok, f"max |series - generic| = {worst:.2e} over {dict(sorted(used.items()))}")


def test_classifier_completeness(verdict):
    empty = [f.indicators() for f in SWEEP if not classify_type_22(f).applicable]
    gms = classify_type_22(build_snre(gms_basic(2, 2))).applicable
    chess = {}
    for d in (1, 2, 3):
        for k in range(2, 6):
            f = build_snre(chessboard_basic(d, k))
            label = classify_type_22(f) if (d, k) == (2, 2) else detect_empirically(f, 12)[0]
            chess[(d, k)] = label.primary
    f6 = Snre.from_indicators(2, 2, [(0, 1, 1), (1, 0, 0)])
    f6_label = classify_type_22(f6).primary
    log_tau = detect_empirically(f6, 41)[1].log_ratios  # entry m is height m + 1
    bounds = all(
        log_tau[2 * n] >= math.log(2) - 1e-12 and log_tau[2 * n - 1] <= math.log(0.75) + 1e-12
        for n in range(1, 21)
    )
    ok = not empty and gms == {"C", "D"} and set(chess.values()) == {"E"} and f6_label == "O" and bounds
    verdict(
        "classifier completeness",
        ok,
        f"{225 - len(empty)}/225 labeled, GMS {sorted(gms)}, chessboards {sorted(set(chess.values()))}, "
        f"F_VI {f6_label}, tau bounds for n<=20 {'hold' if bounds else 'fail'}",
    )


def _frozen_partner_systems():
    """Dominant a-equation without a^2 but with ab, the other symbol frozen at b = b^2."""
    out = {}
    for f in SWEEP:
        for g in (f, f.swapped((2, 1))):
            (va, vb) = g.indicators()
            if va[0] == 0 and va[1] > 0 and vb == (0, 0, 1):
                out[(va, vb)] = g
    return list(out.values())


def test_known_closed_values(verdict):
    full = Snre.from_indicators(2, 2, [(1, 2, 1), (1, 2, 1)])
    full_err = abs(analyze(full).result.h - math.log(2))
    full_generic_err = abs(entropy_generic(full).h - math.log(2))
    doubling = Snre.from_indicators(2, 2, [(0, 2, 0), (0, 0, 1)])
    trace_ok = exact_counts(doubling, 20)[1:] == [(2**n, 1) for n in range(1, 21)]
    one_d = abs(entropy_generic(build_snre(gms_basic(1, 2))).h - math.log((1 + math.sqrt(5)) / 2))
    zeros, slopes = [], []
    for g in _frozen_partner_systems():
        zeros.append(analyze(g).result.h)
        s = [degree_estimate(g, n)[0] for n in (50, 100, 200)]
        slopes.append(s)
    shrinking = all(a >= b >= c >= 0 and (a > c or a == 0) for a, b, c in slopes)
    last = max(s[-1] for s in slopes)
    ok = (
        full_err <= 2.2e-16
        and full_generic_err <= 2.2e-16
        and trace_ok
        and one_d <= 1e-9
        and zeros
        and max(zeros) == 0
        and shrinking
        and last < 0.05
    )
    verdict(
        "known closed values",
        ok,
        f"full shift err {full_err:.1e} (generic {full_generic_err:.1e}), (2^n,1) trace n<=20 "
        f"{'exact' if trace_ok else 'wrong'}, 1-D GMS err {one_d:.1e}, {len(zeros)} frozen-partner systems "
        f"max h {max(zeros):.1e}, ln kappa at 200 steps <= {last:.4f} and shrinking: {shrinking}",
    )


def test_free_group_consistency(verdict):
    rep = fd_gms_entropy(2)
    gap = abs(rep.series_value - rep.root_corrected)
    ok = gap <= 1e-9 and abs(rep.degree - 3) <= 0.01
    verdict(
        "free-group consistency",
        ok,
        f"series {rep.series_value:.12f}, root-corrected {rep.root_corrected:.12f}, gap {gap:.1e}, "
        f"kappa {rep.degree:.4f}",
    )


def test_corollary_discrepancy(verdict):
    f = build_snre(chessboard_basic(2, 3))
    result = analyze(f).result
    generic = entropy_generic(f).h
    printed = 2 * math.log(2)
    ok = "corollary-discrepancy" in result.flags and abs(result.h - generic) <= 1e-12 and printed > math.log(3)
    verdict(
        "corollary discrepancy",
        ok,
        f"h = {result.h:.12f} (generic {generic:.12f}), flags {sorted(result.flags)}, "
        f"d ln(k-1) = {printed:.6f} > ln k = {math.log(3):.6f}",
    )
