"""Command-line interface.

    treeshift entropy SPEC [--tol T] [--max-iter N] [--method auto|generic|closed] [--csv|--ndjson] [--bits]
    treeshift classify SPEC
    treeshift table [--d 2 --k 2] [--golden] [--procedure limit|truncated]
    treeshift oracle SPEC [--n 3]
    treeshift gms [--structure semigroup|freegroup] [--d 2] [--k 2]

Exit codes: 0 ok, 2 invalid input, 3 no convergence, 4 golden-table
difference, oracle mismatch or inconsistent dual computation.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .api import analyze
from .classify import classify_type_22, detect_empirically
from .errors import ConsistencyError, ConvergenceError, InfeasibleError, UnsupportedCase, ValidationError
from .oracle import verify_snre
from .report import make_record, to_csv, to_ndjson, to_text
from .shifts import FreeGroupGms, fd_gms_entropy, gms_basic
from .snre import build_snre, dead_symbols
from .specfile import parse_spec
from .tables import compute_tables, golden_diff, tables_csv

EXIT_OK, EXIT_INVALID, EXIT_CONVERGENCE, EXIT_MISMATCH = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8", errors="replace") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(args, ident, f, analysis) -> None:
    rec = make_record(ident, f, analysis, bits=args.bits)
    if args.ndjson:
        sys.stdout.write(to_ndjson([rec]))
    elif args.csv:
        sys.stdout.write(to_csv([rec]))
    else:
        sys.stdout.write(to_text(rec, f))


def cmd_entropy(args) -> int:
    f = parse_spec(_read(args.spec)).to_snre()
    _emit(args, args.spec, f, analyze(f, args.method, args.tol, args.max_iter))
    return EXIT_OK


def cmd_classify(args) -> int:
    f = parse_spec(_read(args.spec)).to_snre()
    empirical = None
    if not dead_symbols(f):
        empirical = detect_empirically(f, args.steps)[0]
    try:
        label = classify_type_22(f)
    except UnsupportedCase:
        label = empirical
        if label is None:
            print("undecided (empirical detection needs every symbol alive)")
            return EXIT_OK
        print(f"{label.primary or 'undecided'} (empirical)")
        print(f"applicable: {label}")
        return EXIT_OK
    if empirical is None:
        verdict = "empirical not applicable"
    elif empirical.undecided:
        verdict = "empirical undecided"
    elif empirical.applicable & label.applicable:
        verdict = "empirical agrees"
    else:
        verdict = f"empirical DISAGREES: {empirical}"
    print(f"{label.primary} ({label.provenance}; {verdict})")
    print(f"applicable: {label}")
    if empirical is not None and not empirical.undecided:
        print(f"empirical: {empirical}")
    return EXIT_OK


def cmd_table(args) -> int:
    if (args.d, args.k) != (2, 2):
        raise UnsupportedCase("tables exist for d=2, k=2 only")
    cells = compute_tables(args.procedure, args.method, args.tol, args.max_iter)
    sys.stdout.write(tables_csv(cells, math.log(2) if args.bits else 1.0))
    if args.golden:
        diffs = golden_diff(cells)
        if diffs:
            for line in diffs:
                print(line, file=sys.stderr)
            print(f"{len(diffs)} of {len(cells)} cells differ from the golden values", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"all {len(cells)} cells match the golden values", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = parse_spec(_read(args.spec))
    b = spec.basic_set()
    if b is None:
        raise ValidationError("the oracle needs a forbid or block spec (it counts labelings of a basic set)")
    report = verify_snre(b, args.n)
    for i, n, fast, brute in report.mismatches:
        print(f"symbol {i}, height {n}: recursion {fast}, brute force {brute}")
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_gms(args) -> int:
    if args.structure == "semigroup":
        f = build_snre(gms_basic(args.d, args.k))
        _emit(args, f"gms-semigroup-d{args.d}-k{args.k}", f, analyze(f, args.method, args.tol, args.max_iter))
        return EXIT_OK
    rep = fd_gms_entropy(args.d, args.tol, args.k, experimental=args.experimental)
    scale = math.log(2) if args.bits else 1.0
    units = "bits" if args.bits else "nats"
    q = 2 * args.d - 1
    print(f"free group of rank {args.d}: interior branching q = {q}, k = {args.k}")
    g = FreeGroupGms(args.d, args.k)
    for title, system in (("interior system", g.interior), ("identity system", g.root)):
        print(f"{title}:")
        for line in str(system).splitlines():
            print(f"  {line}")
    print(f"entropy (series): {rep.series_value / scale:.12f} {units}")
    print(f"entropy (root-corrected, height {rep.height}): {rep.root_corrected / scale:.12f} {units}")
    print(f"agreement: {abs(rep.series_value - rep.root_corrected):.2e}")
    print(f"series limit over q^2 without the (q-1) factor: {rep.unnormalized_series / scale:.12f} {units}")
    print(f"golden mean shift on the {q}-ary tree: {rep.semigroup_value / scale:.12f} {units}")
    print(f"interior degree: ln kappa = {rep.log_degree:.6f}, kappa = {rep.degree:.6f}")
    print(f"flags: {', '.join(sorted(rep.result.flags))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treeshift", description="Entropy of tree shifts of finite type.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def numeric(sp):
        sp.add_argument("--tol", type=float, default=1e-12)
        sp.add_argument("--max-iter", type=int, default=200)
        sp.add_argument("--method", choices=("auto", "generic", "closed"), default="auto")
        sp.add_argument("--bits", action="store_true", help="report entropy in bits instead of nats")

    def output(sp):
        group = sp.add_mutually_exclusive_group()
        group.add_argument("--csv", action="store_true")
        group.add_argument("--ndjson", action="store_true")

    sp = sub.add_parser("entropy", help="entropy of a spec file")
    sp.add_argument("spec")
    numeric(sp)
    output(sp)
    sp.set_defaults(run=cmd_entropy)

    sp = sub.add_parser("classify", help="growth type of a spec file")
    sp.add_argument("spec")
    sp.add_argument("--steps", type=int, default=40)
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("table", help="entropy tables for two symbols on the binary tree")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--golden", action="store_true", help="diff against the reference values")
    sp.add_argument("--procedure", choices=("limit", "truncated"), default="limit")
    numeric(sp)
    sp.set_defaults(run=cmd_table)

    sp = sub.add_parser("oracle", help="compare recursion counts with brute-force enumeration")
    sp.add_argument("spec")
    sp.add_argument("--n", type=int, default=3)
    sp.set_defaults(run=cmd_oracle)

    sp = sub.add_parser("gms", help="golden mean shifts")
    sp.add_argument("--structure", choices=("semigroup", "freegroup"), default="semigroup")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--experimental", action="store_true", help="allow k >= 3 on the free group")
    numeric(sp)
    output(sp)
    sp.set_defaults(run=cmd_gms)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValidationError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ConsistencyError as exc:
        print(f"inconsistent results: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
