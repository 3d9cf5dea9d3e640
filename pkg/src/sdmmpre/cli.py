"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 input validation, 3 point selection failed
(retry with a larger field), 4 search refused as too large.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import formulas
from .audit import exhaustive_mi_audit, rank_audit
from .degree_table import SchemeParams, build_gasp_exponents, count_servers
from .errors import (
    FieldMismatch,
    InvalidChainLength,
    InvalidFraction,
    InvalidModulus,
    PartitionError,
    PointSelectionFailed,
    SDMMError,
    SearchTooLarge,
)
from .field import MERSENNE_61, PrimeField
from .fileio import MatrixFormatError, format_matrix, read_matrix
from .protocol import choose_points, multiply
from .search import SearchSpace, append_ledger, exhaustive_search

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RETRY, EXIT_REFUSED = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table_text(rows) -> str:
    width = max(len(str(k)) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def cmd_tables(args, out):
    K, L = args.K, args.L
    col = "N_pre" if args.precompute else "N"
    rows, comments = [], []
    for r in args.r_list:
        for T in range(1, args.T_max + 1):
            if not 1 <= r <= min(K, T):
                comments.append(f"r={r} skipped at T={T}: needs 1 <= r <= min(K, T) = {min(K, T)}")
                continue
            n = count_servers(build_gasp_exponents(SchemeParams(K, L, T, r)), args.precompute)
            rows.append([T, r, n])
    if args.precompute:
        for T in range(1, args.T_max + 1):
            rows.append([T, "bound", formulas.lower_bounds(K, L, T).bound1])
        for T in range(1, args.T_max + 1):
            rows.append([T, "bound_best", formulas.lower_bounds(K, L, T).best])
    out.write(_csv_text(["T", "r", col], rows, comments))


def cmd_multiply(args, out):
    A = read_matrix(args.a_file)
    B = read_matrix(args.b_file)
    if A.field != B.field:
        raise FieldMismatch(f"A is over GF({A.field.q}) but B is over GF({B.field.q})")
    if args.q is not None and args.q != A.field.q:
        raise FieldMismatch(f"--q {args.q} does not match the files' modulus {A.field.q}")
    params = SchemeParams(args.K, args.L, args.T, args.r)
    C, stats, _ = multiply(
        A, B, params, args.seed, precompute_mode=not args.no_precompute, workers=args.workers
    )
    text = format_matrix(C)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    report = "".join(f"{k}={v}\n" for k, v in stats.items())
    if args.transcript:
        with open(args.transcript, "w", newline="") as fh:
            fh.write(report)
    else:
        sys.stderr.write(report)


def cmd_bounds(args, out):
    K, L, T = args.K, args.L, args.T
    b = formulas.lower_bounds(K, L, T)
    opt = formulas.optimality_check(K, L, T)
    rows = [("bound1", b.bound1), ("bound2", "n/a" if b.bound2 is None else b.bound2)]
    rows += [(f"bound3_m{m}", v) for m, v in enumerate(b.bound3_by_m, 1)]
    rows += [("best", b.best), ("N_small_pre_sym", opt.n_pre), ("optimality", str(opt))]
    if args.csv:
        out.write(_csv_text(["quantity", "value"], rows))
    else:
        out.write(_table_text(rows))


def _big_fallback(K, L, T):
    vals = []
    for k, l in ((K, L), (L, K)):
        vals.append(formulas.n_pre_closed_form(SchemeParams(k, l, T, min(k, T))))
    return min(vals)


def cmd_compare(args, out):
    K, L, T = args.K, args.L, args.T
    verdict = formulas.compare_small_big(K, L, T)
    small = formulas.n_small_pre_symmetric(K, L, T)
    big = formulas.n_big_pre_symmetric(K, L, T)
    if big is None:
        big = _big_fallback(K, L, T)
    rows = [("verdict", verdict.value), ("N_small_pre_sym", small), ("N_big_pre_sym", big)]
    if verdict is formulas.Comparison.UNDETERMINED:
        direct = "SmallWins" if small < big else "BigWins" if big < small else "Tie"
        rows.append(("direct_comparison", direct))
    if args.csv:
        out.write(_csv_text(["quantity", "value"], rows))
    else:
        out.write(verdict.value + "\n")
        out.write(_table_text(rows[1:]))


def cmd_collusion(args, out):
    res = formulas.collusion_tolerance(args.K, args.L, args.delta, args.mode == "pre")
    if args.csv:
        out.write(_csv_text(
            ["K", "L", "delta", "mode", "feasible", "threshold", "N_required"],
            [[args.K, args.L, args.delta, args.mode, int(res.feasible),
              "" if res.threshold is None else res.threshold,
              "" if res.n_required is None else res.n_required]],
        ))
    else:
        out.write(f"{res}\n")


def _fmt_frac(x) -> str:
    return f"{x} ({float(x):.6g})" if x.denominator != 1 else str(x)


def cmd_complexity(args, out):
    cp = formulas.ComplexityParams(args.omega, args.epsilon, args.delta)
    res = formulas.complexity_exponent(cp, args.mode == "pre")
    rows = [
        ("exponent_at_epsilon", _fmt_frac(res.exponent)),
        ("optimal_epsilon", _fmt_frac(res.optimal_epsilon)),
        ("optimal_exponent", _fmt_frac(res.optimal_exponent)),
    ]
    if args.csv:
        out.write(_csv_text(
            ["omega", "epsilon", "mode", "exponent", "optimal_epsilon", "optimal_exponent"],
            [[cp.omega, cp.epsilon, args.mode, res.exponent, res.optimal_epsilon, res.optimal_exponent]],
        ))
    else:
        out.write(_table_text(rows))


def cmd_audit(args, out):
    field = PrimeField(args.q)
    exps = build_gasp_exponents(SchemeParams(args.K, args.L, args.T, args.r))
    si = choose_points(field, exps, args.seed)
    if args.mi:
        rep = exhaustive_mi_audit(si, args.subset_size, zero_masks=args.zero_masks)
    else:
        rep = rank_audit(si, seed=args.seed)
    out.write(rep.to_csv() if args.csv else rep.to_text())


def cmd_search(args, out):
    space = SearchSpace(args.K, args.L, args.T, args.D, split_roles=not args.no_split_roles)
    res = exhaustive_search(space, workers=args.workers, limit=args.limit)
    if args.ledger:
        append_ledger(args.ledger, space, res)
    w = res.witness
    rows = [
        ("D", space.D), ("best_N_pre", res.best_N_pre), ("bound", res.bound), ("gap", res.bound_gap),
        ("tables_examined", res.tables_examined), ("valid_tables", res.valid_tables),
        ("alpha_I", " ".join(map(str, w.alpha_I))), ("alpha_R", " ".join(map(str, w.alpha_R))),
        ("beta_I", " ".join(map(str, w.beta_I))), ("beta_R", " ".join(map(str, w.beta_R))),
    ]
    if args.csv:
        out.write(_csv_text(["quantity", "value"], rows))
    else:
        out.write(_table_text(rows))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdmm-pre", description="GASP codes for secure distributed matrix multiplication with precomputation")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def klt(sp, T=True):
        sp.add_argument("--K", type=int, required=True)
        sp.add_argument("--L", type=int, required=True)
        if T:
            sp.add_argument("--T", type=int, required=True)

    s = sub.add_parser("tables", help="server counts per (T, r) as CSV")
    klt(s, T=False)
    s.add_argument("--T-max", type=int, required=True)
    s.add_argument("--r-list", type=_int_list, default=[1])
    s.add_argument("--precompute", action="store_true")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("multiply", help="run the protocol on two matrix files")
    klt(s)
    s.add_argument("--q", type=int)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--a-file", required=True)
    s.add_argument("--b-file", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--transcript")
    s.add_argument("--no-precompute", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_multiply)

    for name, fn, helptext in (
        ("bounds", cmd_bounds, "lower bounds and optimality of GASP_small"),
        ("compare", cmd_compare, "GASP_small vs GASP_big with precomputation"),
    ):
        s = sub.add_parser(name, help=helptext)
        klt(s)
        s.add_argument("--csv", action="store_true")
        s.set_defaults(func=fn)

    s = sub.add_parser("collusion", help="servers needed when a fraction delta collude")
    klt(s, T=False)
    s.add_argument("--delta", type=str, required=True)
    s.add_argument("--mode", choices=("pre", "nopre"), default="pre")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_collusion)

    s = sub.add_parser("complexity", help="time-complexity exponents")
    s.add_argument("--omega", type=str, required=True)
    s.add_argument("--epsilon", type=str, default="0")
    s.add_argument("--delta", type=str, default="0")
    s.add_argument("--mode", choices=("pre", "nopre"), default="pre")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_complexity)

    s = sub.add_parser("audit", help="T-security audit of a fresh instance")
    klt(s)
    s.add_argument("--q", type=int, default=MERSENNE_61)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mi", action="store_true", help="exhaustive mutual-information audit (tiny q, K=L=1)")
    s.add_argument("--subset-size", type=int)
    s.add_argument("--zero-masks", action="store_true")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("search", help="exhaustive degree-table search")
    klt(s)
    s.add_argument("--D", type=int)
    s.add_argument("--no-split-roles", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--limit", type=int, default=10**8)
    s.add_argument("--ledger")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_search)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except PointSelectionFailed as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RETRY
    except SearchTooLarge as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_REFUSED
    except (MatrixFormatError, PartitionError, FieldMismatch, InvalidChainLength, InvalidFraction,
            InvalidModulus, SDMMError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
