"""Command line front end.

Exit codes: 0 success, 1 precision failure, 2 table mismatch (a printed
tuple that the search cannot recover), 3 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .balls import PRECISION_CAP, PrecisionError, decimal, default_precision
from .bounds import absolute_bounds, derive_eq2_bounds, derive_eq3_bounds, published_comparison
from .narayana import compute_constants, narayana
from .reduction import (
    RETRIES,
    certificate,
    dp_reduce,
    eq2_m_instance,
    eq2_n_instance,
    eq3_l1_instance,
    eq3_l2_instance,
    legendre_fallback,
)
from .repdigit import as_repdigit

EXIT_OK, EXIT_PRECISION, EXIT_DIFF, EXIT_ARGS = 0, 1, 2, 3

log = logging.getLogger("narayana_repdigits")


class ArgError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def parse_b_range(text: str) -> list[int]:
    """``7`` or ``3..12`` (inclusive), within 2..50."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad base range {text!r}") from None
    if not 2 <= lo <= hi <= 50:
        raise argparse.ArgumentTypeError("need 2 <= lo <= hi <= 50")
    return list(range(lo, hi + 1))


def precision_arg(text: str) -> int:
    bits = int(text)
    if not 64 <= bits <= PRECISION_CAP:
        raise argparse.ArgumentTypeError(f"precision must be in [64, {PRECISION_CAP}]")
    return bits


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def emit(obj, args, text: str | None = None, rows: list[dict] | None = None) -> None:
    fmt = args.format
    if fmt == "csv" and rows is not None:
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        out = buf.getvalue()
    elif fmt == "text" and text is not None:
        out = text + "\n"
    else:
        out = dumps(obj) + "\n"
    if args.out and not getattr(args, "out_is_dir", False):
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _single_base(args) -> int:
    if args.b is None or len(args.b) != 1:
        raise ArgError("--b must name a single base")
    return args.b[0]


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ArgError(f"--{n.replace('_', '-')} is required")


# -- subcommands ------------------------------------------------------------------


def cmd_seq(args) -> int:
    if args.upto is not None:
        vals = [narayana(i) for i in range(args.upto + 1)]
        emit({"N": [str(v) for v in vals]}, args, " ".join(map(str, vals)), [{"n": str(i), "N": str(v)} for i, v in enumerate(vals)])
    else:
        _require(args, "n")
        v = narayana(args.n)
        emit({"n": str(args.n), "N": str(v)}, args, str(v), [{"n": str(args.n), "N": str(v)}])
    return EXIT_OK


def cmd_constants(args) -> int:
    k = compute_constants(args.precision)
    digits = max(15, int(args.precision * 0.30103) - 5)
    obj = {
        "precision_bits": str(args.precision),
        "alpha": decimal(k.alpha, digits),
        "beta_abs": decimal(k.beta_abs, digits),
        "c_alpha": decimal(k.c_alpha, digits),
        "c_beta_abs": decimal(k.c_beta_abs, digits),
        "log_alpha": decimal(k.log_alpha, digits),
    }
    emit(obj, args, "\n".join(f"{key} = {v}" for key, v in obj.items()))
    return EXIT_OK


def cmd_repdigit(args) -> int:
    base = args.base if args.base is not None else (_single_base(args) if args.b else None)
    if base is None or args.check is None:
        raise ArgError("repdigit needs --check X and --base B")
    if base < 2 or args.check < 1:
        raise ArgError("need X >= 1 and B >= 2")
    hit = as_repdigit(args.check, base)
    obj = {"x": str(args.check), "b": str(base), "repdigit": hit is not None}
    if hit:
        obj["a"], obj["l"] = str(hit[0]), str(hit[1])
    emit(obj, args, f"[{hit[0]}]^{hit[1]} in base {base}" if hit else "not a repdigit")
    return EXIT_OK


def cmd_bounds(args) -> int:
    bases = args.b or list(range(2, 51))
    if len(bases) == 1:
        entry = (derive_eq3_bounds if args.equation == "eq3" else derive_eq2_bounds)(bases[0])
        obj = entry.as_dict()
    else:
        ab = absolute_bounds(args.equation, bases)
        obj = ab.as_dict()
        obj["published_comparison"] = published_comparison(ab)
    emit(obj, args)
    return EXIT_OK


def cmd_reduce(args) -> int:
    b = _single_base(args)
    label = args.form
    if label == "eq3-l1":
        _require(args, "a1", "a2")
        inst = eq3_l1_instance(b, args.a1, args.a2)
    elif label == "eq3-l2":
        _require(args, "a1", "a2", "l1")
        inst = eq3_l2_instance(b, args.a1, args.a2, args.l1)
    elif label == "eq2-m":
        _require(args, "a")
        inst = eq2_m_instance(b, args.a)
    else:
        _require(args, "a", "m")
        inst = eq2_n_instance(b, args.a, args.m)
    for key in ("a", "a1", "a2"):
        v = getattr(args, key)
        if v is not None and not 1 <= v < b:
            raise ArgError(f"--{key} must be a digit in base {b}")
    out = dp_reduce(inst, args.precision, args.max_precision, args.retries, args.refine)
    fb = None
    if out.status == "fallback_needed" and label == "eq2-n":
        fb = legendre_fallback(b, args.a, args.m, inst.M, args.precision, args.max_precision)
    emit(certificate(inst, out, fb), args)
    return EXIT_OK


def _solution_rows(sols):
    return [s.as_dict() for s in sols]


def _solutions_text(equation, sols):
    if equation == "eq2":
        return "\n".join("({},{},{},{},{})".format(*s.as_tuple()) for s in sols)
    return "\n".join(
        f"N_{s.k} = [{s.a1}]^{s.l1}_{s.b} * [{s.a2}]^{s.l2}_{s.b} = {s.value}" for s in sols
    )


def cmd_solve(args) -> int:
    from .search import solve_eq2, solve_eq3

    bases = args.b or list(range(2, 51))
    if args.equation == "eq2":
        sols = solve_eq2(bases, args.n_max or 290, None, args.threads)
    else:
        sols = solve_eq3(bases, args.k_max or 1598, args.l1_max, args.l2_max, args.threads)
    emit({"equation": args.equation, "solutions": _solution_rows(sols)}, args,
         _solutions_text(args.equation, sols), _solution_rows(sols))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    from .pipeline import run_pipeline

    bases = args.b or list(range(2, 51))
    res = run_pipeline(args.equation, bases, args.precision, args.max_precision, args.threads, args.retries, args.refine)
    summary = res.summary()
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "bounds.json").write_text(dumps(res.bounds) + "\n")
        (d / "reduction.json").write_text(dumps(res.sweep.as_dict(with_certificates=False)) + "\n")
        with open(d / "certificates.jsonl", "w") as fh:
            for c in res.sweep.certificates:
                fh.write(json.dumps(c, sort_keys=True) + "\n")
        (d / "solutions.json").write_text(dumps(_solution_rows(res.solutions)) + "\n")
        (d / "diff.json").write_text(dumps(res.diff.as_dict()) + "\n")
        (d / "diff.txt").write_text(res.diff.report() + "\n")
        (d / "summary.json").write_text(dumps(summary) + "\n")
        args.out_is_dir = True
    text = "\n".join([
        f"{args.equation}: bases {bases[0]}..{bases[-1]}",
        "reduction maxima: " + ", ".join(f"{k}={v}" for k, v in sorted(res.sweep.maxima.items())),
        "searched: " + ", ".join(f"{k}={v}" for k, v in sorted(res.search_ranges.items())),
        f"soundness gate: {'ok' if res.sound else 'FAILED'}",
        f"{len(res.solutions)} solutions",
        _solutions_text(args.equation, res.solutions),
        res.diff.report(),
    ])
    emit(summary, args, text, _solution_rows(res.solutions))
    if not res.sound:
        log.error("searched ranges do not cover the reduced bounds")
        return EXIT_DIFF
    return EXIT_OK if res.diff.ok else EXIT_DIFF


def cmd_verify_tables(args) -> int:
    from .search import diff_against_published_tables, solve_eq2, solve_eq3

    eq2 = diff_against_published_tables(solve_eq2(n_max=args.n_max or 290, workers=args.threads), equation="eq2")
    eq3 = diff_against_published_tables(
        solve_eq3(k_max=args.k_max or 1598, l1_max=122, l2_max=133, workers=args.threads), equation="eq3"
    )
    obj = {"eq2": eq2.as_dict(), "eq3": eq3.as_dict()}
    emit(obj, args, "eq2\n" + eq2.report() + "\n\neq3\n" + eq3.report())
    return EXIT_OK if eq2.ok and eq3.ok else EXIT_DIFF


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--b", type=parse_b_range, help="base or inclusive range lo..hi (2..50)")
    common.add_argument("--precision", type=precision_arg, default=default_precision(),
                        help="starting working precision in bits (env NARAYANA_PRECISION)")
    common.add_argument("--max-precision", type=precision_arg, default=None,
                        help="escalation cap in bits (default: no escalation beyond --precision)")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", help="output file (directory for pipeline)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = Parser(prog="narayana-repdigits", description="Narayana numbers as products of repdigits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    s = sub.add_parser("seq", parents=[common], help="Narayana numbers")
    s.add_argument("--n", type=int)
    s.add_argument("--upto", type=int)
    s.set_defaults(func=cmd_seq)

    s = sub.add_parser("constants", parents=[common], help="alpha, |beta|, c_alpha, |c_beta| as balls")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("repdigit", parents=[common], help="recognize a repdigit")
    s.add_argument("--check", type=int, required=True)
    s.add_argument("--base", type=int)
    s.set_defaults(func=cmd_repdigit)

    s = sub.add_parser("bounds", parents=[common], help="absolute bounds from linear forms in logarithms")
    s.add_argument("equation", choices=("eq2", "eq3"))
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("reduce", parents=[common], help="one Dujella-Petho reduction")
    s.add_argument("form", choices=("eq2-m", "eq2-n", "eq3-l1", "eq3-l2"))
    for name in ("a", "a1", "a2", "m", "l1"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--retries", type=int, default=RETRIES)
    s.add_argument("--refine", action="store_true", help="keep the smallest bound over the retry window")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", parents=[common], help="exhaustive search over given ranges")
    s.add_argument("equation", choices=("eq2", "eq3"))
    s.add_argument("--n-max", type=int)
    s.add_argument("--k-max", type=int)
    s.add_argument("--l1-max", type=int)
    s.add_argument("--l2-max", type=int)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("pipeline", parents=[common], help="bounds, reduction, search and table diff")
    s.add_argument("equation", choices=("eq2", "eq3"))
    s.add_argument("--retries", type=int, default=RETRIES)
    s.add_argument("--refine", action="store_true", help="keep the smallest bound over the retry window")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("verify-tables", parents=[common], help="compare searches with the printed tables")
    s.add_argument("--n-max", type=int)
    s.add_argument("--k-max", type=int)
    s.set_defaults(func=cmd_verify_tables)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.max_precision is None:
        args.max_precision = args.precision
    if args.max_precision < args.precision:
        parser.error("--max-precision must be >= --precision")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except ArgError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ARGS
    except PrecisionError as err:
        print(f"precision failure: {err}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
