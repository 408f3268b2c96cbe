"""Command-line entry point: ``hkmatrix <command> [options]``.

Exit codes: 0 success, 1 verification mismatch or failed law, 2 input error,
3 expansion budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import bialgebra, calculus, matrix_ops, pipeline
from .matrix_ops import BudgetExceeded, WeightSeq
from .rational import approx, as_rational, format_rational
from .series import (
    CATALOG,
    ModelSpec,
    SeriesError,
    TruncatedSeries,
    catalog,
    egf_to_series,
    phi_from_f,
    read_series_file,
    series_json,
    series_to_egf,
)


EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _alpha(args):
    return None if args.alpha is None else as_rational(args.alpha)


def model_spec(source: str, alpha, mode: str) -> ModelSpec:
    """A catalog name or a path to a series file."""
    if source in CATALOG:
        if source == "base":
            return ModelSpec("base")
        if source == "binomial" and alpha is None:
            raise InputError("binomial model needs --alpha")
        return ModelSpec("named", name=source, alpha=alpha)
    path = Path(source)
    if not path.exists():
        raise InputError(f"unknown model {source!r}: not a catalog name ({', '.join(sorted(CATALOG))}) or a file")
    kind, coeffs = read_series_file(path)
    if kind == "egf-b":
        return ModelSpec("from_f", coeffs=tuple(coeffs))
    return ModelSpec("from_F_normalize" if mode == "normalize" else "from_F_shift", coeffs=tuple(coeffs))


def _emit_table(rows, header, fmt: str, extra: dict | None = None) -> None:
    if fmt == "json":
        payload = dict(extra or {})
        payload["rows"] = [dict(zip(header, (format_rational(v) if isinstance(v, Fraction) else v for v in r))) for r in rows]
        print(json.dumps(payload, indent=2))
        return
    print("\t".join(header + ["approx"]))
    for r in rows:
        cells = [format_rational(v) if isinstance(v, Fraction) else str(v) for v in r]
        print("\t".join(cells + [approx(r[-1])]))


def cmd_omega(args) -> int:
    methods = pipeline.METHODS if args.method == "all" else (args.method,)
    spec = model_spec(args.model, _alpha(args), args.mode)
    order = pipeline.order_for(args.n, methods)
    model = pipeline.prepare(spec, order, mode=args.mode)
    results = {}
    for m in methods:
        kw = {"budget": args.budget, "workers": args.workers} if m == "matrix" else {}
        results[m] = pipeline.omega(model, args.n, m, **kw)
    reference = results[methods[0]]
    status = EXIT_OK
    for m in methods[1:]:
        for j, (a, b) in enumerate(zip(reference, results[m])):
            if a != b:
                print(f"mismatch at n={j}: {methods[0]}={format_rational(a)} {m}={format_rational(b)}", file=sys.stderr)
                status = EXIT_MISMATCH
    rows = [(j, v) for j, v in enumerate(reference)]
    _emit_table(rows, ["n", "omega"], args.format, {"model": args.model, "method": args.method})
    return status


def cmd_invert(args) -> int:
    if args.F in CATALOG:
        F, _ = catalog(args.F, _alpha(args), order=args.order + 2)
    else:
        kind, coeffs = read_series_file(args.F)
        if kind != "series-c":
            raise InputError("invert expects a series-c file for F")
        F = TruncatedSeries(coeffs)
        if F.order < args.order + 2:
            raise InputError(f"F must be known to order {args.order + 2}")
        F = F.truncate(args.order + 2)
    model = pipeline.prepare_from_F(F, args.mode)
    f = model.f.truncate(args.order)
    print(json.dumps(series_json("egf-b", series_to_egf(f))))
    return EXIT_OK


def cmd_forward(args) -> int:
    if args.f == "zero":
        f = TruncatedSeries.zero(args.order)
    elif args.f in CATALOG:
        _, f = catalog(args.f, _alpha(args), order=args.order)
    else:
        kind, coeffs = read_series_file(args.f)
        f = egf_to_series(coeffs) if kind == "egf-b" else TruncatedSeries(coeffs)
    phi = phi_from_f(f, args.order)
    print(json.dumps(series_json("series-c", phi.coeffs)))
    return EXIT_OK


def cmd_word(args) -> int:
    word = calculus.OperatorWord.parse(args.word)
    letters = word.letters()
    spec = model_spec(args.model, _alpha(args), args.mode)
    model = pipeline.prepare(spec, max(args.order, calculus.required_order(len(letters))), mode=args.mode)
    ws = matrix_ops.expand_word(letters, budget=args.budget)
    via_matrix = model.scale * matrix_ops.upsilon_sum(ws, model.weights)
    via_calculus = model.scale * calculus.eval_word(letters, model.phi)
    print(f"matrix\t{format_rational(via_matrix)}\t{approx(via_matrix)}")
    print(f"calculus\t{format_rational(via_calculus)}\t{approx(via_calculus)}")
    if via_matrix != via_calculus:
        print("mismatch between matrix and calculus routes", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_axioms(args) -> int:
    weights = None
    if args.weights:
        kind, coeffs = read_series_file(args.weights)
        if kind != "egf-b":
            raise InputError("axioms --weights expects an egf-b file")
        weights = WeightSeq(coeffs)
    print(f"# seed {args.seed}, trials {args.trials}", file=sys.stderr)
    report = bialgebra.axiom_suite(args.trials, args.seed, weights)
    print(bialgebra.report_json(report))
    if not bialgebra.report_ok(report):
        print(f"counterexample found; reproduce with --seed {args.seed} --trials {args.trials}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_bound(args) -> int:
    inp = calculus.BoundInput(args.d, as_rational(args.C), args.n)
    model = pipeline.prepare(ModelSpec("base"), 2 * args.n + 1)
    values = pipeline.omega_series(model, 2 * args.n)
    ko3 = calculus.bound_rhs_ko3(inp, values)
    ko4 = calculus.bound_rhs_ko4(inp, values)
    _emit_table([("ko3", ko3), ("ko4", ko4)], ["bound", "rhs"], args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hkmatrix", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def model_opts(sp, flag="--model"):
        sp.add_argument(flag, default="base", help="catalog name or path to a series JSON file")
        sp.add_argument("--alpha", help="parameter of the binomial model, as p or p/q")
        sp.add_argument("--mode", choices=("normalize", "shift"), default="normalize",
                        help="how F(0) != 1 is handled for F inputs")

    sp = sub.add_parser("omega", help="print omega_0..omega_n")
    model_opts(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=pipeline.METHODS + ("all",), default="series")
    sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sp.add_argument("--budget", type=int, default=matrix_ops.DEFAULT_BUDGET)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_omega)

    sp = sub.add_parser("invert", help="recover f from a generating function F")
    sp.add_argument("--F", required=True, help="catalog name or series-c file")
    sp.add_argument("--alpha")
    sp.add_argument("--mode", choices=("normalize", "shift"), default="normalize")
    sp.add_argument("--order", type=int, default=10)
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("forward", help="build Phi from f")
    sp.add_argument("--f", required=True, help="'zero', a catalog name (its f column) or an egf-b/series-c file")
    sp.add_argument("--alpha")
    sp.add_argument("--order", type=int, default=10)
    sp.set_defaults(func=cmd_forward)

    sp = sub.add_parser("word", help="Upsilon(word)1 by the matrix and calculus routes")
    model_opts(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--order", type=int, default=0)
    sp.add_argument("--budget", type=int, default=matrix_ops.DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_word)

    sp = sub.add_parser("axioms", help="randomized bialgebra and seminorm law checks")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--weights", help="egf-b file with weights b_g")
    sp.set_defaults(func=cmd_axioms)

    sp = sub.add_parser("bound", help="right-hand sides of the derivative estimates")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--C", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sp.set_defaults(func=cmd_bound)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, SeriesError, ValueError, TypeError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
