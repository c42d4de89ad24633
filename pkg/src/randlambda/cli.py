"""Command line front end: ``randlambda <verb> ...``.

Every verb writes a one-line JSON description of its resolved configuration
to stderr, so stdout (or ``--out``) carries only the data.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import __version__
from .bounds import bounds_for, certify_sn_structural
from .classify import CLASS_IDS, ClassParams, in_class, report
from .counting import CapExceeded, count_cl, count_closed_lambda, enumerate_cl, enumerate_closed_lambda
from .experiments import ExperimentConfig, emit, run_density, run_exhaustive
from .rewrite import Budget, cl_normal_order_step, decide_sn, decide_sn_cl, normal_order_step
from .sampling import SampleConfig, sample_many
from .series import coeffs_f, coeffs_f_t0, render_decimal
from .terms import ParseError, parse_cl, parse_lambda, print_cl, print_lambda


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _printer(model):
    return print_lambda if model == "lambda" else print_cl


def _parser_for(model):
    return parse_lambda if model == "lambda" else parse_cl


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _preamble(args, **resolved):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    cfg.update(resolved)
    cfg["version"] = __version__
    print(json.dumps(cfg, sort_keys=True, default=str), file=sys.stderr)


def _budget(args) -> Budget:
    return Budget(max_steps=args.budget, max_size=args.max_size)


# --------------------------------------------------------------- verbs

def cmd_count(args):
    _preamble(args)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "value"])
        for n in range(args.max_n + 1):
            w.writerow([n, count_closed_lambda(n) if args.model == "lambda" else count_cl(n)])


def cmd_enumerate(args):
    _preamble(args)
    terms = enumerate_closed_lambda(args.n) if args.model == "lambda" else enumerate_cl(args.n)
    show = _printer(args.model)
    with _output(args.out) as out:
        for t in terms:
            out.write(show(t) + "\n")


def cmd_sample(args):
    _preamble(args)
    cfg = SampleConfig(seed=args.seed, n=args.n, count=args.count, model=args.model)
    show = _printer(args.model)
    with _output(args.out) as out:
        for t in sample_many(cfg):
            out.write(show(t) + "\n")


def _read_terms(args) -> list[str]:
    texts = list(args.term or [])
    if not texts:
        texts = [line.strip() for line in sys.stdin if line.strip()]
    return texts


def cmd_classify(args):
    _preamble(args)
    classes = [c.strip() for c in args.classes.split(",") if c.strip()] if args.classes else []
    for c in classes:
        if c not in CLASS_IDS:
            raise UsageError(f"unknown class {c!r}")
    params = ClassParams(j=args.j)
    with _output(args.out) as out:
        for text in _read_terms(args):
            t = parse_lambda(text)
            d = {"term": print_lambda(t), **report(t).as_dict()}
            for c in classes:
                d[f"class_{c}"] = in_class(t, c, params) if t.size >= 2 else None
            out.write(json.dumps(d) + "\n")


def cmd_reduce(args):
    _preamble(args)
    t = _parser_for(args.model)(args.term)
    show = _printer(args.model)
    step_fn = normal_order_step if args.model == "lambda" else cl_normal_order_step
    with _output(args.out) as out:
        out.write(f"0\t-\t{show(t)}\n")
        for i in range(1, args.max_steps + 1):
            step = step_fn(t)
            if step is None:
                break
            t = step.after
            out.write(f"{i}\t{step.path or '.'}\t{show(t)}\n")
            if t.size > args.max_size:
                break


def cmd_sn(args):
    _preamble(args)
    t = _parser_for(args.model)(args.term)
    show = _printer(args.model)
    if args.model == "lambda":
        verdict = decide_sn(t, _budget(args))
    else:
        verdict = decide_sn_cl(t, _budget(args))
    d = {"term": show(t), "status": verdict.status.value, "eta": verdict.eta, "steps": verdict.steps}
    if verdict.witness is not None:
        d["witness"] = {"kind": verdict.witness.kind,
                        "chain": [show(u) for u in verdict.witness.chain]}
    if args.model == "lambda" and not t.free:
        cert = certify_sn_structural(t)
        d["certificate"] = cert.describe(t) if cert else None
    with _output(args.out) as out:
        out.write(json.dumps(d) + "\n")


def cmd_density(args):
    try:
        cfg = ExperimentConfig(model=args.model, property=args.property, sizes=tuple(args.sizes),
                               samples=args.samples, seed=args.seed, budget=_budget(args),
                               workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _preamble(args)
    rows = run_density(cfg)
    with _output(args.out) as out:
        emit(rows, args.format, out)


def cmd_exhaustive(args):
    _preamble(args)
    res = run_exhaustive(args.property, args.n, args.model, _budget(args))
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["model", "property", "n", "hits", "total", "fraction", "unknown_count"])
        w.writerow([res.model, res.property, res.n, res.hits, res.total, str(res.fraction), res.unknown_count])


def cmd_ratio(args):
    t0 = parse_cl(args.t0)
    grid = sorted(set(args.grid)) if args.grid else list(range(1, args.max_n + 1))
    if not grid or grid[0] < 1:
        raise UsageError("grid sizes must be positive")
    top = grid[-1]
    _preamble(args, resolved_grid=grid)
    f = coeffs_f(top)
    g = coeffs_f_t0(t0, top, f)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "F_n", "G_n", "ratio"])
        for n in grid:
            w.writerow([n, f[n], g[n], render_decimal(Fraction(g[n], f[n]), args.precision)])


def cmd_bounds(args):
    _preamble(args)
    rep = bounds_for(args.n, with_exact=args.with_exact_L, epsilon=args.epsilon)
    d = rep.as_dict()
    for key in ("lower", "upper", "L_n"):
        if d[key] is not None:
            d[key] = str(d[key])
    with _output(args.out) as out:
        out.write(json.dumps(d) + "\n")


# -------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="randlambda", description="Random lambda terms and combinators.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="output file (default stdout)")
        return sp

    def model_arg(sp, positional=False):
        if positional:
            sp.add_argument("model", choices=("lambda", "cl"))
        else:
            sp.add_argument("--model", choices=("lambda", "cl"), default="lambda")

    def budget_args(sp):
        sp.add_argument("--budget", type=int, default=Budget().max_steps, help="step budget for SN decisions")
        sp.add_argument("--max-size", type=int, default=Budget().max_size, help="term size budget")

    sp = verb("count", cmd_count, "exact term counts by size")
    model_arg(sp, positional=True)
    sp.add_argument("--max-n", type=int, required=True)

    sp = verb("enumerate", cmd_enumerate, "list every term of one size")
    model_arg(sp, positional=True)
    sp.add_argument("--n", type=int, required=True)

    sp = verb("sample", cmd_sample, "uniform random terms")
    model_arg(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)

    sp = verb("classify", cmd_classify, "structural report for lambda terms (args or stdin)")
    sp.add_argument("--term", action="append")
    sp.add_argument("--classes", default="", help="comma-separated class ids, e.g. A,B,J")
    sp.add_argument("--j", type=int, default=1, help="pattern size bound for class I")

    sp = verb("reduce", cmd_reduce, "normal-order reduction trace")
    model_arg(sp)
    sp.add_argument("--term", required=True)
    sp.add_argument("--max-steps", type=int, default=100)
    sp.add_argument("--max-size", type=int, default=Budget().max_size)

    sp = verb("sn", cmd_sn, "strong normalization verdict")
    model_arg(sp)
    sp.add_argument("--term", required=True)
    budget_args(sp)

    sp = verb("density", cmd_density, "Monte Carlo density estimates")
    model_arg(sp)
    sp.add_argument("--property", required=True)
    sp.add_argument("--sizes", type=_int_list, default=None)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    budget_args(sp)

    sp = verb("exhaustive", cmd_exhaustive, "exact density by enumeration")
    model_arg(sp)
    sp.add_argument("--property", required=True)
    sp.add_argument("--n", type=int, required=True)
    budget_args(sp)

    sp = verb("ratio", cmd_ratio, "exact share of combinators containing a pattern")
    sp.add_argument("--t0", required=True)
    sp.add_argument("--max-n", type=int, default=100)
    sp.add_argument("--grid", type=_int_list, default=None)
    sp.add_argument("--precision", type=int, default=12)

    sp = verb("bounds", cmd_bounds, "exact lower and upper bounds on closed term counts")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--with-exact-L", action="store_true")
    sp.add_argument("--epsilon", type=float, default=0.5)
    return p


DEFAULT_SIZES = {"lambda": [20, 50, 100, 200], "cl": [20, 100, 1000]}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "sizes", "absent") is None:
        args.sizes = DEFAULT_SIZES[args.model]
    try:
        args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"randlambda {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, ValueError, ArithmeticError, OverflowError, MemoryError) as exc:
        print(f"randlambda {args.verb}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
