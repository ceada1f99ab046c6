"""Command-line interface.

Subcommands ``binomial``, ``poisson`` and ``oddsratio`` report confidence
intervals for one observed outcome; with ``--curve`` they instead emit the
two-sided p-value curve as CSV. ``curve`` is the standalone spelling of the
same emission and ``audit`` writes an exact coverage table.

Exit status: 0 on success, 2 for argument errors, 1 for computation errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bounds import clopper_pearson, one_sided_interval
from .coverage import exact_coverage, write_csv
from .errors import (BadAlpha, BadDelta, BadGrid, BadN, EmptySupport, ExactCIError,
                     OutOfSupport)
from .family import special_param
from .models import TwoByTwoTable, make_binomial, make_odds_ratio, make_poisson, point_estimate
from .sterne import DEFAULT_DELTA, jump_limits, sterne_interval, sterne_pvalue

_ARGUMENT_ERRORS = (BadAlpha, BadDelta, BadGrid, BadN, EmptySupport, OutOfSupport)

METHOD_CHOICES = ("sterne", "cp", "lower", "upper", "all")


def _fmt(v: float) -> str:
    if v is None:
        return "-"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.4f}"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.05, help="error level (default 0.05)")
    p.add_argument("--method", choices=METHOD_CHOICES, default="all")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA,
                   help="Sterne endpoint precision (default 1e-8)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def _add_curve(p: argparse.ArgumentParser, required: bool) -> None:
    if not required:
        p.add_argument("--curve", action="store_true",
                       help="emit the p-value curve as CSV instead of intervals")
    p.add_argument("--from", dest="curve_from", type=float, default=None,
                   help="curve start, natural scale")
    p.add_argument("--to", dest="curve_to", type=float, default=None,
                   help="curve end, natural scale")
    p.add_argument("--points", type=int, default=500, help="curve sample count")


def _add_model_args(p: argparse.ArgumentParser, kind: str, with_x: bool = True) -> None:
    if kind == "binomial":
        p.add_argument("--n", type=int, required=True)
        if with_x:
            p.add_argument("--x", type=int, required=True, help="observed count")
    elif kind == "poisson":
        if with_x:
            p.add_argument("--x", type=int, required=True, help="observed count")
    else:
        p.add_argument("--y1", type=int, required=with_x, help="events in group 1")
        p.add_argument("--n1", type=int, required=True)
        p.add_argument("--y2", type=int, required=True, help="events in group 2")
        p.add_argument("--n2", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exactci",
        description="Exact confidence intervals for binomial, Poisson and odds-ratio data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for kind, helptext in (
        ("binomial", "binomial success probability"),
        ("poisson", "Poisson mean"),
        ("oddsratio", "odds ratio of a 2x2 table"),
    ):
        p = sub.add_parser(kind, help=helptext)
        _add_model_args(p, kind)
        _add_common(p)
        _add_curve(p, required=False)

    p = sub.add_parser("curve", help="two-sided p-value curve as CSV")
    p.add_argument("--model", choices=("binomial", "poisson", "oddsratio"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--x", type=int)
    p.add_argument("--y1", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--y2", type=int)
    p.add_argument("--n2", type=int)
    _add_curve(p, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)

    p = sub.add_parser("audit", help="exact coverage table as CSV")
    p.add_argument("--model", choices=("binomial", "poisson", "oddsratio"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--s", type=int, help="conditioning total y1 + y2")
    p.add_argument("--method", choices=METHOD_CHOICES[:-1], default="sterne")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--from", dest="grid_from", type=float, required=True,
                   help="grid start, natural scale")
    p.add_argument("--to", dest="grid_to", type=float, required=True,
                   help="grid end, natural scale")
    p.add_argument("--points", type=int, default=501)
    return parser


def _build_model(args) -> tuple:
    kind = args.command if args.command in ("binomial", "poisson", "oddsratio") else args.model
    if kind == "binomial":
        if args.n is None or getattr(args, "x", None) is None:
            raise BadN("binomial needs --n and --x")
        model = make_binomial(args.n)
        x = args.x
    elif kind == "poisson":
        if getattr(args, "x", None) is None:
            raise OutOfSupport("poisson needs --x")
        model = make_poisson()
        x = args.x
    else:
        needed = (args.y1, args.n1, args.y2, args.n2)
        if any(v is None for v in needed):
            raise BadN("oddsratio needs --y1 --n1 --y2 --n2")
        table = TwoByTwoTable(y1=args.y1, n1=args.n1, y2=args.y2, n2=args.n2)
        model = make_odds_ratio(table.n1, table.n2, table.s)
        x = table.x
    if x not in model.family.support:
        raise OutOfSupport(f"x = {x} is outside the support of this model")
    return model, int(x)


def _intervals(model, x, args):
    methods = ("sterne", "cp", "lower", "upper") if args.method == "all" else (args.method,)
    out = []
    for m in methods:
        if m == "sterne":
            out.append(sterne_interval(model, x, args.alpha, args.delta))
        elif m == "cp":
            out.append(clopper_pearson(model, x, args.alpha))
        else:
            out.append(one_sided_interval(model, x, args.alpha, m))
    return out


def _model_dict(model) -> dict:
    return {"kind": model.kind, **model.params}


def _interval_record(model, x, ci) -> dict:
    return {
        "model": _model_dict(model),
        "x": x,
        "alpha": ci.alpha,
        "method": ci.method,
        "theta": [ci.theta_lo, ci.theta_hi],
        "natural": [ci.natural_lo, ci.natural_hi],
        "endpoint_pvalues": [ci.pvalue_lo, ci.pvalue_hi],
        "delta": ci.delta,
    }


def _print_intervals(model, x, args, out=sys.stdout) -> None:
    cis = _intervals(model, x, args)
    if args.format == "json":
        records = [_interval_record(model, x, ci) for ci in cis]
        out.write(json.dumps(records[0] if len(records) == 1 else records, indent=2))
        out.write("\n")
        return
    if args.format == "csv":
        out.write("method,alpha,theta_lo,theta_hi,natural_lo,natural_hi,"
                  "pvalue_lo,pvalue_hi,delta\n")
        for ci in cis:
            cells = [ci.method, repr(ci.alpha), repr(ci.theta_lo), repr(ci.theta_hi),
                     repr(ci.natural_lo), repr(ci.natural_hi),
                     "" if ci.pvalue_lo is None else repr(ci.pvalue_lo),
                     "" if ci.pvalue_hi is None else repr(ci.pvalue_hi),
                     "" if ci.delta is None else repr(ci.delta)]
            out.write(",".join(cells) + "\n")
        return
    label = model.natural_label
    head = [f"model: {model.kind}"]
    head += [f"{k}={v}" for k, v in model.params.items()]
    head += [f"x={x}", f"alpha={args.alpha:g}"]
    out.write(" ".join(head) + "\n")
    est = point_estimate(model, x)
    out.write(f"estimate {label} = {_fmt(est)}\n")
    for ci in cis:
        out.write(
            f"{ci.method:<16} {label} [{_fmt(ci.natural_lo)}, {_fmt(ci.natural_hi)}]"
            f"   theta [{_fmt(ci.theta_lo)}, {_fmt(ci.theta_hi)}]"
            f"   endpoint p [{_fmt(ci.pvalue_lo)}, {_fmt(ci.pvalue_hi)}]\n"
        )


def _curve_jumps(model, x, t_from, t_to):
    """All special parameters theta_{k,x} inside [t_from, t_to]."""
    fam = model.family
    lo, hi = fam.support.lo, fam.support.hi
    ks = []
    k = x - 1
    while k >= lo and special_param(fam, x, k) >= t_from:
        if special_param(fam, x, k) <= t_to:
            ks.append(k)
        k -= 1
    k = x + 1
    while k <= hi and special_param(fam, x, k) <= t_to:
        if special_param(fam, x, k) >= t_from:
            ks.append(k)
        k += 1
    return sorted(ks, key=lambda k: special_param(fam, x, k))


def _print_curve(model, x, args, out=sys.stdout) -> None:
    if args.curve_from is None or args.curve_to is None:
        raise BadGrid("curve emission needs --from and --to")
    if args.points < 2:
        raise BadGrid("curve needs at least 2 points")
    if not args.curve_from < args.curve_to:
        raise BadGrid("curve needs --from < --to")
    t_from = model.from_natural(args.curve_from)
    t_to = model.from_natural(args.curve_to)
    rows = []
    for i in range(args.points):
        nat = args.curve_from + (args.curve_to - args.curve_from) * i / (args.points - 1)
        theta = model.from_natural(nat)
        rows.append((nat, sterne_pvalue(model, x, theta).value, "sample"))
    for k in _curve_jumps(model, x, t_from, t_to):
        t, left, right = jump_limits(model, x, k)
        nat = model.to_natural(t)
        rows.append((nat, left, "left"))
        rows.append((nat, right, "right"))
    rows.sort(key=lambda r: (r[0], r[2] == "right"))
    out.write("natural_param,pvalue,side\n")
    for nat, p, side in rows:
        out.write(f"{float(nat)!r},{float(p)!r},{side}\n")


def _print_audit(args, out=sys.stdout) -> None:
    if args.model == "binomial":
        if args.n is None:
            raise BadN("audit --model binomial needs --n")
        model = make_binomial(args.n)
    elif args.model == "poisson":
        model = make_poisson()
    else:
        if args.n1 is None or args.n2 is None or args.s is None:
            raise BadN("audit --model oddsratio needs --n1 --n2 --s")
        model = make_odds_ratio(args.n1, args.n2, args.s)
    if not args.grid_from < args.grid_to:
        raise BadGrid("audit needs --from < --to")
    if args.points < 2:
        raise BadGrid("audit needs at least 2 points")
    grid = [
        model.from_natural(
            args.grid_from + (args.grid_to - args.grid_from) * i / (args.points - 1)
        )
        for i in range(args.points)
    ]
    report = exact_coverage(model, args.method, args.alpha, grid, args.delta)
    write_csv(report, out)


def run(argv=None, out=sys.stdout) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "audit":
            _print_audit(args, out)
            return 0
        model, x = _build_model(args)
        if args.command == "curve" or getattr(args, "curve", False):
            _print_curve(model, x, args, out)
        else:
            _print_intervals(model, x, args, out)
        return 0
    except _ARGUMENT_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except ExactCIError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
