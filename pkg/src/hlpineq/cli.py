"""Command-line interface.

    hlpineq compute {omega|stechkin|budget-inverse|additive|class|recovery} ...
    hlpineq verify  {all|multiplicative|additive|duality|theorem8|classes|recovery} ...
    hlpineq curve   {omega|stechkin|recovery} ...

Exit codes: 0 ok, 1 failed verification, 2 usage error, 3 numeric/IO failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import classes, hlp, recovery, stechkin, verification
from .errors import HLPError
from .symbols import SymbolPair, named_pair, power_pair

DEFAULT_SEED = 42


def parse_grid(text: str) -> np.ndarray:
    """``log:a:b:n``, ``lin:a:b:n`` or a comma-separated list."""
    if text.startswith(("log:", "lin:")):
        kind, a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
        if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("grid needs at least one point")
        return np.geomspace(a, b, n) if kind == "log" else np.linspace(a, b, n)
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty grid")
    return np.asarray(vals)


def _grid_arg(text: str) -> np.ndarray:
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc


def _num(x: float) -> str:
    return format(float(x), ".17g")


def build_pair(args) -> SymbolPair:
    if args.pair == "power":
        return power_pair(args.k, args.r)
    return named_pair(args.phi, args.psi)


def _add_pair_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pair", choices=("power", "named"), default="power")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--phi", default="log1p_abs", help="registry name, e.g. power(1), exp_abs")
    p.add_argument("--psi", default="power(1)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlpineq", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="evaluate one quantity")
    c.add_argument("quantity", choices=("omega", "stechkin", "budget-inverse", "additive", "class", "recovery"))
    _add_pair_flags(c)
    c.add_argument("--delta", type=float)
    c.add_argument("--b", type=float)
    c.add_argument("--N", dest="N", type=float)
    _add_output_flags(c)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=("all", *verification.SUITES))
    _add_pair_flags(v)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--b-grid", type=_grid_arg, default=None)
    _add_output_flags(v)

    g = sub.add_parser("curve", help="tabulate a curve for plotting")
    g.add_argument("curve", choices=("omega", "stechkin", "recovery"))
    _add_pair_flags(g)
    g.add_argument("--delta-grid", type=_grid_arg, default=None)
    g.add_argument("--b-grid", type=_grid_arg, default=None)
    _add_output_flags(g)
    return parser


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hlpineq-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(v) -> str:
    return _num(v) if isinstance(v, (float, np.floating)) else str(v)


def _table(header, rows, fmt: str) -> str:
    """Rows hold raw values: JSON keeps numbers as numbers, CSV gets 17-digit text."""
    if fmt == "json":
        return json.dumps([{h: _jsonable(v) for h, v in zip(header, r)} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([_cell(v) for v in r] for r in rows)
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _need(parser, args, *names):
    for name in names:
        if getattr(args, name) is None:
            parser.error(f"{args.quantity} needs --{name}")


def cmd_compute(parser, args) -> int:
    pair = build_pair(args)
    q = args.quantity
    inputs = {"pair": pair.name}
    if q in ("omega", "recovery"):
        _need(parser, args, "delta")
        inputs["delta"] = args.delta
    elif q == "budget-inverse":
        _need(parser, args, "N")
        inputs["N"] = args.N
    else:
        _need(parser, args, "b")
        inputs["b"] = args.b

    if q == "omega":
        out = {"omega": hlp.modulus_of_continuity(pair.require_link(), args.delta)}
    elif q == "stechkin":
        bundle = stechkin.operator_budget(pair, args.b)
        out = {"N": bundle.budget, "E": stechkin.best_approx_value(pair, args.b), "maximizer": bundle.maximizer,
               "exact": bundle.exact}
    elif q == "budget-inverse":
        bundle = stechkin.solve_budget(pair, args.N)
        out = {"b": bundle.b, "N": bundle.budget, "E": bundle.slope, "maximizer": bundle.maximizer}
    elif q == "additive":
        slope, intercept = hlp.additive_coefficients(pair, args.b)
        out = {"slope": slope, "intercept": intercept}
    elif q == "class":
        bundle = stechkin.operator_budget(pair, args.b)
        out = {"E": classes.class_approx_value(pair, args.b), "budget": bundle.budget}
    else:
        plan = recovery.l_delta(pair, args.delta)
        out = {"b_star": plan.b_star, "value": plan.value}
        if pair.link is not None:
            out["omega"] = hlp.modulus_of_continuity(pair.link, args.delta)

    if args.format == "csv":
        text = _table([*inputs, *out], [[*inputs.values(), *out.values()]], "csv")
    else:
        text = json.dumps({"quantity": q, "inputs": inputs, **out}) + "\n"
    _write(text, args.output)
    return 0


def cmd_verify(parser, args) -> int:
    pairs = (build_pair(args),) if args._explicit_pair else verification.DEFAULT_PAIRS
    b_grid = tuple(args.b_grid) if args.b_grid is not None else verification.B_GRID
    rows = verification.run(args.suite, seed=args.seed, trials=args.trials, pairs=pairs, b_grid=b_grid)
    raw = [[r.suite, r.check, r.fixture, r.value, r.threshold, int(r.passed)] for r in rows]
    text = _table(verification.Row.HEADER, raw, args.format or "csv")
    _write(text, args.output)
    return 0 if all(r.passed for r in rows) else 1


def cmd_curve(parser, args) -> int:
    pair = build_pair(args)
    if args.curve == "stechkin":
        if args.b_grid is None:
            parser.error("curve stechkin needs --b-grid")
        header = ("b", "N_of_b", "slope", "maximizer")
        rows = []
        for b in args.b_grid:
            bun = stechkin.operator_budget(pair, float(b))
            rows.append([float(b), bun.budget, bun.slope, bun.maximizer])
    else:
        if args.delta_grid is None:
            parser.error(f"curve {args.curve} needs --delta-grid")
        link = pair.require_link()
        if args.curve == "omega":
            header = ("delta", "omega")
            rows = [[float(d), hlp.modulus_of_continuity(link, float(d))] for d in args.delta_grid]
        else:
            header = ("delta", "omega", "l_delta", "b_star")
            rows = []
            for d in args.delta_grid:
                plan = recovery.l_delta(pair, float(d))
                rows.append([float(d), hlp.modulus_of_continuity(link, float(d)), plan.value, plan.b_star])
    _write(_table(header, rows, args.format or "csv"), args.output)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    argv_list = sys.argv[1:] if argv is None else list(argv)
    args._explicit_pair = any(a in ("--pair", "--k", "--r", "--phi", "--psi") for a in argv_list)
    handler = {"compute": cmd_compute, "verify": cmd_verify, "curve": cmd_curve}[args.command]
    try:
        return handler(parser, args)
    except (HLPError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
