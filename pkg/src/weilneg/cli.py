"""Command-line interface: ``weilneg <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections import defaultdict
from pathlib import Path

from . import figure
from .applications import (TABLE1_LEVELS, TABLE1_WEIGHTS, QConvention, level_of_q,
                           mu_of_weight, predict_grid, q_of_level, rank_conductor_bound,
                           verify_rank1, verify_rank2, verify_table1)
from .ef_engine import ZeroList, explicit_formula_residual
from .errors import WeilnegError
from .feq_model import CoefficientData, FunctionalEquationParams
from .lmfdb_client import ClientConfig, LmfdbClient, Mode, fixture_isogeny_classes
from .special_fn import QuadratureSpec
from .test_fn import DEFAULT_DELTA, FejerTestFunction
from .thresholds import classify, compute_thresholds

log = logging.getLogger("weilneg")

RESIDUAL_QUAD_BUDGET = 1e-6


class UsageError(Exception):
    pass


def _emit(args, text_lines, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(text_lines))


def _ctx(args):
    tf = FejerTestFunction(args.delta)
    spec = QuadratureSpec(tolerance=args.tolerance)
    conv = QConvention.parse(args.convention)
    return tf, spec, conv


def _client(args):
    cfg = ClientConfig.from_file(args.config) if args.config else None
    return LmfdbClient(Mode.parse(args.mode), args.cache_dir, cfg)


def _degree_mu(args):
    if args.weight is not None:
        if args.weight < 2 or args.weight % 2:
            raise UsageError(f"--weight must be an even integer >= 2, got {args.weight}")
        return 2, list(mu_of_weight(args.weight))
    if not args.mu:
        raise UsageError("give --weight or --mu")
    return len(args.mu), list(args.mu)


def cmd_threshold(args):
    tf, spec, conv = _ctx(args)
    d, mu = _degree_mu(args)
    th = compute_thresholds(d, mu, args.rank, tf, spec)
    n0, n1 = level_of_q(th.q0, conv), level_of_q(th.q1, conv)
    payload = {"degree": d, "mu": mu, "rank": args.rank, "delta": tf.delta,
               "q0": th.q0, "q1": th.q1, "ratio_q1_q0": th.q1 / th.q0,
               "log_ratio": math.log(th.q1 / th.q0), "ell_terms": list(th.ell_terms),
               "ell_sum": th.ell_sum, "kappa2": th.kappa2, "convention": conv.name,
               "level_q0": n0, "level_q1": n1}
    lines = [f"degree {d}, mu = {', '.join(f'{m:g}' for m in mu)}, rank {args.rank}, "
             f"delta = {tf.delta:.10g}",
             *(f"  ell(mu={m:g}) = {v:.10f}" for m, v in zip(mu, th.ell_terms)),
             f"  kappa_2     = {th.kappa2:.10f}",
             f"  Q0          = {th.q0:.10f}",
             f"  Q1          = {th.q1:.10f}",
             f"  Q1/Q0       = {th.q1 / th.q0:.10f}",
             f"  level range under {conv.name}: Q0 <-> N = {n0:.6f}, Q1 <-> N = {n1:.6f}"]
    _emit(args, lines, payload)
    return 0


def cmd_classify(args):
    tf, spec, conv = _ctx(args)
    mu = list(mu_of_weight(args.weight))
    q = q_of_level(args.level, conv)
    out = classify(q, 2, mu, args.rank, tf, spec)
    payload = {"weight": args.weight, "level": args.level, "rank": args.rank,
               "convention": conv.name, "q_eff": q, "classification": out.classification.name,
               "a2_upper_bound": out.a2_upper_bound, "q0": out.thresholds.q0,
               "q1": out.thresholds.q1}
    ub = "n/a" if out.a2_upper_bound is None else f"{out.a2_upper_bound:.6f}"
    lines = [f"k={args.weight} N={args.level} rank={args.rank} ({conv.name}, Q={q:.6f})",
             f"  Q0 = {out.thresholds.q0:.6f}  Q1 = {out.thresholds.q1:.6f}",
             f"  classification: {out.classification.name}",
             f"  a(2) upper bound (normalised): {ub}"]
    _emit(args, lines, payload)
    return 0


def cmd_grid(args):
    tf, spec, conv = _ctx(args)
    grid = predict_grid(args.weights, args.levels, args.rank, conv, tf, spec)
    short = {"Impossible": "x", "ForcedNegativeA2": "-", "Unconstrained": "."}
    lines = [f"rank {args.rank}, {conv.name}: x impossible, - a(2)<0 forced, . unconstrained",
             "k\\N " + " ".join(f"{N:>3}" for N in args.levels)]
    for k in sorted(set(args.weights)):
        lines.append(f"{k:>3} " + " ".join(
            f"{short[grid.cells[(k, N)].classification.name]:>3}" for N in args.levels))
    payload = {"rank": args.rank, "convention": conv.name,
               "cells": [{"weight": k, "level": N, "classification": o.classification.name,
                          "a2_upper_bound": o.a2_upper_bound}
                         for (k, N), o in grid.cells.items()]}
    _emit(args, lines, payload)
    return 0


def cmd_rank_bound(args):
    tf, spec, conv = _ctx(args)
    bounds = [rank_conductor_bound(r, tf, spec, conv) for r in args.ranks]
    lines = [f"rank {b.rank}: Q0 = {b.min_q:.6f}, conductor >= {b.min_conductor:.4f} "
             f"(smallest integer {b.min_conductor_int}) [{conv.name}]" for b in bounds]
    payload = [{"rank": b.rank, "min_q": b.min_q, "min_conductor": b.min_conductor,
                "min_conductor_int": b.min_conductor_int} for b in bounds]
    _emit(args, lines, payload)
    return 0


def cmd_verify_tables(args):
    tf, spec, conv = _ctx(args)
    client = _client(args)
    if args.table == 1:
        cells = defaultdict(list)
        for k in TABLE1_WEIGHTS:
            for N in TABLE1_LEVELS:
                cells[(k, N)] = client.fetch_newforms(k, N)
        for N in range(16, 22):
            cells[(2, N)] = client.fetch_newforms(2, N)
        grid = predict_grid(TABLE1_WEIGHTS, TABLE1_LEVELS, 0, conv, tf, spec)
        report = verify_table1(cells, grid)
    else:
        if client.mode is Mode.FixtureOnly:
            classes = fixture_isogeny_classes()
        else:
            hi = 121 if args.table == 2 else 1147
            lo = 11 if args.table == 2 else 122
            classes = [c for N in range(lo, hi + 1) for c in client.fetch_isogeny_classes(N)]
        if args.table == 2:
            report = verify_rank1([c for c in classes if c.conductor <= 121], tf, spec, conv)
        else:
            report = verify_rank2([c for c in classes if c.conductor > 121], tf, spec, conv)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
        for key, value in report.meta.items():
            print(f"{key}: {value}")
    return 0 if report.passed else 1


def cmd_ef_residual(args):
    tf, spec, conv = _ctx(args)
    client = _client(args)
    zeros = client.fetch_zeros(args.label)
    if args.height > zeros.completeness_height:
        raise UsageError(f"zeros for {args.label} are complete only to "
                         f"{zeros.completeness_height:g}")
    parts = args.label.split(".")
    N, k = int(parts[0]), int(parts[1])
    forms = {r.label: r for r in client.fetch_newforms(k, N)}
    rec = forms.get(args.label)
    if rec is None or rec.a2_normalized is None:
        raise UsageError(f"{args.label}: no rational a(2) available")
    feq = FunctionalEquationParams(2, mu_of_weight(k), q_of_level(N, conv))
    coeffs = CoefficientData.from_primes({2: rec.a2_normalized})
    res = explicit_formula_residual(feq, coeffs, ZeroList(zeros.positive_ordinates), tf,
                                    args.height, spec)
    ok = res.within_budget(RESIDUAL_QUAD_BUDGET)
    zeros_used = sum(1 for g in zeros.positive_ordinates if g <= args.height)
    payload = {"label": args.label, "convention": conv.name, "height": args.height,
               "zeros_used": zeros_used,
               "lhs_truncated": res.lhs_truncated, "rhs": res.rhs, "residual": res.residual,
               "tail_bound": res.tail_bound, "quadrature_budget": RESIDUAL_QUAD_BUDGET,
               "status": "OK" if ok else "ERROR",
               "rhs_breakdown": {"logq_term": res.breakdown.logq_term,
                                 "ell_terms": list(res.breakdown.ell_terms),
                                 "prime_terms": {str(n): v for n, v in
                                                 res.breakdown.prime_terms.items()}}}
    lines = [f"{args.label}: explicit formula with zeros up to height {args.height:g} "
             f"({zeros_used} zeros)",
             f"  zero side (truncated) = {res.lhs_truncated:.10f}",
             f"  right side            = {res.rhs:.10f}",
             f"  residual              = {res.residual:.3e}",
             f"  tail bound            = {res.tail_bound:.3e}",
             f"  status: {'OK' if ok else 'ERROR'}"]
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_plot_digamma(args):
    fmt = args.format if args.format in ("csv", "svg") else "csv"
    if not args.step > 0:
        raise UsageError("--step must be positive")
    if args.t_max < args.t_min:
        raise UsageError("--t-max must not be below --t-min")
    t, vals = figure.digamma_curves(args.mu, args.t_min, args.t_max, args.step)
    text = figure.to_svg(t, vals, args.mu) if fmt == "svg" else figure.to_csv(t, vals, args.mu)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        path = Path(args.output)
        try:
            path.write_text(text, encoding="utf-8", newline="")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
        print(f"wrote {len(t)} samples x {len(args.mu)} curves to {path}", file=sys.stderr)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=float, default=DEFAULT_DELTA,
                        help="half-width of the support of f-hat (default 1/(2 pi))")
    common.add_argument("--tolerance", type=float, default=1e-8)
    common.add_argument("--convention", default=QConvention.CalibratedSqrtN.name,
                        choices=[c.name for c in QConvention])
    common.add_argument("--mode", default="live", choices=["live", "cache", "fixture"])
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--config", default=None, help="JSON file overriding ClientConfig")
    common.add_argument("--format", default="text", choices=["text", "json", "csv", "svg"])
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="weilneg", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("threshold", parents=[common], help="Q0 and Q1 for given gamma data")
    s.add_argument("--weight", type=int)
    s.add_argument("--mu", type=float, nargs="+")
    s.add_argument("--rank", type=int, default=0)
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("classify", parents=[common], help="classify one (weight, level)")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--rank", type=int, default=0)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("grid", parents=[common], help="classification grid over weights x levels")
    s.add_argument("--weights", type=int, nargs="+", default=list(TABLE1_WEIGHTS))
    s.add_argument("--levels", type=int, nargs="+", default=list(TABLE1_LEVELS))
    s.add_argument("--rank", type=int, default=0)
    s.set_defaults(func=cmd_grid)

    s = sub.add_parser("rank-bound", parents=[common], help="minimal conductor per rank")
    s.add_argument("--ranks", type=int, nargs="+", default=[0, 1, 2, 3])
    s.set_defaults(func=cmd_rank_bound)

    s = sub.add_parser("verify-tables", parents=[common], help="check data and predictions")
    s.add_argument("table", type=int, choices=[1, 2, 3])
    s.set_defaults(func=cmd_verify_tables)

    s = sub.add_parser("ef-residual", parents=[common], help="both sides of the explicit formula")
    s.add_argument("--label", default="11.2.a.a")
    s.add_argument("--height", type=float, default=200.0)
    s.set_defaults(func=cmd_ef_residual)

    s = sub.add_parser("plot-digamma", parents=[common], help="Re psi curves as CSV or SVG")
    s.add_argument("--mu", type=float, nargs="+", default=list(figure.DEFAULT_MUS))
    s.add_argument("--t-min", type=float, default=-30.0)
    s.add_argument("--t-max", type=float, default=30.0)
    s.add_argument("--step", type=float, default=0.1)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_plot_digamma)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (WeilnegError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
