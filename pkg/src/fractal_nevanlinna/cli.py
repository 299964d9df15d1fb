"""Command-line front end.

Exit status: 0 on success, 1 when a checked inequality or property fails,
2 on usage errors, malformed inputs and failed preconditions.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds
from .content import hausdorff_content
from .errors import FractalNevanlinnaError
from .frostman import frostman_measure, verify_frostman
from .gauge import Gauge
from .harness import ConfigError, load_config, verify_corpus, worker_count, write_outputs
from .increasing import eval_m, from_literal as measure_from_literal, modulus_of_continuity
from .intervals import cantor_prefractal, from_literal as set_from_literal, similarity_dimension
from .nevanlinna import INNER, OUTER, LogRatio, circle_mean, pole_term, random_log_ratio

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _json_arg(name: str, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--{name} is not valid JSON: {exc}") from exc


def _float_arg(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _write_rows(path, header, rows) -> None:
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _print_json(obj) -> None:
    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return repr(x)
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        if isinstance(x, (np.floating, np.integer, np.bool_)):
            return clean(x.item())
        return x

    print(json.dumps(clean(obj), sort_keys=True))


def cmd_content(args) -> int:
    g = Gauge.from_dict(_json_arg("gauge", args.gauge))
    S = set_from_literal(_json_arg("set", args.set), args.r)
    res = hausdorff_content(g, S, args.diameter, args.mode, args.grid)
    _print_json(res.to_dict())
    return EXIT_OK


def cmd_frostman(args) -> int:
    g = Gauge.from_dict(_json_arg("gauge", args.gauge))
    E = set_from_literal(_json_arg("set", args.set), args.r)
    res = frostman_measure(g.restricted(E.r), E, args.base, args.depth)
    report = verify_frostman(res, g, E, args.trials, args.seed)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    m = res.distribution
    grid = np.unique(np.concatenate([np.linspace(0.0, E.r, args.grid + 1), m.knot_t]))
    _write_rows(out / "frostman.csv", ("t", "m"), zip(grid, eval_m(m, grid)))
    summary = {**res.to_dict(), "verification": report.to_dict()}
    with open(out / "frostman.json", "w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
    if not args.no_figures:
        from .plotting import plot_distribution

        plot_distribution(grid, eval_m(m, grid), out / "frostman.png", "Frostman distribution function")
    _print_json({"total_mass": res.total_mass, "empirical_A": res.empirical_A, "passed": report.passed})
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_modulus(args) -> int:
    spec = _json_arg("measure", args.measure)
    m = measure_from_literal(spec, args.r)
    grid = np.linspace(0.0, m.r, args.grid + 1)
    _write_rows(args.output, ("t", "m", "omega"), zip(grid, eval_m(m, grid), modulus_of_continuity(m, grid)))
    if args.figure:
        from .plotting import plot_distribution

        plot_distribution(grid, eval_m(m, grid), args.figure, "m and its modulus",
                          omega=modulus_of_continuity(m, grid))
    return EXIT_OK


def cmd_characteristic(args) -> int:
    u = LogRatio.from_dict(_json_arg("function", args.function))
    if not 0 <= args.r < args.R:
        raise ConfigError(f"need 0 <= r < R, got r={args.r}, R={args.R}")
    radius = args.r if args.convention == INNER else args.R
    mean = circle_mean(u, radius, args.tol).value
    pt = pole_term(u, args.r, args.R)
    _print_json({"value": mean + pt, "circle_mean": mean, "pole_term": pt, "convention": args.convention})
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    reports = verify_corpus(cfg, worker_count(), args.rhs_scale)
    summary = write_outputs(reports, args.output, cfg, figures=not args.no_figures)
    _print_json({"passed": summary["passed"], "cases": summary["cases"], "counts": summary["counts"],
                 "max_ratio": summary["max_ratio"]})
    return EXIT_OK if summary["passed"] else EXIT_FAILURE


def _sweep_measure(parameter: str, value: float, cfg: dict):
    """Frostman measure on a Cantor prefractal, varying its depth or its dimension."""
    if parameter == "depth":
        depth = int(value)
        ratio = float(cfg.get("ratio", 1.0 / 3.0))
    else:
        depth = int(cfg.get("depth", 6))
        ratio = 0.5 ** (1.0 / value)
    d = similarity_dimension(ratio)
    r = float(cfg.get("r", 1.0))
    E = cantor_prefractal(depth, ratio, r)
    g = Gauge.power(1.0, d, r)
    base = int(cfg.get("base", 3 if abs(ratio - 1.0 / 3.0) < 1e-12 else 2))
    net_depth = int(cfg.get("net_depth", depth if base == 3 else min(depth + 4, 16)))
    return frostman_measure(g, E, base, net_depth).distribution, E, g, d


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    parameter = cfg.get("parameter")
    if parameter not in ("depth", "dimension"):
        raise ConfigError("config field 'parameter' must be 'depth' or 'dimension'")
    values = cfg.get("values")
    if not isinstance(values, list) or not values:
        raise ConfigError("config field 'values' must be a nonempty list")
    variant = cfg.get("variant", bounds.THM1)
    if variant not in bounds.VARIANTS:
        raise ConfigError(f"config field 'variant' must be one of {list(bounds.VARIANTS)}")
    r, R = float(cfg.get("r", 1.0)), float(cfg.get("R", 2.0))
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    functions = [random_log_ratio(rng, R) for _ in range(int(cfg.get("count", 10)))]
    rows = []
    for value in values:
        m, E, g, d = _sweep_measure(parameter, float(value), {**cfg, "r": r})
        case = bounds.CaseInputs(m, E, g, (1.0, d))
        for u in functions:
            rep = bounds.evaluate_case("sweep", u, case, R, (1.0,), (variant,))[0]
            if rep.status[variant] == "skipped":
                raise FractalNevanlinnaError(f"variant {variant} inapplicable: {rep.notes[variant]}")
            rows.append((float(value), rep.lhs, rep.rhs[variant], rep.ratio(variant)))
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    _write_rows(out / "sweep.csv", ("parameter", "lhs", "rhs", "ratio"), rows)
    if not args.no_figures:
        from .plotting import plot_sweep

        plot_sweep([x[0] for x in rows], [x[3] for x in rows], out / "sweep.png", parameter)
    failed = any(not bounds.passes(x[1], x[2]) for x in rows)
    _print_json({"rows": len(rows), "max_ratio": max(x[3] for x in rows), "passed": not failed})
    return EXIT_FAILURE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fractal-nevanlinna", description="Hausdorff contents, Frostman measures and "
                "Nevanlinna-characteristic bounds for integrals over fractal sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("content", help="h-content of an interval union")
    c.add_argument("--gauge", required=True, help='gauge literal, e.g. {"kind":"power","b":1,"d":0.5}')
    c.add_argument("--set", required=True, help="set literal: interval list or {\"cantor\":{...}}")
    c.add_argument("--diameter", type=_float_arg, default=math.inf)
    c.add_argument("--mode", choices=["dp", "brute", "limit"], default="dp")
    c.add_argument("--grid", type=int, default=16, help="refinement grid for brute force")
    c.add_argument("--r", type=float, default=None, help="ambient interval [0, r] (default from the set)")
    c.set_defaults(func=cmd_content)

    f = sub.add_parser("frostman", help="Frostman measure of a set")
    f.add_argument("--gauge", required=True)
    f.add_argument("--set", required=True)
    f.add_argument("--base", type=int, default=2)
    f.add_argument("--depth", type=int, default=10)
    f.add_argument("--r", type=float, default=None)
    f.add_argument("--grid", type=int, default=1024, help="uniform CSV grid (knots are always added)")
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--output", default=".", help="directory for frostman.csv/json/png")
    f.add_argument("--no-figures", action="store_true")
    f.set_defaults(func=cmd_frostman)

    m = sub.add_parser("modulus", help="CSV of t, m(t), omega_m(t)")
    m.add_argument("--measure", required=True, help='e.g. {"kind":"staircase","depth":6}')
    m.add_argument("--grid", type=int, default=1000)
    m.add_argument("--r", type=float, default=None)
    m.add_argument("--output", default="-", help="CSV path or - for stdout")
    m.add_argument("--figure", default=None, help="optional PNG path")
    m.set_defaults(func=cmd_modulus)

    t = sub.add_parser("characteristic", help="difference characteristic T_U(r, R)")
    t.add_argument("--function", required=True, help='{"constant":0,"zeros":[[re,im,mult]],"poles":[]}')
    t.add_argument("--r", type=float, required=True)
    t.add_argument("--R", type=float, required=True)
    t.add_argument("--tol", type=float, default=1e-10)
    t.add_argument("--convention", choices=[INNER, OUTER], default=INNER,
                   help="circle of the U+ mean: radius r (inner) or R (outer)")
    t.set_defaults(func=cmd_characteristic)

    v = sub.add_parser("verify", help="run the inequality corpus from a JSON config")
    v.add_argument("--config", required=True)
    v.add_argument("--output", default=".", help="directory for report.csv/json and figures")
    v.add_argument("--rhs-scale", type=float, default=None, help="multiply every RHS (negative controls)")
    v.add_argument("--no-figures", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="ratio against Cantor depth or dimension")
    s.add_argument("--config", required=True)
    s.add_argument("--output", default=".")
    s.add_argument("--no-figures", action="store_true")
    s.set_defaults(func=cmd_sweep)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FractalNevanlinnaError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
