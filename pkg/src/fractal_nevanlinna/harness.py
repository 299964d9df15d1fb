"""Config-driven corpus runs of the integral bounds.

A config names the radii, the test functions (a seeded random family or an
explicit list) and the integrating functions with their sets, gauges and
theorem-4 parameters.  :func:`verify_corpus` evaluates every combination
and returns :class:`~fractal_nevanlinna.bounds.BoundReport` records in case
order.
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds
from .bounds import BoundReport, CaseInputs, evaluate_case, lhs_integral, measure_factors
from .errors import DomainError, PreconditionError
from .frostman import frostman_measure
from .gauge import Gauge
from .increasing import IncreasingFunction
from .increasing import from_literal as measure_from_literal
from .intervals import from_literal as set_from_literal
from .nevanlinna import INNER, OUTER, LogRatio, characteristic_T, circle_mean, pole_term, random_log_ratio

THREADS_ENV = "FRACTAL_NEVANLINNA_THREADS"
CSV_FIELDS = ("case_id", "variant", "r0", "lhs", "rhs", "ratio", "status")
T_TOL = 1e-10

STANDARD_CONFIG = {
    "seed": 20240521,
    "r": 1.0,
    "R": 2.0,
    "r0_fractions": [0.0, 0.5, 1.0],
    "tolerance": 1e-8,
    "convention": OUTER,
    "functions": {"random": {"count": 100, "max_singularities": 6, "max_multiplicity": 2, "spread": 0.9}},
    "measures": [
        {"name": "identity", "measure": {"kind": "identity"}, "set": {"intervals": [[0.0, 1.0]]},
         "gauge": {"kind": "power", "b": 1.0, "d": 1.0}, "theorem4": {"b": 1.0, "d": 1.0}},
        {"name": "frostman-cantor",
         "measure": {"kind": "frostman", "gauge": {"kind": "power", "b": 1.0, "d": math.log(2) / math.log(3)},
                     "set": {"cantor": {"depth": 8, "ratio": 1.0 / 3.0}}, "base": 3, "depth": 8},
         "gauge": {"kind": "power", "b": 1.0, "d": math.log(2) / math.log(3)},
         "theorem4": {"b": 1.0, "d": math.log(2) / math.log(3)}},
        {"name": "random-linear", "measure": {"kind": "random-linear", "pieces": 8, "flat_fraction": 0.3},
         "gauge": "lipschitz", "theorem4": "lipschitz"},
    ],
    "variants": list(bounds.VARIANTS),
}


class ConfigError(DomainError):
    """A config field is missing or malformed; the message names the field."""


def standard_config() -> dict:
    return json.loads(json.dumps(STANDARD_CONFIG))


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def worker_count() -> int:
    """Worker cap from the environment, bounded by the CPU count."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return cpus
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, min(cap, cpus))


def _field(cfg: dict, name: str, default=None, kind=float):
    if name not in cfg:
        if default is None:
            raise ConfigError(f"config field {name!r} is required")
        return default
    try:
        return kind(cfg[name])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config field {name!r} is malformed: {cfg[name]!r}") from exc


def build_functions(cfg: dict, R: float) -> list[tuple[str, LogRatio]]:
    spec = cfg.get("functions")
    if not isinstance(spec, dict):
        raise ConfigError("config field 'functions' must be an object with 'random' or 'list'")
    seed = _field(cfg, "seed", 0, int)
    out = []
    if "random" in spec:
        rnd = spec["random"]
        rng = np.random.default_rng(seed)
        count = _field(rnd, "count", 100, int)
        for i in range(count):
            u = random_log_ratio(rng, R, _field(rnd, "max_singularities", 6, int),
                                 _field(rnd, "max_multiplicity", 2, int), _field(rnd, "spread", 0.9))
            out.append((f"u{i:03d}", u))
    if "list" in spec:
        for i, item in enumerate(spec["list"]):
            try:
                out.append((str(item.get("name", f"f{i:03d}")), LogRatio.from_dict(item, R)))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"config field 'functions.list[{i}]' is malformed: {exc}") from exc
    if not out:
        raise ConfigError("config field 'functions' produced no test functions")
    return out


def random_linear_measure(rng: np.random.Generator, r: float, pieces: int, flat_fraction: float) -> IncreasingFunction:
    """Jump-free piecewise-linear ``m`` with some flat pieces (so its support is a proper union)."""
    cuts = np.sort(rng.uniform(0.0, r, pieces - 1))
    t = np.concatenate([[0.0], cuts, [r]])
    inc = rng.exponential(1.0, pieces) * (rng.random(pieces) >= flat_fraction)
    if not np.any(inc > 0):
        inc[int(rng.integers(pieces))] = 1.0
    return IncreasingFunction(r, knots=list(zip(t.tolist(), np.concatenate([[0.0], np.cumsum(inc)]).tolist())))


def _max_slope(m: IncreasingFunction) -> float:
    _, _, slopes = m.density_segments()
    if m.has_jumps or m.staircase is not None or slopes.size == 0:
        raise ConfigError("'lipschitz' gauges need a jump-free piecewise-linear measure")
    return float(np.max(slopes))


def build_case(entry: dict, index: int, r: float, seed: int) -> tuple[str, CaseInputs]:
    name = str(entry.get("name", f"m{index}"))
    where = f"measures[{index}]"
    mspec = entry.get("measure")
    if not isinstance(mspec, dict):
        raise ConfigError(f"config field '{where}.measure' must be an object")
    kind = mspec.get("kind", "general")
    S = None
    gauge = None
    try:
        if kind == "frostman":
            g = Gauge.from_dict(mspec["gauge"]).restricted(r)
            E = set_from_literal(mspec["set"], r)
            res = frostman_measure(g, E, int(mspec.get("base", 2)), int(mspec.get("depth", 8)))
            m, S, gauge = res.distribution, E, g
        elif kind == "random-linear":
            rng = np.random.default_rng([seed, index])
            m = random_linear_measure(rng, r, int(mspec.get("pieces", 8)), float(mspec.get("flat_fraction", 0.3)))
        else:
            m = measure_from_literal({**mspec, "r": mspec.get("r", r)}, r)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"config field '{where}.measure' is malformed: {exc}") from exc
    if abs(m.r - r) > 1e-12 * r:
        raise ConfigError(f"config field '{where}.measure' lives on [0, {m.r}] but r = {r}")
    if "set" in entry and entry["set"] != "support":
        try:
            S = set_from_literal(entry["set"], r)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"config field '{where}.set' is malformed: {exc}") from exc
    elif S is None:
        S = m.support()
    gspec = entry.get("gauge")
    if gspec == "lipschitz":
        gauge = Gauge.power(_max_slope(m), 1.0, r)
    elif isinstance(gspec, dict):
        try:
            gauge = Gauge.from_dict(gspec).restricted(r)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"config field '{where}.gauge' is malformed: {exc}") from exc
    t4 = entry.get("theorem4")
    if t4 == "lipschitz":
        t4 = (_max_slope(m), 1.0)
    elif isinstance(t4, dict):
        try:
            t4 = (float(t4["b"]), float(t4["d"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"config field '{where}.theorem4' needs numeric b and d") from exc
    elif t4 is not None:
        raise ConfigError(f"config field '{where}.theorem4' must be an object or 'lipschitz'")
    diameter = entry.get("diameter")
    diameter = math.inf if diameter in (None, "inf") else float(diameter)
    return name, CaseInputs(m, S, gauge, t4, diameter)


@dataclass
class Prepared:
    r: float
    R: float
    fractions: tuple
    variants: tuple
    tol: float
    convention: str
    rhs_scale: float
    cases: list
    factors: list


def prepare(cfg: dict, rhs_scale: float | None = None) -> Prepared:
    r = _field(cfg, "r", 1.0)
    R = _field(cfg, "R", 2.0)
    if not 0 < r < R:
        raise ConfigError(f"config fields 'r' and 'R' need 0 < r < R, got r={r}, R={R}")
    fractions = tuple(float(f) for f in cfg.get("r0_fractions", [0.0, 0.5, 1.0]))
    if any(not 0 <= f <= 1 for f in fractions):
        raise ConfigError("config field 'r0_fractions' must lie in [0, 1]")
    variants = tuple(cfg.get("variants", bounds.VARIANTS))
    unknown = [v for v in variants if v not in bounds.VARIANTS]
    if unknown:
        raise ConfigError(f"config field 'variants' has unknown entries {unknown}")
    convention = cfg.get("convention", OUTER)
    if convention not in (INNER, OUTER):
        raise ConfigError(f"config field 'convention' must be 'inner' or 'outer', got {convention!r}")
    seed = _field(cfg, "seed", 0, int)
    entries = cfg.get("measures")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("config field 'measures' must be a nonempty list")
    cases = [build_case(e, i, r, seed) for i, e in enumerate(entries)]
    factors = []
    for _, case in cases:
        try:
            factors.append(measure_factors(case.measure, R))
        except PreconditionError:
            factors.append(None)
    scale = _field(cfg, "rhs_scale", 1.0) if rhs_scale is None else float(rhs_scale)
    return Prepared(r, R, fractions, variants, _field(cfg, "tolerance", 1e-8), convention, scale, cases, factors)


def _characteristics(u: LogRatio, prep: Prepared) -> dict:
    out = {}
    if prep.convention == OUTER:
        mean = circle_mean(u, prep.R, T_TOL).value
        for f in prep.fractions:
            out[f] = mean + pole_term(u, f * prep.r, prep.R)
    else:
        for f in prep.fractions:
            out[f] = characteristic_T(u, f * prep.r, prep.R, T_TOL, INNER)
    return out


def evaluate_function(name: str, u: LogRatio, prep: Prepared) -> list[BoundReport]:
    T_values = _characteristics(u, prep)
    reports = []
    for (mname, case), factors in zip(prep.cases, prep.factors):
        lhs = lhs_integral(u, case.measure, prep.r, prep.tol)
        reports += evaluate_case(f"{name}/{mname}", u, case, prep.R, prep.fractions, prep.variants, lhs=lhs,
                                 factors=factors, T_values=T_values, rhs_scale=prep.rhs_scale,
                                 convention=prep.convention, tol=prep.tol)
    return reports


_WORKER_PREP: Prepared | None = None


def _init_worker(prep: Prepared) -> None:
    global _WORKER_PREP
    _WORKER_PREP = prep


def _run_one(item) -> list[BoundReport]:
    name, u = item
    return evaluate_function(name, u, _WORKER_PREP)


def verify_corpus(cfg: dict, workers: int = 1, rhs_scale: float | None = None) -> list[BoundReport]:
    """Run every (function, measure, r0) case; failures are data, skipped variants are not passes."""
    prep = prepare(cfg, rhs_scale)
    functions = build_functions(cfg, prep.R)
    if workers <= 1:
        chunks = [evaluate_function(name, u, prep) for name, u in functions]
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(prep,)) as pool:
            chunks = list(pool.map(_run_one, functions))
    return [rep for chunk in chunks for rep in chunk]


def _fmt(x) -> str:
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def write_csv(reports: list[BoundReport], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for rep in reports:
            for row in rep.rows():
                w.writerow([_fmt(float(row[k])) if k in ("r0", "lhs", "rhs", "ratio") else row[k]
                            for k in CSV_FIELDS])


def summarize(reports: list[BoundReport]) -> dict:
    counts: dict[str, dict[str, int]] = {}
    worst: dict[str, float] = {}
    for rep in reports:
        for variant, status in rep.status.items():
            c = counts.setdefault(variant, {"pass": 0, "fail": 0, "skipped": 0})
            c[status] += 1
            ratio = rep.ratio(variant)
            if status != "skipped" and math.isfinite(ratio):
                worst[variant] = max(worst.get(variant, 0.0), ratio)
    return {"cases": len({rep.case_id for rep in reports}), "records": len(reports),
            "passed": all(rep.passed for rep in reports), "counts": counts, "max_ratio": worst}


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    return x


def write_json(reports: list[BoundReport], path, cfg: dict | None = None) -> dict:
    summary = summarize(reports)
    doc = {"summary": summary, "config": cfg, "reports": [rep.to_dict() for rep in reports]}
    with open(path, "w") as fh:
        json.dump(_jsonable(doc), fh, indent=1, sort_keys=True)
    return summary


def write_outputs(reports: list[BoundReport], outdir, cfg: dict | None = None, figures: bool = True) -> dict:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(reports, out / "report.csv")
    summary = write_json(reports, out / "report.json", cfg)
    if figures:
        from .plotting import plot_ratios

        plot_ratios(reports, out / "ratios.png")
    return summary

