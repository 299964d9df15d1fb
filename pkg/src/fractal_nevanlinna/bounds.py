"""Right-hand sides of the integral bounds and the checks that feed them.

Every bound has the shape ``(6R/(R-r)) T_U(r0, R) * F(m)`` where ``F`` is a
functional of the integrating function ``m``: the max/sum factors built from
the modulus of continuity, the gauge form ``M ln(4 e^{s_h} R / h^{-1}(M))``,
its content substitution, and the d-dimensional form.  The left-hand side
is the Stieltjes integral of ``M_U^+`` against ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .content import content_dp
from .errors import CapabilityError, DegenerateSetError, DomainError, PreconditionError
from .frostman import frostman_measure
from .gauge import Gauge, eval_gauge, inverse_gauge, stretch_constant
from .increasing import (IncreasingFunction, dini_integral, modulus_of_continuity, stieltjes_integral,
                         table_dini_integral, table_log_integral)
from .intervals import IntervalUnion
from .nevanlinna import OUTER, LogRatio, characteristic_T, max_positive
from .quadrature import QuadResult

PASS_RTOL = 1e-6
PASS_ATOL = 1e-9
GRID_SLACK = 1e-9
LHS_TOL = 1e-8

MAIN_MAX = "main-max"
MAIN_SUM = "main-sum"
THM1 = "thm1"
THM2 = "thm2-content"
THM4 = "thm4"
VARIANTS = (MAIN_MAX, MAIN_SUM, THM1, THM2, THM4)
# side checks reported next to the bounds
DOMINANCE = "sum-dominance"
CHAIN_LOWER = "thm2-chain-lower"
CHAIN_UPPER = "thm2-chain-upper"


def passes(lhs: float, rhs: float) -> bool:
    return bool(lhs <= rhs * (1.0 + PASS_RTOL) + PASS_ATOL)


def coefficient(r: float, R: float) -> float:
    if not 0 < r < R:
        raise DomainError(f"need 0 < r < R, got r={r}, R={R}")
    return 6.0 * R / (R - r)


def xlog(x: float, scale: float) -> float:
    """``x ln(scale / x)`` with the limit value 0 at ``x = 0``."""
    return 0.0 if x == 0 else x * math.log(scale / x)


def lhs_integral(u: LogRatio, m: IncreasingFunction, r: float | None = None, tol: float = LHS_TOL) -> QuadResult:
    """``int_[0, r] M_U^+(t) dm(t)``, with pole radii kept off the quadrature nodes."""
    r = m.r if r is None else r
    if abs(r - m.r) > 1e-12 * max(1.0, r):
        raise DomainError(f"m lives on [0, {m.r}], not [0, {r}]")
    if not u.radius_guard > r:
        raise DomainError(f"radius guard {u.radius_guard} must exceed r = {r}")
    radii = [abs(loc) for loc, _ in u.poles if abs(loc) <= r]
    return stieltjes_integral(lambda t: max_positive(u, t), m, rtol=tol, singular_points=radii)


@dataclass(frozen=True)
class MeasureFactors:
    """Functionals of ``m`` entering the main bound for a given ``R``."""

    total_variation: float
    diameter: float
    dini: float
    dini_certified: bool
    log_integral: float
    sum_factor: float

    @property
    def max_factor(self) -> float:
        return max(self.total_variation, self.log_integral)

    @property
    def sum_max_factor(self) -> float:
        return max(self.total_variation, self.sum_factor)


def measure_factors(m: IncreasingFunction, R: float, certify: bool = True) -> MeasureFactors:
    """``M``, ``d_m`` and the two versions of the modulus factor.

    Both factors integrate against the materialized table of ``omega_m``:
    ``int_0^{d_m} ln(4R/t) d omega`` and ``int_0^{d_m} omega/t dt + M ln(4R/d_m)``.
    The Dini condition on ``[0, 4R]`` is certified separately by quadrature
    on the exact modulus when ``certify`` is set.
    """
    M = m.total_variation
    if M == 0:
        return MeasureFactors(0.0, 0.0, 0.0, True, 0.0, 0.0)
    if m.has_jumps:
        raise PreconditionError("Dini condition fails: m has a jump, so omega_m/t is not integrable at 0",
                                witness={"jump_locations": m.jump_t.tolist()})
    d = m.stabilization_diameter
    if certify:
        dini = dini_integral(m, 4.0 * R, rtol=1e-8)
        if not math.isfinite(dini.value):
            raise PreconditionError("Dini condition fails", witness={"dini": dini.value})
        dini_value, certified = dini.value, dini.certified
    else:
        dini_value, certified = math.nan, False
    ts, ws = m.omega_table
    log_int = table_log_integral(ts, ws, 4.0 * R, d)
    sum_factor = table_dini_integral(ts, ws, d) + M * math.log(4.0 * R / d)
    return MeasureFactors(M, d, dini_value, certified, log_int, sum_factor)


def rhs_main(T: float, r: float, R: float, factors: MeasureFactors, variant: str = MAIN_MAX) -> float:
    """``(6R/(R-r)) T max{M, I}`` with ``I`` the log integral (max) or the Dini sum (sum)."""
    if variant == MAIN_MAX:
        factor = factors.max_factor
    elif variant == MAIN_SUM:
        factor = factors.sum_max_factor
    else:
        raise DomainError(f"unknown main variant {variant!r}")
    return coefficient(r, R) * T * factor


def check_modulus_bound(m: IncreasingFunction, g: Gauge, grid: int = 1000) -> None:
    """Raise :class:`PreconditionError` unless ``omega_m(t) <= h(t)`` on a grid of ``[0, r]``.

    Outcomes are memoized on ``m`` per gauge since both are immutable.
    """
    cache = m.__dict__.setdefault("_modulus_checks", {})
    key = (g, grid)
    if key not in cache:
        try:
            _check_modulus_bound(m, g, grid)
            cache[key] = None
        except PreconditionError as exc:
            cache[key] = exc
    if cache[key] is not None:
        raise cache[key]


def _check_modulus_bound(m: IncreasingFunction, g: Gauge, grid: int) -> None:
    ts = np.unique(np.concatenate([np.linspace(0.0, m.r, grid + 1)[1:], m.omega_table[0]]))
    w = modulus_of_continuity(m, ts)
    h = eval_gauge(g, ts)
    bad = w > h + GRID_SLACK * np.maximum(1.0, h)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PreconditionError(f"modulus exceeds gauge at t = {ts[i]:.17g}",
                                witness={"t": float(ts[i]), "omega": float(w[i]), "h": float(h[i])})


def gauge_form(x: float, g: Gauge, R: float, s_h: float | None = None) -> float:
    """``x ln(4 e^{s_h} R / h^{-1}(x))``, 0 at ``x = 0``."""
    if x == 0:
        return 0.0
    s = stretch_constant(g) if s_h is None else s_h
    return x * (math.log(4.0 * R / inverse_gauge(g, x)) + s)


def rhs_theorem1(T: float, m: IncreasingFunction, g: Gauge, r: float, R: float) -> float:
    """``(6R/(R-r)) T M ln(4 e^{s_h} R / h^{-1}(M))``."""
    gr = g.restricted(r)
    s = stretch_constant(gr)
    if not math.isfinite(s):
        raise PreconditionError("gauge is not admissible: s_h is infinite")
    check_modulus_bound(m, gr)
    M = m.total_variation
    top = eval_gauge(gr, r)
    if M > top * (1.0 + GRID_SLACK):
        raise PreconditionError(f"total variation {M} exceeds h(r) = {top}")
    return coefficient(r, R) * T * gauge_form(min(M, top), gr, R, s)


@dataclass(frozen=True)
class Theorem2Result:
    value: float
    content: float
    total_variation: float
    gauge_top: float

    @property
    def chain_ok(self) -> bool:
        return (self.total_variation <= self.content + GRID_SLACK * max(1.0, self.content)
                and self.content <= self.gauge_top + GRID_SLACK * max(1.0, self.gauge_top))


def rhs_theorem2_swap(T: float, m: IncreasingFunction, g: Gauge, S: IntervalUnion, r: float, R: float,
                      diameter: float = math.inf) -> Theorem2Result:
    """Gauge form with ``M`` replaced by the content ``m_h^l(S)``, plus the chain ``M <= m_h^l(S) <= h(r)``."""
    gr = g.restricted(r)
    s = stretch_constant(gr)
    if not math.isfinite(s):
        raise PreconditionError("gauge is not admissible: s_h is infinite")
    if not m.support().issubset(S, tol=1e-12 * r):
        raise PreconditionError("support of non-constancy of m is not inside S")
    check_modulus_bound(m, gr)
    try:
        x = content_dp(gr, S, diameter).value
    except CapabilityError as exc:
        raise PreconditionError(str(exc)) from exc
    top = eval_gauge(gr, r)
    value = coefficient(r, R) * T * gauge_form(min(x, top), gr, R, s)
    return Theorem2Result(value, x, m.total_variation, top)


@dataclass(frozen=True)
class Theorem4Result:
    value: float
    content: float
    zero_content: bool


def rhs_theorem4(T: float, m: IncreasingFunction, S: IntervalUnion, r: float, R: float, b: float, d: float,
                 diameter: float = math.inf) -> Theorem4Result:
    """``(24b/d) (R/(R-r)) T x ln(e R^d / x)`` with ``x`` the d-dimensional content of ``S``."""
    if not 0 < d <= 1:
        raise PreconditionError(f"need 0 < d <= 1, got {d}")
    if not r <= diameter:
        raise PreconditionError(f"need r <= l, got r={r}, l={diameter}")
    if not b > 0:
        raise PreconditionError(f"need b > 0, got {b}")
    if not m.support().issubset(S, tol=1e-12 * r):
        raise PreconditionError("support of non-constancy of m is not inside S")
    check_modulus_bound(m, Gauge.power(b, d, r))
    x = content_dp(Gauge.normalized(d, r), S, diameter).value
    value = 24.0 * b / d * R / (R - r) * T * xlog(x, math.e * R ** d)
    return Theorem4Result(value, x, x == 0)


def lemma1_profile(g: Gauge, B: float, points: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """``x ln(B e^{s_h} / h^{-1}(x))`` on a grid of ``[0, h(r)]``."""
    s = stretch_constant(g)
    top = eval_gauge(g, g.r)
    xs = np.linspace(0.0, top, points + 1)
    vals = np.array([0.0] + [x * (math.log(B / inverse_gauge(g, x)) + s) for x in xs[1:]])
    return xs, vals


def lemma1_monotone(g: Gauge, B: float, points: int = 1000) -> bool:
    _, vals = lemma1_profile(g, B, points)
    return bool(np.all(np.diff(vals) >= -1e-12 * max(1.0, float(np.max(np.abs(vals))))))


def power_gauge_chain(M: float, b: float, R: float, d: float) -> tuple[float, float]:
    """Both sides of ``M ln(4 e^{1/d} R / (M/b)^{1/d}) <= (1/d) M ln(4 e b R^d / M)``."""
    left = M * (math.log(4.0 * R) + 1.0 / d - math.log(M / b) / d)
    right = M / d * math.log(4.0 * math.e * b * R ** d / M)
    return left, right


@dataclass(frozen=True)
class SharpnessReport:
    total_mass: float
    content: float
    lower: float
    middle: float
    A: float
    holds: bool
    empirical_A: float

    def to_dict(self) -> dict:
        return {"total_mass": self.total_mass, "content": self.content, "lower": self.lower,
                "middle": self.middle, "A": self.A, "holds": self.holds, "empirical_A": self.empirical_A}


def frostman_sharpness(g: Gauge, S: IntervalUnion, r: float, R: float, depth: int = 8,
                       net_base: int = 2) -> SharpnessReport:
    """Build ``m(t) = mu([0, t])`` from a Frostman measure on ``S`` and measure the sandwich constant.

    Reports the smallest ``A`` with
    ``m_h(S) ln(4 e^{s_h} R / h^{-1}(m_h(S))) <= A M ln(4 e^{s_h} R / h^{-1}(M))``.
    """
    gr = g.restricted(r)
    s = stretch_constant(gr)
    if not math.isfinite(s):
        raise PreconditionError("gauge is not admissible: s_h is infinite")
    res = frostman_measure(gr, S, net_base, depth)
    m = res.distribution
    check_modulus_bound(m, gr)
    x = content_dp(gr, S).value
    if x <= 0:
        raise DegenerateSetError("S has zero content")
    M = m.total_variation
    lower = gauge_form(M, gr, R, s)
    middle = gauge_form(min(x, eval_gauge(gr, r)), gr, R, s)
    A = middle / lower
    return SharpnessReport(M, x, lower, middle, A, lower <= middle * (1 + PASS_RTOL) + PASS_ATOL, res.empirical_A)


@dataclass
class BoundReport:
    """One case at one ``r0``: the LHS, every right-hand side and the verdicts."""

    case_id: str
    r0: float
    lhs: float
    lhs_error: float
    rhs: dict = field(default_factory=dict)
    side_lhs: dict = field(default_factory=dict)
    status: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def record(self, variant: str, rhs: float, lhs: float | None = None) -> None:
        left = self.lhs if lhs is None else lhs
        self.rhs[variant] = rhs
        if lhs is not None:
            self.side_lhs[variant] = lhs
        self.status[variant] = "pass" if passes(left, rhs) else "fail"

    def skip(self, variant: str, reason: str) -> None:
        self.status[variant] = "skipped"
        self.notes[variant] = reason

    def lhs_for(self, variant: str) -> float:
        return self.side_lhs.get(variant, self.lhs)

    def ratio(self, variant: str) -> float:
        if variant not in self.rhs:
            return math.nan
        rhs, lhs = self.rhs[variant], self.lhs_for(variant)
        if rhs == 0:
            return 0.0 if lhs == 0 else math.inf
        return lhs / rhs

    @property
    def passed(self) -> bool:
        return all(v != "fail" for v in self.status.values())

    def rows(self):
        for variant, status in self.status.items():
            yield {"case_id": self.case_id, "variant": variant, "r0": self.r0,
                   "lhs": self.lhs_for(variant), "rhs": self.rhs.get(variant, math.nan),
                   "ratio": self.ratio(variant), "status": status}

    def to_dict(self) -> dict:
        return {"case_id": self.case_id, "r0": self.r0, "lhs": self.lhs, "lhs_error": self.lhs_error,
                "rhs": self.rhs, "side_lhs": self.side_lhs, "status": self.status, "notes": self.notes,
                "passed": self.passed}


@dataclass
class CaseInputs:
    """Everything one harness case needs besides the test function."""

    measure: IncreasingFunction
    set: IntervalUnion | None = None
    gauge: Gauge | None = None
    theorem4: tuple | None = None
    diameter: float = math.inf


def evaluate_case(case_id: str, u: LogRatio, case: CaseInputs, R: float, r0_values=(0.0, 0.5, 1.0),
                  variants=VARIANTS, lhs: QuadResult | None = None, factors: MeasureFactors | None = None,
                  T_values: dict | None = None, rhs_scale: float = 1.0, convention: str = OUTER,
                  tol: float = LHS_TOL) -> list[BoundReport]:
    """Evaluate every requested bound for ``r0 = fraction * r`` over ``r0_values``.

    ``rhs_scale`` multiplies every right-hand side and exists to corrupt the
    bounds on purpose (negative controls).
    """
    m = case.measure
    r = m.r
    if lhs is None:
        lhs = lhs_integral(u, m, r, tol)
    reports = []
    pre_main = None
    if factors is None and (MAIN_MAX in variants or MAIN_SUM in variants):
        try:
            factors = measure_factors(m, R)
        except PreconditionError as exc:
            pre_main = str(exc)
    for frac in r0_values:
        r0 = frac * r
        T = T_values[frac] if T_values is not None else characteristic_T(u, r0, R, 1e-10, convention)
        rep = BoundReport(case_id, r0, lhs.value, lhs.error)
        for variant in variants:
            try:
                if variant in (MAIN_MAX, MAIN_SUM):
                    if pre_main is not None:
                        raise PreconditionError(pre_main)
                    rep.record(variant, rhs_scale * rhs_main(T, r, R, factors, variant))
                    if variant == MAIN_SUM:
                        rep.record(DOMINANCE, rhs_scale * factors.sum_factor, lhs=factors.log_integral)
                elif variant == THM1:
                    if case.gauge is None:
                        raise PreconditionError("no gauge configured")
                    rep.record(variant, rhs_scale * rhs_theorem1(T, m, case.gauge, r, R))
                elif variant == THM2:
                    if case.gauge is None or case.set is None:
                        raise PreconditionError("no gauge or set configured")
                    res = rhs_theorem2_swap(T, m, case.gauge, case.set, r, R, case.diameter)
                    rep.record(variant, rhs_scale * res.value)
                    rep.record(CHAIN_LOWER, rhs_scale * res.content, lhs=res.total_variation)
                    rep.record(CHAIN_UPPER, rhs_scale * res.gauge_top, lhs=res.content)
                elif variant == THM4:
                    if case.theorem4 is None or case.set is None:
                        raise PreconditionError("no theorem-4 parameters or set configured")
                    b, d = case.theorem4
                    res = rhs_theorem4(T, m, case.set, r, R, b, d, case.diameter)
                    rep.record(variant, rhs_scale * res.value)
                    if res.zero_content:
                        rep.notes[variant] = "zero d-content"
                else:
                    raise DomainError(f"unknown variant {variant!r}")
            except PreconditionError as exc:
                rep.skip(variant, str(exc))
        reports.append(rep)
    return reports
