"""Increasing functions on ``[0, r]`` and the Lebesgue-Stieltjes calculus they carry.

An :class:`IncreasingFunction` is a sum of three parts: right-continuous
jumps, a continuous piecewise-linear part given by knots, and an optional
finite-depth Cantor-type staircase.  Outside ``[0, r]`` it is extended by the
constants ``m(0)`` and ``m(r)``.  Every part is piecewise linear between a
finite set of breakpoints, which makes the modulus of continuity computable
exactly by sliding a window over breakpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, SizeError
from .intervals import IntervalUnion, cantor_prefractal, normalize
from .quadrature import QuadResult, integrate_panels

OMEGA_GRID = 2 ** 12
_PAIRWISE_LIMIT = 160
_CHUNK = 2 ** 22
MAX_STAIRCASE_DEPTH = 20


@dataclass(frozen=True)
class Staircase:
    """Distribution of mass spread uniformly over the cells of a Cantor prefractal."""

    ratio: float
    depth: int
    mass: float = 1.0


class DiniResult(NamedTuple):
    value: float
    certified: bool


def _readonly(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.flags.writeable = False
    return arr


class IncreasingFunction:
    """Increasing function ``m`` on ``[0, r]``; immutable once built."""

    def __init__(self, r: float, jumps=(), knots=(), staircase: Staircase | None = None):
        r = float(r)
        if not r > 0:
            raise DomainError(f"domain [0, r] needs r > 0, got {r}")
        self.r = r
        jumps = sorted((float(t), float(q)) for t, q in jumps)
        for t, q in jumps:
            if not (0.0 < t <= r) or not q > 0:
                raise DomainError(f"jump ({t}, {q}) needs location in (0, r] and positive height")
        self.jump_t = _readonly([t for t, _ in jumps])
        self.jump_q = _readonly([q for _, q in jumps])
        self._jump_cum = np.concatenate([[0.0], np.cumsum(self.jump_q)])
        kt, kv = _merge_collinear(knots)
        if kt.size and (kt[0] < 0 or kt[-1] > r):
            raise DomainError("linear knots must lie inside [0, r]")
        self.knot_t = _readonly(kt)
        self.knot_v = _readonly(kv)
        if staircase is not None:
            if not staircase.mass >= 0:
                raise DomainError("staircase mass must be nonnegative")
            if not 0 <= staircase.depth <= MAX_STAIRCASE_DEPTH:
                raise SizeError(f"staircase depth must lie in [0, {MAX_STAIRCASE_DEPTH}]")
        self.staircase = staircase

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, r: float = 1.0, slope: float = 1.0) -> "IncreasingFunction":
        return cls(r, knots=[(0.0, 0.0), (r, slope * r)])

    @classmethod
    def from_knots(cls, knots, r: float | None = None) -> "IncreasingFunction":
        knots = list(knots)
        return cls(r if r is not None else max(t for t, _ in knots), knots=knots)

    @classmethod
    def single_jump(cls, location: float, height: float, r: float = 1.0) -> "IncreasingFunction":
        return cls(r, jumps=[(location, height)])

    @classmethod
    def cantor_staircase(cls, depth: int, ratio: float = 1.0 / 3.0, r: float = 1.0,
                         mass: float = 1.0) -> "IncreasingFunction":
        return cls(r, staircase=Staircase(float(ratio), int(depth), float(mass)))

    # -- evaluation -------------------------------------------------------

    def __call__(self, t):
        return eval_m(self, t)

    def _parts(self, tc, left: bool):
        out = np.zeros_like(tc)
        if self.knot_t.size:
            out += np.interp(tc, self.knot_t, self.knot_v)
        if self.jump_t.size:
            side = "left" if left else "right"
            out += self._jump_cum[np.searchsorted(self.jump_t, tc, side=side)]
        if self.staircase is not None and self.staircase.mass > 0:
            a, b = self._cell_arrays
            k = np.searchsorted(a, tc, side="right") - 1
            kc = np.maximum(k, 0)
            frac = np.clip((tc - a[kc]) / (b[kc] - a[kc]), 0.0, 1.0)
            out += np.where(k < 0, 0.0, self.staircase.mass * (kc + frac) / a.size)
        return out

    @cached_property
    def _cell_arrays(self):
        return self.staircase_cells.arrays()

    def left_limit(self, t):
        """``m(t-)``, with the constant extension outside ``[0, r]``."""
        arr = np.asarray(t, dtype=float)
        tc = np.clip(arr, 0.0, self.r)
        out = np.where(arr > self.r, self._parts(tc, left=False), self._parts(tc, left=True))
        return float(out) if np.ndim(t) == 0 else out

    @cached_property
    def value_at_zero(self) -> float:
        return float(self._parts(np.array([0.0]), left=False)[0])

    @cached_property
    def total_variation(self) -> float:
        """``M = m(r) - m(0)``."""
        top = float(self._parts(np.array([self.r]), left=False)[0])
        return max(top - self.value_at_zero, 0.0)

    @property
    def has_jumps(self) -> bool:
        return self.jump_t.size > 0

    @cached_property
    def staircase_cells(self) -> IntervalUnion | None:
        if self.staircase is None:
            return None
        return cantor_prefractal(self.staircase.depth, self.staircase.ratio, self.r)

    @cached_property
    def breakpoints(self) -> np.ndarray:
        parts = [np.array([0.0, self.r]), self.knot_t, self.jump_t]
        if self.staircase is not None:
            a, b = self.staircase_cells.arrays()
            parts += [a, b]
        return _readonly(np.unique(np.concatenate(parts)))

    @cached_property
    def _values_at_breakpoints(self):
        return eval_m(self, self.breakpoints), self.left_limit(self.breakpoints)

    def density_segments(self):
        """``(a, b, slope)`` arrays of the pieces where ``m`` grows continuously."""
        a_parts, b_parts, s_parts = [], [], []
        if self.knot_t.size > 1:
            slope = np.diff(self.knot_v) / np.diff(self.knot_t)
            pos = slope > 0
            a_parts.append(self.knot_t[:-1][pos])
            b_parts.append(self.knot_t[1:][pos])
            s_parts.append(slope[pos])
        if self.staircase is not None and self.staircase.mass > 0:
            a, b = self.staircase_cells.arrays()
            n = a.size
            a_parts.append(a)
            b_parts.append(b)
            s_parts.append(self.staircase.mass / n / (b - a))
        if not a_parts:
            empty = np.zeros(0)
            return empty, empty, empty
        return np.concatenate(a_parts), np.concatenate(b_parts), np.concatenate(s_parts)

    def support(self) -> IntervalUnion:
        """Support of non-constancy: closed growth segments plus jump locations."""
        a, b, _ = self.density_segments()
        items = list(zip(a.tolist(), b.tolist())) + [(t, t) for t in self.jump_t.tolist()]
        return normalize(items, self.r)

    @cached_property
    def stabilization_diameter(self) -> float:
        return stabilization_diameter(self)

    @cached_property
    def omega_table(self) -> tuple[np.ndarray, np.ndarray]:
        """``(t, omega(t))`` knots on ``[0, r]``; linear interpolation between them."""
        return _omega_table(self)

    def to_csv_rows(self, grid: np.ndarray):
        return np.column_stack([grid, eval_m(self, grid), modulus_of_continuity(self, grid)])


def _merge_collinear(knots):
    pts = sorted((float(t), float(v)) for t, v in knots)
    if not pts:
        return np.zeros(0), np.zeros(0)
    t = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    if np.any(np.diff(t) <= 0):
        raise DomainError("knot locations must be strictly increasing")
    if np.any(np.diff(v) < 0):
        raise DomainError("knot values must be nondecreasing")
    if t.size <= 2:
        return t, v
    slope = np.diff(v) / np.diff(t)
    scale = np.maximum(np.abs(slope[1:]), np.abs(slope[:-1]))
    bend = np.abs(np.diff(slope)) > 1e-12 * np.maximum(scale, 1e-300)
    keep = np.concatenate([[True], bend, [True]])
    return t[keep], v[keep]


def eval_m(m: IncreasingFunction, t):
    """Right-continuous value ``m(t)`` with constant extension outside ``[0, r]``."""
    arr = np.asarray(t, dtype=float)
    out = m._parts(np.clip(arr, 0.0, m.r), left=False)
    return float(out) if np.ndim(t) == 0 else out


def interval_measure(m: IncreasingFunction, a: float, b: float, closed: bool = False) -> float:
    """Lebesgue-Stieltjes measure of ``(a, b]``, or of ``[a, b]`` when ``closed``."""
    if a > b:
        raise DomainError(f"need a <= b, got a={a}, b={b}")
    lower = m.left_limit(a) if closed else eval_m(m, a)
    return max(eval_m(m, b) - lower, 0.0)


def modulus_of_continuity(m: IncreasingFunction, t):
    """Exact ``omega_m(t) = sup{m(x) - m(x') : 0 <= x - x' <= t}``.

    For fixed ``t`` the increment ``m(c + t) - m(c)`` is piecewise linear in
    the window start ``c`` with kinks where ``c`` or ``c + t`` crosses a
    breakpoint, so its sup (including one-sided limits at jumps) is attained
    at ``c`` in ``B`` or ``B - t``.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(ts.shape)
    bp = m.breakpoints
    at_bp = m._values_at_breakpoints
    step = max(1, _CHUNK // (4 * bp.size))
    for lo in range(0, ts.size, step):
        tt = ts[lo:lo + step, None]
        # windows [c, c + t] with c in B or c + t in B; the constant
        # extension takes care of windows sticking out of [0, r]
        inc = np.maximum(eval_m(m, bp + tt) - at_bp[0], at_bp[0] - eval_m(m, bp - tt))
        if m.has_jumps:
            inc = np.maximum(inc, m.left_limit(bp + tt) - at_bp[1])
            inc = np.maximum(inc, at_bp[1] - m.left_limit(bp - tt))
        out[lo:lo + step] = np.max(inc, axis=1)
    out = np.clip(out, 0.0, m.total_variation)
    out[ts <= 0] = 0.0
    return float(out[0]) if np.ndim(t) == 0 else out


def stabilization_diameter(m: IncreasingFunction) -> float:
    """``d_m = inf{t : omega_m(t) = M}`` by bisection on the exact modulus.

    Returns ``0.0`` for a constant ``m`` (``M = 0``), where the diameter is
    degenerate; callers check ``m.total_variation``.
    """
    M = m.total_variation
    if M == 0:
        return 0.0
    target = M * (1.0 - 1e-13)
    lo, hi = 0.0, m.r
    while hi - lo > 1e-14 * m.r:
        mid = 0.5 * (lo + hi)
        if modulus_of_continuity(m, mid) >= target:
            hi = mid
        else:
            lo = mid
    # the window holding all variation spans the support hull; snap to it
    sup = m.support()
    hull = sup.rights[-1] - sup.lefts[0]
    return hull if abs(hi - hull) <= 1e-9 * m.r else hi


def _omega_table(m: IncreasingFunction):
    d = m.stabilization_diameter
    M = m.total_variation
    if M == 0 or d == 0:
        return np.array([0.0, m.r]), np.array([0.0, M])
    bp = m.breakpoints
    parts = [np.linspace(0.0, d, OMEGA_GRID + 1), d * np.geomspace(1e-12, 1.0, 97), np.diff(bp), [m.r]]
    if bp.size <= _PAIRWISE_LIMIT:
        parts.append((bp[None, :] - bp[:, None]).ravel())
    ts = np.concatenate(parts)
    ts = np.unique(ts[(ts >= 0) & ((ts <= d) | (ts == m.r))])
    ws = modulus_of_continuity(m, ts)
    ws = np.maximum.accumulate(ws)
    ws[ts >= d] = M
    return _readonly(ts), _readonly(ws)


def table_dini_integral(ts: np.ndarray, ws: np.ndarray, upper: float) -> float:
    """``int_0^upper w(t)/t dt`` for the piecewise-linear interpolant of the table."""
    t0, t1 = ts[:-1], ts[1:]
    sel = t0 < upper
    t0, t1 = t0[sel], np.minimum(t1[sel], upper)
    w0 = ws[:-1][sel]
    beta = np.diff(ws)[sel] / np.diff(ts)[sel]
    alpha = w0 - beta * t0
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(t0 > 0, np.log(t1 / np.where(t0 > 0, t0, 1.0)), 0.0)
    # on the first panel alpha = w(0) = 0, so only the linear part contributes
    total = float(np.sum(np.where(t0 > 0, alpha * logs, 0.0) + beta * (t1 - t0)))
    if upper > ts[-1]:
        total += float(ws[-1]) * math.log(upper / ts[-1])
    return total


def table_log_integral(ts: np.ndarray, ws: np.ndarray, scale: float, upper: float) -> float:
    """``int_0^upper ln(scale / t) dw(t)`` for the piecewise-linear interpolant."""
    def antiderivative(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, t * np.log(scale / np.where(t > 0, t, 1.0)) + t, 0.0)

    t0, t1 = ts[:-1], ts[1:]
    sel = t0 < upper
    t0, t1 = t0[sel], np.minimum(t1[sel], upper)
    beta = np.diff(ws)[sel] / np.diff(ts)[sel]
    return float(np.sum(beta * (antiderivative(t1) - antiderivative(t0))))


def dini_integral(m: IncreasingFunction, upper: float, rtol: float = 1e-10) -> DiniResult:
    """``int_0^upper omega_m(t)/t dt``; ``inf`` when ``m`` jumps.

    The integral over ``(eps, d_m]`` is computed adaptively on the exact
    modulus; ``(d_m, upper]`` contributes ``M ln(upper / d_m)``; the tail
    ``(0, eps]`` is bounded by ``C eps^a / a`` from a power fit
    ``omega(t) <= C t^a`` over dyadic samples.
    """
    if not upper > 0:
        raise DomainError(f"upper limit must be positive, got {upper}")
    M = m.total_variation
    if M == 0:
        return DiniResult(0.0, True)
    if m.has_jumps:
        return DiniResult(math.inf, True)
    d = m.stabilization_diameter
    top = min(upper, d)
    eps = top * 1e-12
    breaks = top * 2.0 ** -np.arange(0, 41)
    res = integrate_panels(lambda x: modulus_of_continuity(m, x) / x,
                           np.append(breaks[1:], eps), np.append(breaks[:-1], breaks[-1]),
                           rtol=rtol, atol=1e-14)
    samples = top * 2.0 ** -np.arange(28.0, 41.0)
    w = modulus_of_continuity(m, samples)
    certified = bool(np.all(w > 0))
    tail = 0.0
    if certified:
        slope, icpt = np.polyfit(np.log(samples), np.log(w), 1)
        certified = slope > 0
        if certified:
            tail = math.exp(icpt) * eps ** slope / slope
    value = res.value + tail
    if upper > d:
        value += M * math.log(upper / d)
    return DiniResult(value, certified)


def stieltjes_integral(f: Callable, m: IncreasingFunction, rtol: float = 1e-8,
                       singular_points=(), atol: float = 1e-14) -> QuadResult:
    """``int_[0,r] f dm`` for a vectorized ``f``.

    Jumps contribute ``f(t_k) q_k``; the absolutely continuous parts are
    integrated adaptively against their piecewise-constant densities, with
    panels cut at ``singular_points`` so no node lands on a singularity.
    """
    total = 0.0
    if m.has_jumps:
        total += float(np.sum(np.asarray(f(np.asarray(m.jump_t)), dtype=float) * m.jump_q))
    a, b, s = m.density_segments()
    sing = np.sort(np.asarray([p for p in singular_points if 0 <= p <= m.r], dtype=float))
    if sing.size and a.size:
        cuts_a, cuts_b, cuts_s = [], [], []
        for lo, hi, dens in zip(a, b, s):
            inner = sing[(sing > lo) & (sing < hi)]
            edges = np.concatenate([[lo], inner, [hi]])
            cuts_a.append(edges[:-1])
            cuts_b.append(edges[1:])
            cuts_s.append(np.full(edges.size - 1, dens))
        a, b, s = np.concatenate(cuts_a), np.concatenate(cuts_b), np.concatenate(cuts_s)
    res = integrate_panels(f, a, b, s, rtol=rtol, atol=atol)
    return QuadResult(total + res.value, res.error)


def from_literal(spec: dict, r: float | None = None) -> IncreasingFunction:
    """Parse a measure literal.

    ``{"kind": "identity", "r": 1}``, ``{"kind": "linear", "knots": [[t, v], ...]}``,
    ``{"kind": "jump", "location": t, "height": q, "r": 1}``,
    ``{"kind": "staircase", "depth": n, "ratio": x, "mass": 1, "r": 1}`` or the
    general ``{"r": 1, "jumps": [...], "knots": [...], "staircase": {...}}``.
    """
    kind = spec.get("kind", "general")
    rr = float(spec.get("r", r if r is not None else 1.0))
    if kind == "identity":
        return IncreasingFunction.identity(rr, float(spec.get("slope", 1.0)))
    if kind == "linear":
        return IncreasingFunction(rr, knots=spec["knots"])
    if kind == "jump":
        return IncreasingFunction.single_jump(float(spec["location"]), float(spec["height"]), rr)
    if kind == "staircase":
        return IncreasingFunction.cantor_staircase(int(spec["depth"]), float(spec.get("ratio", 1 / 3)),
                                                   rr, float(spec.get("mass", 1.0)))
    if kind == "general":
        st = spec.get("staircase")
        stair = Staircase(float(st.get("ratio", 1 / 3)), int(st["depth"]), float(st.get("mass", 1.0))) if st else None
        return IncreasingFunction(rr, jumps=spec.get("jumps", ()), knots=spec.get("knots", ()), staircase=stair)
    raise DomainError(f"unknown measure kind {kind!r}")
