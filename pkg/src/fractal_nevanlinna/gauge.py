"""Gauge functions h used to price covers and bound moduli of continuity.

Three kinds are supported:

* ``power``: ``h(t) = b * t**d`` with ``b > 0``, ``d > 0``;
* ``normalized-power``: ``h(t) = c_d * t**d`` where ``c_d`` is the
  normalizing constant of d-dimensional Hausdorff measure; ``d = 0`` gives
  the counting gauge ``h == 1``;
* ``tabulated``: monotone piecewise-linear interpolation of knots.

Every gauge lives on ``[0, r]`` and is extended by the constant ``h(r)``
to the right of ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError

POWER = "power"
NORMALIZED = "normalized-power"
TABULATED = "tabulated"

_STRETCH_DIVERGENCE = 1e6
# decay rate (per unit of ln(1/t)) below which the tail of h/(t h') is
# treated as non-summable
_STRETCH_MIN_DECAY = 0.05


def normalization_constant(d: float) -> float:
    """Return ``c_d = pi**(d/2) / (2**d * Gamma(d/2 + 1))``."""
    if d < 0:
        raise DomainError(f"dimension must be nonnegative, got {d}")
    return math.exp(0.5 * d * math.log(math.pi) - d * math.log(2.0) - math.lgamma(0.5 * d + 1.0))


@dataclass(frozen=True)
class Gauge:
    kind: str
    b: float = 1.0
    d: float = 1.0
    r: float = math.inf
    knots_t: tuple = field(default=(), repr=False)
    knots_h: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in (POWER, NORMALIZED, TABULATED):
            raise DomainError(f"unknown gauge kind {self.kind!r}")
        if not self.r > 0:
            raise DomainError(f"gauge domain must be [0, r] with r > 0, got r={self.r}")
        if self.kind == POWER:
            if not (self.b > 0 and self.d > 0):
                raise DomainError(f"power gauge needs b > 0 and d > 0, got b={self.b}, d={self.d}")
        elif self.kind == NORMALIZED:
            if self.d < 0:
                raise DomainError(f"normalized gauge needs d >= 0, got d={self.d}")
        else:
            kt = np.asarray(self.knots_t, dtype=float)
            kh = np.asarray(self.knots_h, dtype=float)
            if kt.ndim != 1 or kt.size < 2 or kt.size != kh.size:
                raise DomainError("tabulated gauge needs at least two (t, h) knots")
            if kt[0] != 0.0 or kh[0] < 0:
                raise DomainError("tabulated gauge must start at t = 0 with h(0) >= 0")
            if np.any(np.diff(kt) <= 0):
                raise DomainError("tabulated knots must have strictly increasing t")
            if np.any(np.diff(kh) < 0):
                raise DomainError("tabulated gauge values must be nondecreasing")
            if self.r != kt[-1]:
                object.__setattr__(self, "r", float(kt[-1]))

    # -- constructors -----------------------------------------------------

    @classmethod
    def power(cls, b: float, d: float, r: float = math.inf) -> "Gauge":
        return cls(POWER, b=float(b), d=float(d), r=float(r))

    @classmethod
    def normalized(cls, d: float, r: float = math.inf) -> "Gauge":
        return cls(NORMALIZED, b=normalization_constant(d), d=float(d), r=float(r))

    @classmethod
    def tabulated(cls, knots) -> "Gauge":
        """Build from ``(t, h)`` pairs; a knot ``(0, 0)`` is prepended if absent."""
        pts = sorted((float(t), float(h)) for t, h in knots)
        if not pts or pts[0][0] > 0:
            pts.insert(0, (0.0, 0.0))
        kt, kh = zip(*pts)
        return cls(TABULATED, knots_t=tuple(kt), knots_h=tuple(kh), r=kt[-1])

    @classmethod
    def from_dict(cls, spec: dict) -> "Gauge":
        """Parse a literal such as ``{"kind": "power", "b": 2.0, "d": 0.5}``."""
        kind = spec.get("kind")
        r = float(spec.get("r", math.inf))
        if kind == POWER:
            return cls.power(spec.get("b", 1.0), spec["d"], r)
        if kind in (NORMALIZED, "normalized"):
            return cls.normalized(spec["d"], r)
        if kind == TABULATED:
            return cls.tabulated(spec["knots"])
        raise DomainError(f"unknown gauge kind {kind!r}")

    def to_dict(self) -> dict:
        if self.kind == TABULATED:
            return {"kind": TABULATED, "knots": [list(p) for p in zip(self.knots_t, self.knots_h)]}
        out = {"kind": self.kind, "d": self.d}
        if self.kind == POWER:
            out["b"] = self.b
        if math.isfinite(self.r):
            out["r"] = self.r
        return out

    def restricted(self, r: float) -> "Gauge":
        """The same gauge with domain ``[0, r]`` (power kinds only change ``r``)."""
        if self.kind == TABULATED:
            if r >= self.r:
                return self
            kt = np.asarray(self.knots_t)
            keep = kt < r
            t_new = np.append(kt[keep], r)
            h_new = np.append(np.asarray(self.knots_h)[keep], self(r))
            return Gauge(TABULATED, knots_t=tuple(t_new), knots_h=tuple(h_new), r=float(r))
        return Gauge(self.kind, b=self.b, d=self.d, r=float(r))

    # -- evaluation -------------------------------------------------------

    @property
    def coefficient(self) -> float:
        return self.b

    @property
    def is_counting(self) -> bool:
        return self.kind == NORMALIZED and self.d == 0

    @property
    def zero_at_origin(self) -> bool:
        if self.kind == TABULATED:
            return self.knots_h[0] == 0.0
        return not self.is_counting

    def __call__(self, t):
        return eval_gauge(self, t)

    @property
    def is_concave(self) -> bool:
        if self.kind != TABULATED:
            return self.d <= 1
        kt = np.asarray(self.knots_t)
        kh = np.asarray(self.knots_h)
        slopes = np.diff(kh) / np.diff(kt)
        return bool(np.all(np.diff(slopes) <= 1e-12 * np.maximum(1.0, np.abs(slopes[:-1]))))


def eval_gauge(g: Gauge, t):
    """Evaluate ``h(t)`` for scalar or array ``t >= 0``, constant beyond ``r``."""
    arr = np.asarray(t, dtype=float)
    tc = np.minimum(arr, g.r)
    if g.kind == TABULATED:
        out = np.interp(tc, g.knots_t, g.knots_h)
    elif g.d == 0:
        out = np.full_like(tc, g.b)
    else:
        with np.errstate(invalid="ignore"):
            out = g.b * np.power(np.maximum(tc, 0.0), g.d)
    if np.ndim(t) == 0:
        return float(out)
    return out


def inverse_gauge(g: Gauge, x: float) -> float:
    """Return the unique ``t`` in ``[0, r]`` with ``h(t) = x``."""
    if g.kind != TABULATED and g.d == 0:
        raise RangeError("the counting gauge is not invertible")
    top = eval_gauge(g, g.r) if math.isfinite(g.r) else math.inf
    slack = 1e-12 * max(1.0, abs(top)) if math.isfinite(top) else 0.0
    if x < 0 or x > top + slack:
        raise RangeError(f"{x} is outside the range [0, {top}] of the gauge")
    if x == 0:
        return 0.0
    if g.kind != TABULATED:
        return min((min(x, top) / g.b) ** (1.0 / g.d), g.r)
    if g.knots_h[0] > 0 and x < g.knots_h[0]:
        raise RangeError(f"{x} is below h(0) = {g.knots_h[0]}")
    lo, hi = 0.0, g.r
    while hi - lo > 1e-12 * max(1.0, g.r):
        mid = 0.5 * (lo + hi)
        if eval_gauge(g, mid) < x:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def stretch_constant(g: Gauge) -> float:
    """``s_h = sup_{0<t<r} h(t) / (t h'(t))``; ``inf`` marks an inadmissible gauge.

    Power kinds are exact (``1/d``).  Tabulated gauges use one-sided difference
    quotients at segment midpoints, and the behaviour as ``t -> 0`` is
    extrapolated from the innermost segments: if the ratio is still growing
    without a geometric decay of its increments the sup is declared infinite.
    """
    if g.kind != TABULATED:
        return math.inf if g.d == 0 else 1.0 / g.d
    kt = np.asarray(g.knots_t)
    kh = np.asarray(g.knots_h)
    slopes = np.diff(kh) / np.diff(kt)
    if np.any(slopes <= 0):
        return math.inf
    mids = 0.5 * (kt[:-1] + kt[1:])
    ratios = eval_gauge(g, mids) / (mids * slopes)
    sup = float(np.max(ratios))
    if sup > _STRETCH_DIVERGENCE:
        return math.inf
    # skip the origin segment, which is exactly linear
    inner = ratios[1:9] if kt[0] == 0.0 else ratios[:8]
    u = -np.log(mids[1:9] if kt[0] == 0.0 else mids[:8])
    if inner.size < 3:
        return sup
    # index 0 is closest to the origin, so u decreases along the arrays
    growth = (inner[:-1] - inner[1:]) / (u[:-1] - u[1:])  # d ratio / d ln(1/t)
    if np.any(growth <= 0):
        return sup
    u_mid = 0.5 * (u[:-1] + u[1:])
    if np.ptp(u_mid) == 0:
        return sup
    kappa = -float(np.polyfit(u_mid, np.log(growth), 1)[0])
    if kappa <= _STRETCH_MIN_DECAY:
        return math.inf
    estimate = float(inner[0] + growth[0] / kappa)
    if estimate > _STRETCH_DIVERGENCE:
        return math.inf
    return max(sup, estimate)
