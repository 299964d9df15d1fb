"""Log-moduli of rational functions as test functions with atomic Riesz charge.

``U(z) = c0 + sum_j k_j ln|z - a_j| - sum_i l_i ln|z - p_i|``.  The lower
variation of the Riesz charge counts poles, so every ingredient of the
difference characteristic has a closed form or a one-dimensional quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import QuadResult, integrate

ANGLE_SAMPLES = 512
GOLDEN_ITERATIONS = 60
REFINE_TOP = 3
MEAN_PANELS = 64
SINGULAR_SLACK = 1e-13
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

INNER = "inner"
OUTER = "outer"


def _merge(items):
    out: dict[complex, int] = {}
    for loc, mult in items:
        loc = complex(loc)
        mult = int(mult)
        if mult <= 0:
            raise DomainError(f"multiplicity must be a positive integer, got {mult}")
        out[loc] = out.get(loc, 0) + mult
    return out


@dataclass(frozen=True)
class LogRatio:
    """``U = c0 + sum k ln|z - a| - sum l ln|z - p|`` with disjoint zeros and poles."""

    constant: float
    zeros: tuple
    poles: tuple
    radius_guard: float = math.inf

    @classmethod
    def build(cls, constant: float = 0.0, zeros=(), poles=(), radius_guard: float = math.inf) -> "LogRatio":
        """Cancel common locations and check the radius guard."""
        z = _merge(zeros)
        p = _merge(poles)
        for loc in set(z) & set(p):
            net = z.pop(loc) - p.pop(loc)
            if net > 0:
                z[loc] = net
            elif net < 0:
                p[loc] = -net
        for loc in list(z) + list(p):
            if not abs(loc) < radius_guard:
                raise DomainError(f"singularity {loc} is outside the open disk of radius {radius_guard}")
        key = lambda item: (abs(item[0]), item[0].real, item[0].imag)
        return cls(float(constant), tuple(sorted(z.items(), key=key)), tuple(sorted(p.items(), key=key)),
                   float(radius_guard))

    @classmethod
    def from_dict(cls, spec: dict, radius_guard: float = math.inf) -> "LogRatio":
        """``{"constant": c, "zeros": [[re, im, mult], ...], "poles": [...]}``."""
        def parse(rows):
            out = []
            for row in rows:
                if len(row) == 2:
                    row = [row[0], row[1], 1]
                out.append((complex(float(row[0]), float(row[1])), int(row[2])))
            return out

        guard = float(spec.get("radius_guard", radius_guard))
        return cls.build(float(spec.get("constant", 0.0)), parse(spec.get("zeros", [])),
                         parse(spec.get("poles", [])), guard)

    def to_dict(self) -> dict:
        rows = lambda items: [[loc.real, loc.imag, mult] for loc, mult in items]
        out = {"constant": self.constant, "zeros": rows(self.zeros), "poles": rows(self.poles)}
        if math.isfinite(self.radius_guard):
            out["radius_guard"] = self.radius_guard
        return out

    @property
    def singularities(self) -> np.ndarray:
        return np.array([loc for loc, _ in self.zeros + self.poles], dtype=complex)

    @property
    def _weights(self) -> tuple[np.ndarray, np.ndarray]:
        locs = np.array([loc for loc, _ in self.zeros] + [loc for loc, _ in self.poles], dtype=complex)
        w = np.array([k for _, k in self.zeros] + [-l for _, l in self.poles], dtype=float)
        return locs, w

    def pole_radii(self) -> np.ndarray:
        return np.array([abs(loc) for loc, _ in self.poles])

    def __call__(self, z):
        return eval_U(self, z)


def random_log_ratio(rng: np.random.Generator, R: float, max_singularities: int = 6,
                     max_multiplicity: int = 2, spread: float = 0.9) -> LogRatio:
    """Random test function: up to ``max_singularities`` zeros/poles in ``|z| <= spread R``."""
    n = int(rng.integers(1, max_singularities + 1))
    zeros, poles = [], []
    for _ in range(n):
        rad = spread * R * math.sqrt(rng.random())
        angle = 2.0 * math.pi * rng.random()
        loc = complex(rad * math.cos(angle), rad * math.sin(angle))
        mult = int(rng.integers(1, max_multiplicity + 1))
        (zeros if rng.random() < 0.5 else poles).append((loc, mult))
    return LogRatio.build(float(rng.uniform(-1.0, 1.0)), zeros, poles, radius_guard=R)


def eval_U(u: LogRatio, z):
    """``U(z)``; ``-inf`` at zeros and ``+inf`` at poles."""
    zz = np.asarray(z, dtype=complex)
    locs, w = u._weights
    out = np.full(zz.shape, u.constant)
    with np.errstate(divide="ignore"):
        for a, k in zip(locs, w):
            out = out + k * np.log(np.abs(zz - a))
    return float(out) if np.ndim(z) == 0 else out


def _on_circle(u: LogRatio, t: np.ndarray, which: str = "all", slack: float = SINGULAR_SLACK) -> np.ndarray:
    items = u.poles if which == "poles" else u.zeros + u.poles
    hit = np.zeros(t.shape, dtype=bool)
    for loc, _ in items:
        hit |= np.abs(abs(loc) - t) <= slack * np.maximum(1.0, t)
    return hit


def max_on_circles(u: LogRatio, t) -> np.ndarray:
    """``M_U(t)`` for an array of radii; ``+inf`` where a pole sits on the circle.

    Starts from :data:`ANGLE_SAMPLES` uniform angles plus the pole angles and
    refines the best uniform samples and every pole seed by golden-section
    search inside one sample spacing.
    """
    return _argmax_on_circles(u, t)[0]


def _argmax_on_circles(u: LogRatio, t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("radius must be nonnegative")
    locs, _ = u._weights
    if locs.size == 0:
        return np.full(t.shape, u.constant), np.zeros(t.shape)
    step = 2.0 * math.pi / ANGLE_SAMPLES
    grid = np.arange(ANGLE_SAMPLES) * step
    vals = eval_U(u, t[:, None] * np.exp(1j * grid)[None, :])
    k = min(REFINE_TOP, ANGLE_SAMPLES)
    top = np.argpartition(-vals, k - 1, axis=1)[:, :k]
    centers = grid[top]
    pole_angles = np.array([np.angle(loc) for loc, _ in u.poles])
    if pole_angles.size:
        centers = np.concatenate([centers, np.broadcast_to(pole_angles, (t.size, pole_angles.size))], axis=1)
    lo = centers - step
    hi = centers + step
    tt = t[:, None]
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = eval_U(u, tt * np.exp(1j * x1))
    f2 = eval_U(u, tt * np.exp(1j * x2))
    for _ in range(GOLDEN_ITERATIONS):
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        nx = np.where(left, hi - _INVPHI * (hi - lo), lo + _INVPHI * (hi - lo))
        fn = eval_U(u, tt * np.exp(1j * nx))
        x2, f2, x1, f1 = (np.where(left, x1, nx), np.where(left, f1, fn),
                          np.where(left, nx, x2), np.where(left, fn, f2))
    cand_v = np.concatenate([vals, f1, f2], axis=1)
    cand_x = np.concatenate([np.broadcast_to(grid, vals.shape), x1, x2], axis=1)
    pick = np.argmax(cand_v, axis=1)
    rows = np.arange(t.size)
    best = cand_v[rows, pick]
    best = np.where(_on_circle(u, t, "poles"), np.inf, best)
    return best, np.mod(cand_x[rows, pick], 2.0 * math.pi)


def max_on_circle(u: LogRatio, t: float) -> float:
    """``M_U(t) = sup_{|z| = t} U(z)``; ``+inf`` when a pole lies on the circle."""
    return float(max_on_circles(u, np.array([float(t)]))[0])


def max_positive(u: LogRatio, t) -> np.ndarray:
    """``M_U^+(t)``."""
    return np.maximum(max_on_circles(u, t), 0.0)


def lower_variation(u: LogRatio, t: float) -> int:
    """Pole count (with multiplicity) in the closed disk of radius ``t``."""
    return int(sum(mult for loc, mult in u.poles if abs(loc) <= t))


def _singular_angles(u: LogRatio) -> np.ndarray:
    locs, _ = u._weights
    return np.mod(np.angle(locs), 2.0 * math.pi) if locs.size else np.zeros(0)


def circle_mean(u: LogRatio, t: float, tol: float = 1e-10, positive: bool = True) -> QuadResult:
    """``(1/2pi) int_0^{2pi} U^+(t e^{i phi}) d phi`` (or of ``U`` itself when not ``positive``).

    Panels start at the angles of all zeros and poles so the integrable
    log spikes sit at panel ends, where no node is placed.
    """
    t = float(t)
    if t < 0:
        raise DomainError("radius must be nonnegative")
    if t == 0 or len(u.zeros) + len(u.poles) == 0:
        # the degenerate circle is the point 0, where U may be -inf or +inf
        v = eval_U(u, 0j) if t == 0 else u.constant
        return QuadResult(max(v, 0.0) if positive else v, 0.0)
    if _on_circle(u, np.array([t]))[0]:
        raise DomainError(f"a zero or pole lies on the circle |z| = {t}")

    def f(phi):
        v = eval_U(u, t * np.exp(1j * phi))
        return np.maximum(v, 0.0) if positive else v

    # narrow U^+ spikes around the maximum would slip between nodes otherwise
    peak = _argmax_on_circles(u, np.array([t]))[1]
    breaks = np.concatenate([_singular_angles(u), peak, np.linspace(0.0, 2.0 * math.pi, MEAN_PANELS + 1)])
    res = integrate(f, 0.0, 2.0 * math.pi, breaks, rtol=1e-14, atol=2.0 * math.pi * tol)
    scale = 1.0 / (2.0 * math.pi)
    return QuadResult(res.value * scale, res.error * scale)


def circle_mean_positive(u: LogRatio, t: float, tol: float = 1e-10) -> float:
    return circle_mean(u, t, tol, positive=True).value


def jensen_mean(a: complex, t: float) -> float:
    """Closed form of ``(1/2pi) int ln|t e^{i phi} - a| d phi``."""
    return math.log(max(t, abs(a)))


def pole_term(u: LogRatio, r: float, R: float) -> float:
    """``int_r^R Delta^-(t)/t dt = sum_{|p| <= R} mult ln(R / max(r, |p|))``."""
    if not 0 <= r < R:
        raise DomainError(f"need 0 <= r < R, got r={r}, R={R}")
    total = 0.0
    for loc, mult in u.poles:
        rad = abs(loc)
        if rad <= R:
            if rad == 0 and r == 0:
                return math.inf
            total += mult * math.log(R / max(r, rad))
    return total


def characteristic_T(u: LogRatio, r: float, R: float, tol: float = 1e-10, convention: str = INNER) -> float:
    """Difference characteristic ``T_U(r, R)``.

    ``convention="inner"`` averages ``U^+`` over ``|z| = r``; ``"outer"`` averages
    over ``|z| = R``.  The pole term ``int_r^R Delta^-(t)/t dt`` is the same in
    both.  Only the outer mean makes the integral bounds hold for every test
    function; the inequality harness uses it.
    """
    if convention not in (INNER, OUTER):
        raise DomainError(f"unknown convention {convention!r}")
    if not 0 <= r < R:
        raise DomainError(f"need 0 <= r < R, got r={r}, R={R}")
    mean = circle_mean(u, r if convention == INNER else R, tol).value
    return mean + pole_term(u, r, R)
