"""Hausdorff h-contents of finite interval unions.

The h-content of diameter ``l`` is the infimum of ``sum h(b_j - a_j)`` over
covers of ``S`` by closed intervals ``[a_j, b_j]`` of ``[0, r]`` with lengths
``< l``.  For concave gauges an optimal cover splits the components of ``S``
into runs of consecutive components and covers each run's hull on its own,
which gives an ``O(K^2)`` dynamic program.  :func:`brute_force_content` is an
independent check that searches all covers with endpoints on a candidate grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._cover_kernel import cover_costs
from .errors import CapabilityError, DomainError, SizeError
from .gauge import Gauge, eval_gauge
from .intervals import IntervalUnion

EXACT_DP = "exact-dp"
BRUTE_FORCE = "brute-force"
LIMIT = "limit-l-to-zero"
_MODE_ALIASES = {"dp": EXACT_DP, "exact": EXACT_DP, EXACT_DP: EXACT_DP,
                 "brute": BRUTE_FORCE, BRUTE_FORCE: BRUTE_FORCE,
                 "limit": LIMIT, LIMIT: LIMIT}

LIMIT_STEPS = 20
LIMIT_RTOL = 1e-9
BRUTE_MAX_COMPONENTS = 6
BRUTE_MAX_GRID = 64
# remainders below this fraction of l are rounding noise from L/l
_SNAP = 1e-12


@dataclass(frozen=True)
class ContentResult:
    value: float
    attained: bool
    mode: str
    converged: bool | None = None
    history: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        out = {"value": self.value, "attained": self.attained, "mode": self.mode}
        if self.converged is not None:
            out["converged"] = self.converged
        return out


@dataclass(frozen=True)
class ContentQuery:
    gauge: Gauge
    set: IntervalUnion
    diameter_limit: float = math.inf
    mode: str = EXACT_DP

    def __post_init__(self):
        if not self.diameter_limit > 0:
            raise DomainError(f"diameter limit must be positive, got {self.diameter_limit}")
        mode = _MODE_ALIASES.get(self.mode)
        if mode is None:
            raise DomainError(f"unknown content mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)

    def evaluate(self) -> ContentResult:
        return hausdorff_content(self.gauge, self.set, self.diameter_limit, self.mode)


def single_interval_content(g: Gauge, length, diameter: float):
    """Infimal cost of covering a solid interval of the given length(s).

    With pieces shorter than ``l`` and a concave gauge the optimum pushes all
    but one piece to length ``l``: ``floor(L/l) h(l) + h(L - floor(L/l) l)``.
    Returns ``(value, attained)``; the infimum is not attained when pieces
    have to approach ``l`` itself.
    """
    L = np.asarray(length, dtype=float)
    if math.isinf(diameter):
        value = eval_gauge(g, L)
        attained = np.ones(np.shape(L), dtype=bool)
    else:
        k = np.floor(L / diameter)
        rem = L - k * diameter
        over = rem >= diameter * (1.0 - _SNAP)
        k = np.where(over, k + 1, k)
        rem = np.where(over, rem - diameter, rem)
        rem = np.where(rem < _SNAP * diameter, 0.0, rem)
        short = L < diameter
        value = np.where(short, eval_gauge(g, L), k * eval_gauge(g, diameter) + eval_gauge(g, rem))
        attained = short | g.is_counting
    if np.ndim(length) == 0:
        return float(value), bool(attained)
    return value, np.asarray(attained)


def _dp_batch(g: Gauge, lefts: np.ndarray, rights: np.ndarray, counts: np.ndarray, diameter: float):
    """Run-partition dynamic program for many sets at once (padded arrays)."""
    n_sets, k_max = lefts.shape
    rows = np.arange(n_sets)
    best = np.full((n_sets, k_max + 1), np.inf)
    best[:, 0] = 0.0
    attained = np.ones((n_sets, k_max + 1), dtype=bool)
    for j in range(k_max):
        cost, att = single_interval_content(g, rights[:, j:j + 1] - lefts[:, :j + 1], diameter)
        total = best[:, :j + 1] + cost
        low = np.min(total, axis=1)
        ties = total <= low[:, None] + 1e-14 * np.maximum(1.0, np.abs(low[:, None]))
        best[:, j + 1] = low
        attained[:, j + 1] = np.any(ties & att & attained[:, :j + 1], axis=1)
    return best[rows, counts], attained[rows, counts]


def content_dp(g: Gauge, s: IntervalUnion, diameter: float = math.inf) -> ContentResult:
    if not g.is_concave:
        raise CapabilityError(
            "exact-dp needs a concave gauge; use brute_force_content or split_cover_bound for bounds")
    if s.is_empty:
        return ContentResult(0.0, True, EXACT_DP)
    a, b = s.arrays()
    value, att = _dp_batch(g.restricted(s.r), a[None, :], b[None, :], np.array([len(s)]), diameter)
    return ContentResult(float(value[0]), bool(att[0]), EXACT_DP)


def content_dp_batch(g: Gauge, lefts, rights, counts, diameter: float = math.inf, r: float = math.inf):
    """Exact-DP contents of many sets given as padded ``(N, K)`` endpoint arrays."""
    if not g.is_concave:
        raise CapabilityError("exact-dp needs a concave gauge")
    lefts = np.asarray(lefts, dtype=float)
    rights = np.asarray(rights, dtype=float)
    counts = np.asarray(counts, dtype=np.int64)
    gr = g.restricted(r) if math.isfinite(r) else g
    value, _ = _dp_batch(gr, lefts, rights, counts, diameter)
    return np.where(counts == 0, 0.0, value)


def content_limit(g: Gauge, s: IntervalUnion, steps: int = LIMIT_STEPS) -> ContentResult:
    """Follow ``m_h^l`` along ``l = r 2^-j`` for ``j = 0..steps``."""
    values = [content_dp(g, s, s.r * 2.0 ** -j).value for j in range(steps + 1)]
    last, prev = values[-1], values[-2]
    converged = abs(last - prev) <= LIMIT_RTOL * max(abs(last), 1e-300) or last == prev
    return ContentResult(last, True, LIMIT, converged=bool(converged), history=tuple(values))


def _candidate_points(endpoints: np.ndarray, r: float, grid: int, diameter: float) -> np.ndarray:
    tol = 1e-12 * r
    base = np.unique(endpoints)
    pts = list(base)
    extra = [i * r / grid for i in range(grid + 1)] if grid > 0 else []
    if math.isfinite(diameter):
        steps = int(math.floor(r / diameter)) + 1
        for e in base:
            for j in range(1, steps + 1):
                extra.append(e + j * diameter)
                extra.append(e - j * diameter)
    extra = np.asarray([x for x in extra if -tol <= x <= r + tol])
    extra = np.clip(extra, 0.0, r)
    # endpoints win ties so that exact multiples land on them
    for x in np.sort(extra):
        k = np.searchsorted(base, x)
        near = (k < len(base) and base[k] - x <= tol) or (k > 0 and x - base[k - 1] <= tol)
        if not near:
            pts.append(x)
    pts = np.sort(np.asarray(pts, dtype=float))
    keep = np.concatenate([[True], np.diff(pts) > tol])
    return pts[keep]


def _cover_tables(g: Gauge, pts: np.ndarray, diameter: float):
    n = len(pts)
    span = pts[None, :] - pts[:, None]
    if math.isinf(diameter):
        limit = np.inf
    elif g.zero_at_origin:
        # h continuous with h(0) = 0: closing "< l" to "<= l" keeps the infimum
        limit = diameter * (1.0 + 1e-12)
    else:
        limit = diameter * (1.0 - 1e-9)
    ok = (span >= 0) & (span <= limit)
    cost = np.where(ok, eval_gauge(g, np.clip(span, 0.0, diameter if math.isfinite(diameter) else None)), np.inf)
    reach = np.array([np.nonzero(ok[i])[0].max() for i in range(n)], dtype=np.int64)
    return np.ascontiguousarray(cost), reach


def brute_force_batch(g: Gauge, r: float, lefts, rights, counts, diameter: float = math.inf,
                      grid: int = 16) -> np.ndarray:
    """Cover-search contents for many sets sharing one candidate grid.

    The candidate endpoints are all set endpoints, the uniform grid
    ``i r / grid`` and every endpoint shifted by multiples of ``l``.
    """
    lefts = np.asarray(lefts, dtype=float)
    rights = np.asarray(rights, dtype=float)
    counts = np.asarray(counts, dtype=np.int64)
    mask = np.arange(lefts.shape[1])[None, :] < counts[:, None]
    endpoints = np.concatenate([lefts[mask], rights[mask]])
    pts = _candidate_points(endpoints, r, grid, diameter)
    cost, reach = _cover_tables(g.restricted(r), pts, diameter)

    def index(x):
        k = np.clip(np.searchsorted(pts, x), 1, len(pts) - 1)
        return np.where(np.abs(pts[k - 1] - x) <= np.abs(pts[k] - x), k - 1, k).astype(np.int64)

    li = np.where(mask, index(lefts), 0)
    ri = np.where(mask, index(rights), 0)
    return cover_costs(cost, reach, np.ascontiguousarray(li), np.ascontiguousarray(ri), counts)


def brute_force_content(g: Gauge, s: IntervalUnion, diameter: float = math.inf, grid: int = 16) -> float:
    """Exhaustive search over covers with endpoints on a candidate grid.

    An upper bound on the content that converges as ``grid`` grows; exact for
    concave gauges because optimal covers only use endpoint offsets by
    multiples of ``l``, which are always candidates.
    """
    if len(s) > BRUTE_MAX_COMPONENTS:
        raise SizeError(f"brute force handles at most {BRUTE_MAX_COMPONENTS} components, got {len(s)}")
    if grid > BRUTE_MAX_GRID or grid < 0:
        raise SizeError(f"grid must lie in [0, {BRUTE_MAX_GRID}], got {grid}")
    if s.is_empty:
        return 0.0
    a, b = s.arrays()
    return float(brute_force_batch(g, s.r, a[None, :], b[None, :], [len(s)], diameter, grid)[0])


def split_cover_bound(g: Gauge, s: IntervalUnion, diameter: float, max_factor: int = 64) -> float:
    """Upper bound for any gauge: each component split into equal pieces.

    Tries piece counts from the minimum allowed by ``l`` up to ``max_factor``
    times that; useful for convex gauges where finer covers are cheaper.
    """
    total = 0.0
    for a, b in s:
        L = b - a
        n_min = 1 if math.isinf(diameter) else int(math.floor(L / diameter)) + 1
        n = np.arange(n_min, n_min * max_factor + 1, dtype=float)
        total += float(np.min(n * eval_gauge(g, L / n)))
    return total


def hausdorff_content(g: Gauge, s: IntervalUnion, diameter: float = math.inf,
                      mode: str = EXACT_DP, grid: int = 16) -> ContentResult:
    if not diameter > 0:
        raise DomainError(f"diameter limit must be positive, got {diameter}")
    mode = _MODE_ALIASES.get(mode, mode)
    if mode == EXACT_DP:
        return content_dp(g, s, diameter)
    if mode == BRUTE_FORCE:
        value = brute_force_content(g, s, diameter, grid)
        return ContentResult(value, math.isinf(diameter), BRUTE_FORCE)
    if mode == LIMIT:
        if not g.is_concave:
            raise CapabilityError("limit mode runs the exact DP and needs a concave gauge")
        return content_limit(g, s)
    raise DomainError(f"unknown content mode {mode!r}")
