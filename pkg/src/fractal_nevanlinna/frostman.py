"""Constructive Frostman measures on finite interval unions.

A net measure is built on the base-``b`` net of ``[0, r]``: every finest
cell gets mass ``h(|cell n E|)`` spread uniformly over ``cell n E``, then a
fine-to-coarse sweep rescales the descendants of every cell whose mass
exceeds ``h`` of its length.  The net bound holds on cells only, so the
result is finally divided by the exact sup of ``mu(J)/h(|J|)`` over all
intervals ``J``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .content import content_dp
from .errors import CapabilityError, DegenerateSetError, DomainError, SizeError
from .gauge import Gauge, eval_gauge
from .increasing import IncreasingFunction, interval_measure
from .intervals import IntervalUnion

MAX_TREE_BITS = 48
MAX_ACTIVE_CELLS = 2 ** 22
_PAIR_CHUNK = 2 ** 22
CELL_SLACK = 1e-12


@dataclass(frozen=True)
class FrostmanResult:
    distribution: IncreasingFunction
    total_mass: float
    net_base: int
    depth: int
    empirical_A: float
    raw_sup_ratio: float = 1.0

    def to_dict(self) -> dict:
        return {"total_mass": self.total_mass, "empirical_A": self.empirical_A, "net_base": self.net_base,
                "depth": self.depth, "normalizing_factor": self.raw_sup_ratio}


@dataclass
class FrostmanReport:
    passed: bool
    max_interval_ratio: float
    max_subunion_excess: float
    empirical_A: float
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "max_interval_ratio": self.max_interval_ratio,
                "max_subunion_excess": self.max_subunion_excess, "empirical_A": self.empirical_A,
                "violations": self.violations}


def _fine_cells(E: IntervalUnion, base: int, depth: int):
    """Indices of finest cells meeting ``E`` in positive length, with the pieces of ``E`` inside them."""
    n_cells = base ** depth
    width = E.r / n_cells
    idx_parts, lo_parts, hi_parts = [], [], []
    count = 0
    for a, b in E:
        if b <= a:
            continue
        first = min(int(math.floor(a / width)), n_cells - 1)
        last = min(int(math.ceil(b / width)) - 1, n_cells - 1)
        count += last - first + 1
        if count > MAX_ACTIVE_CELLS:
            raise SizeError(f"more than {MAX_ACTIVE_CELLS} active net cells; lower the depth")
        k = np.arange(first, last + 1, dtype=np.int64)
        lo = np.maximum(k * width, a)
        hi = np.minimum((k + 1) * width, b)
        keep = hi > lo
        idx_parts.append(k[keep])
        lo_parts.append(lo[keep])
        hi_parts.append(hi[keep])
    if not idx_parts:
        return np.zeros(0, dtype=np.int64), np.zeros(0), np.zeros(0)
    return np.concatenate(idx_parts), np.concatenate(lo_parts), np.concatenate(hi_parts)


def _net_masses(g: Gauge, idx: np.ndarray, piece_len: np.ndarray, base: int, depth: int, r: float):
    """Saturated net masses per piece after the fine-to-coarse sweep."""
    # pieces of one cell share the cell's mass h(|cell n E|)
    cells, start = np.unique(idx, return_index=True)
    cell_len = np.add.reduceat(piece_len, start)
    cell_mass = eval_gauge(g, cell_len)
    for level in range(depth - 1, -1, -1):
        parent = cells // base ** (depth - level)
        _, pstart, pinv = np.unique(parent, return_index=True, return_inverse=True)
        total = np.add.reduceat(cell_mass, pstart)
        cap = eval_gauge(g, r * float(base) ** -level)
        scale = np.where(total > cap, cap / np.where(total > 0, total, 1.0), 1.0)
        cell_mass = cell_mass * scale[pinv]
    for level in range(depth, -1, -1):
        parent = cells // base ** (depth - level)
        _, pstart = np.unique(parent, return_index=True)
        total = np.add.reduceat(cell_mass, pstart)
        cap = eval_gauge(g, r * float(base) ** -level)
        if np.any(total > cap * (1.0 + CELL_SLACK)):
            raise AssertionError("net sweep left a cell above its gauge bound")
    piece_cell = np.searchsorted(cells, idx)
    return cell_mass[piece_cell] * piece_len / cell_len[piece_cell]


def sup_interval_ratio(m: IncreasingFunction, g: Gauge) -> float:
    """``sup_J mu(J) / h(|J|)`` over closed intervals ``J`` of ``[0, r]``, for continuous ``m``.

    Between breakpoints ``mu(J)`` is linear in each endpoint and ``h`` is
    concave, so the ratio is quasiconvex in each endpoint and the sup is
    taken at breakpoint pairs.
    """
    bp = m.breakpoints
    vals = m(bp)
    best = 0.0
    step = max(1, _PAIR_CHUNK // bp.size)
    for lo in range(0, bp.size, step):
        a = bp[lo:lo + step, None]
        va = vals[lo:lo + step, None]
        span = bp[None, :] - a
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (vals[None, :] - va) / eval_gauge(g, np.maximum(span, 0.0))
        ratio = np.where(span > 0, ratio, 0.0)
        best = max(best, float(np.max(ratio)))
    return best


def frostman_measure(g: Gauge, E: IntervalUnion, net_base: int = 2, depth: int = 10) -> FrostmanResult:
    """Nonzero measure on ``E`` with ``mu([a, b]) <= h(b - a)`` for every interval."""
    if net_base < 2 or depth < 1:
        raise DomainError("need net_base >= 2 and depth >= 1")
    if depth * math.log2(net_base) > MAX_TREE_BITS:
        raise SizeError(f"net tree too large: depth * log2(base) exceeds {MAX_TREE_BITS}")
    if not g.zero_at_origin:
        raise DomainError("the Frostman construction needs a gauge with h(0) = 0")
    if not g.is_concave:
        raise CapabilityError("the Frostman construction needs a concave gauge (exact content for A)")
    if E.is_empty:
        raise DegenerateSetError("E is empty")
    gr = g.restricted(E.r)
    content = content_dp(gr, E).value
    idx, lo, hi = _fine_cells(E, net_base, depth)
    if content <= 0 or idx.size == 0:
        raise DegenerateSetError("E has zero h-content: no nonzero measure obeys mu([a, b]) <= h(b - a)")
    masses = _net_masses(gr, idx, hi - lo, net_base, depth, E.r)
    raw = IncreasingFunction(E.r, knots=_knots(lo, hi, masses, E.r))
    rho = sup_interval_ratio(raw, gr)
    if not 0 < rho <= 2 * net_base * (1.0 + 1e-9):
        raise AssertionError(f"net measure overshoots its gauge by {rho}, beyond 2 * base")
    dist = IncreasingFunction(E.r, knots=_knots(lo, hi, masses / rho, E.r))
    mass = dist.total_variation
    if mass <= 0:
        raise DegenerateSetError("construction produced the zero measure")
    return FrostmanResult(dist, mass, net_base, depth, content / mass, rho)


def _knots(lo, hi, masses, r):
    order = np.argsort(lo, kind="stable")
    lo, hi, masses = lo[order], hi[order], masses[order]
    cum = np.concatenate([[0.0], np.cumsum(masses)])
    t = np.concatenate([[0.0], np.column_stack([lo, hi]).ravel(), [r]])
    v = np.concatenate([[0.0], np.column_stack([cum[:-1], cum[1:]]).ravel(), [cum[-1]]])
    t, first = np.unique(t, return_index=True)
    return list(zip(t.tolist(), v[first].tolist()))


def verify_frostman(res: FrostmanResult, g: Gauge, E: IntervalUnion, trials: int = 1000,
                    seed: int = 0, slack: float = CELL_SLACK) -> FrostmanReport:
    """Check ``mu([a, b]) <= h(b - a)`` and ``mu(S) <= m_h(S)``; failures are data."""
    rng = np.random.default_rng(seed)
    m = res.distribution
    r = E.r
    gr = g.restricted(r)
    violations = []
    ab = np.sort(rng.uniform(0.0, r, size=(trials, 2)), axis=1)
    n_cells = res.net_base ** res.depth
    if n_cells <= 2 ** 16:
        k = np.arange(n_cells)
        ab = np.concatenate([ab, np.column_stack([k * (r / n_cells), (k + 1) * (r / n_cells)])])
    a, b = ab[:, 0], ab[:, 1]
    mu = np.maximum(m(b) - m.left_limit(a), 0.0)
    cap = eval_gauge(gr, b - a)
    bad = mu > cap + slack * np.maximum(1.0, cap)
    for i in np.nonzero(bad)[0][:20]:
        violations.append({"check": "interval", "a": float(a[i]), "b": float(b[i]),
                           "measure": float(mu[i]), "gauge": float(cap[i])})
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(cap > 0, mu / np.where(cap > 0, cap, 1.0), np.where(mu > 0, np.inf, 0.0))
    worst = float(np.max(ratio))
    excess = -math.inf
    k = len(E)
    for _ in range(min(trials, 200)):
        chosen = [i for i in range(k) if rng.random() < 0.5] or [int(rng.integers(k))]
        S = E.select(chosen)
        mu = sum(interval_measure(m, a, b, closed=True) for a, b in S)
        bound = content_dp(gr, S).value
        excess = max(excess, mu - bound)
        if mu > bound + 1e-9:
            violations.append({"check": "subunion", "components": chosen, "measure": mu, "content": bound})
    mass = m.total_variation
    A = content_dp(gr, E).value / mass if mass > 0 else math.inf
    return FrostmanReport(not violations, worst, excess, A, violations)
