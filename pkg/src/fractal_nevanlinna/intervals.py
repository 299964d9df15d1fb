"""Compact subsets of ``[0, r]`` stored as finite unions of disjoint closed intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, SizeError

MAX_CANTOR_DEPTH = 30


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, strictly disjoint closed intervals ``[a_k, b_k]`` inside ``[0, r]``.

    Degenerate components ``a_k == b_k`` model isolated points.  Instances are
    built through :func:`normalize` (or the other constructors) which enforce
    the ordering invariants.
    """

    r: float
    lefts: tuple
    rights: tuple

    def __len__(self) -> int:
        return len(self.lefts)

    def __iter__(self):
        return iter(zip(self.lefts, self.rights))

    @property
    def components(self) -> list[tuple[float, float]]:
        return list(zip(self.lefts, self.rights))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.lefts, dtype=float), np.asarray(self.rights, dtype=float)

    @property
    def total_length(self) -> float:
        a, b = self.arrays()
        return float(np.sum(b - a))

    @property
    def is_empty(self) -> bool:
        return not self.lefts

    def contains(self, x: float, tol: float = 0.0) -> bool:
        a, b = self.arrays()
        k = np.searchsorted(b, x - tol, side="left")
        return bool(k < len(b) and a[k] - tol <= x)

    def contains_interval(self, lo: float, hi: float, tol: float = 0.0) -> bool:
        """Whether ``[lo, hi]`` lies inside a single component."""
        a, b = self.arrays()
        k = np.searchsorted(b, hi - tol, side="left")
        return bool(k < len(b) and a[k] - tol <= lo and hi <= b[k] + tol)

    def issubset(self, other: "IntervalUnion", tol: float = 0.0) -> bool:
        return all(other.contains_interval(a, b, tol) for a, b in self)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return normalize(self.components + other.components, max(self.r, other.r))

    def select(self, indices: Iterable[int]) -> "IntervalUnion":
        """Sub-union formed by the components with the given indices."""
        idx = sorted(set(indices))
        return IntervalUnion(self.r, tuple(self.lefts[i] for i in idx), tuple(self.rights[i] for i in idx))

    def to_list(self) -> list[list[float]]:
        return [[a, b] for a, b in self]


def normalize(raw: Sequence[Sequence[float]], ambient_right: float) -> IntervalUnion:
    """Sort ``raw`` intervals and merge overlapping or touching ones."""
    r = float(ambient_right)
    if not r > 0:
        raise DomainError(f"ambient interval [0, r] needs r > 0, got {r}")
    items = []
    for iv in raw:
        a, b = float(iv[0]), float(iv[1])
        if not (0.0 <= a <= b <= r):
            raise DomainError(f"interval [{a}, {b}] is not inside [0, {r}]")
        items.append((a, b))
    items.sort()
    lefts: list[float] = []
    rights: list[float] = []
    for a, b in items:
        if rights and a <= rights[-1]:
            rights[-1] = max(rights[-1], b)
        else:
            lefts.append(a)
            rights.append(b)
    return IntervalUnion(r, tuple(lefts), tuple(rights))


def from_points(points: Iterable[float], ambient_right: float) -> IntervalUnion:
    return normalize([(p, p) for p in points], ambient_right)


def cantor_prefractal(depth: int, ratio: float, ambient_right: float = 1.0) -> IntervalUnion:
    """Stage ``depth`` of the two-map contraction of ``[0, r]`` with factor ``ratio``.

    Children are cut from their parent's endpoints, so every stage is
    contained in the previous one exactly, not just up to rounding.
    """
    if depth < 0 or depth > MAX_CANTOR_DEPTH:
        raise SizeError(f"depth must lie in [0, {MAX_CANTOR_DEPTH}], got {depth}")
    if not 0 < ratio < 0.5:
        raise DomainError(f"ratio must lie in (0, 1/2), got {ratio}")
    a = np.array([0.0])
    b = np.array([float(ambient_right)])
    for _ in range(depth):
        step = ratio * (b - a)
        a, b = (np.stack([a, b - step], axis=1).ravel(), np.stack([a + step, b], axis=1).ravel())
    return IntervalUnion(float(ambient_right), tuple(a.tolist()), tuple(b.tolist()))


def similarity_dimension(ratio: float) -> float:
    """Exponent ``d`` with ``2 * ratio**d == 1``."""
    if not 0 < ratio < 0.5:
        raise DomainError(f"ratio must lie in (0, 1/2), got {ratio}")
    return math.log(2.0) / math.log(1.0 / ratio)


def from_literal(spec, ambient_right: float | None = None) -> IntervalUnion:
    """Parse a set literal.

    Accepted forms: ``[[a, b], ...]``, ``{"intervals": [...], "r": r}``,
    ``{"points": [...], "r": r}`` and
    ``{"cantor": {"depth": n, "ratio": x}, "r": r}``.
    """
    r = ambient_right
    if isinstance(spec, dict):
        r = float(spec.get("r", r if r is not None else 1.0))
        if "cantor" in spec:
            c = spec["cantor"]
            return cantor_prefractal(int(c["depth"]), float(c["ratio"]), r)
        if "points" in spec:
            return from_points(spec["points"], r)
        if "intervals" in spec:
            return normalize(spec["intervals"], r)
        raise DomainError(f"unrecognized set literal keys: {sorted(spec)}")
    if isinstance(spec, (list, tuple)):
        if r is None:
            r = max([1.0] + [float(iv[1]) for iv in spec])
        return normalize(spec, r)
    raise DomainError(f"unrecognized set literal {spec!r}")
