"""Compiled shortest-path kernel behind the brute-force cover oracle."""
import numpy as np
from numba import njit


@njit(cache=True)
def cover_costs(cost, reach, left_idx, right_idx, counts):
    """Minimal cover cost for each set, over covers with endpoints in a fixed grid.

    ``cost[p, q]`` prices the interval between grid points ``p <= q`` and is
    only read for ``q <= reach[p]``.  Sets are given by the grid indices of
    their component endpoints.  State ``x`` means "everything of the set up to
    grid point ``x`` is covered"; the next interval starts at the first point
    still uncovered, which is optimal because ``cost`` grows with ``q - p``.
    """
    n_sets = left_idx.shape[0]
    n = cost.shape[0]
    out = np.empty(n_sets)
    best = np.empty(n)
    for s in range(n_sets):
        k_total = counts[s]
        if k_total == 0:
            out[s] = 0.0
            continue
        for i in range(n):
            best[i] = np.inf
        p = left_idx[s, 0]
        for q in range(p, reach[p] + 1):
            if cost[p, q] < best[q]:
                best[q] = cost[p, q]
        result = np.inf
        k = 0
        for x in range(n):
            base = best[x]
            if base == np.inf:
                continue
            while k < k_total and right_idx[s, k] <= x:
                k += 1
            if k == k_total:
                if base < result:
                    result = base
                continue
            need = x if left_idx[s, k] <= x else left_idx[s, k]
            for q in range(need, reach[need] + 1):
                if q == x:
                    continue
                v = base + cost[need, q]
                if v < best[q]:
                    best[q] = v
        out[s] = result
    return out
