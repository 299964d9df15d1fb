import itertools
import math

import numpy as np
import pytest

from fractal_nevanlinna.content import (ContentQuery, brute_force_content, content_dp, content_limit,
                                        hausdorff_content, single_interval_content, split_cover_bound)
from fractal_nevanlinna.errors import CapabilityError, DomainError, SizeError
from fractal_nevanlinna.gauge import Gauge, eval_gauge, normalization_constant
from fractal_nevanlinna.intervals import cantor_prefractal, from_points, normalize

SQRT = Gauge.power(1.0, 0.5)
LINEAR = Gauge.power(1.0, 1.0)
CANTOR_D = math.log(2) / math.log(3)


def piece_oracle(g, L, l, max_pieces=40, grid=4001):
    """Cheapest cover of [0, L] by n pieces shorter than l: all but one piece at length ~l,
    with the remaining length scanned on a grid."""
    best = math.inf
    for n in range(1, max_pieces + 1):
        if n * l <= L:
            continue
        # n - 1 pieces share L - x, the last one gets x; concavity favours unequal splits
        x = np.linspace(max(0.0, L - (n - 1) * l), min(L, l), grid)
        others = (L - x) / max(n - 1, 1)
        cost = eval_gauge(g, x) + (n - 1) * eval_gauge(g, others)
        best = min(best, float(np.min(cost)))
    return best


def test_examples():
    assert content_dp(SQRT, normalize([[0, 1]], 1)).value == pytest.approx(1.0, abs=1e-15)
    s = normalize([[0, 0.2], [0.8, 1]], 1)
    assert content_dp(SQRT, s).value == pytest.approx(2 * math.sqrt(0.2), abs=1e-12)
    g = Gauge.power(1.0, CANTOR_D)
    assert content_dp(g, cantor_prefractal(2, 1 / 3)).value == pytest.approx(1.0, abs=1e-12)


def test_single_interval_examples():
    assert single_interval_content(SQRT, 1.0, math.inf) == (1.0, True)
    value, attained = single_interval_content(SQRT, 1.0, 0.4)
    assert value == pytest.approx(2 * math.sqrt(0.4) + math.sqrt(0.2), abs=1e-12)
    assert not attained
    assert value == pytest.approx(1.7121, abs=1e-4)
    assert single_interval_content(LINEAR, 1.0, 0.5)[0] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("L,l", [(1.0, 0.4), (1.0, 0.3), (0.7, 0.25), (1.0, 0.11)])
def test_single_interval_matches_grid_oracle(L, l):
    value, _ = single_interval_content(SQRT, L, l)
    oracle = piece_oracle(SQRT, L, l)
    assert value <= oracle + 1e-9
    assert value == pytest.approx(oracle, abs=1e-3)


def test_brute_force_examples():
    assert brute_force_content(LINEAR, normalize([[0, 1]], 1), math.inf, 8) == pytest.approx(1.0)
    assert brute_force_content(SQRT, from_points([0, 1], 1)) == 0.0
    assert brute_force_content(Gauge.normalized(0.0), from_points([0, 0.5, 1], 1), 0.4) == 3.0


def test_guards():
    with pytest.raises(SizeError):
        brute_force_content(SQRT, cantor_prefractal(3, 1 / 3))
    with pytest.raises(CapabilityError):
        content_dp(Gauge.power(1.0, 2.0), normalize([[0, 1]], 1))
    with pytest.raises(DomainError):
        ContentQuery(SQRT, normalize([[0, 1]], 1), 0.0)


def test_query_and_modes_agree():
    s = normalize([[0, 0.2], [0.5, 0.55], [0.9, 1]], 1)
    for l in (math.inf, 0.6, 0.3):
        dp = ContentQuery(SQRT, s, l).evaluate().value
        assert hausdorff_content(SQRT, s, l, "brute").value == pytest.approx(dp, abs=1e-9)


def test_monotone_in_diameter_and_set():
    s = normalize([[0, 0.3], [0.45, 0.5], [0.7, 1.0]], 1)
    sub = normalize([[0, 0.3], [0.7, 0.9]], 1)
    ls = [math.inf, 0.8, 0.5, 0.3, 0.2, 0.1, 0.05]
    values = [content_dp(SQRT, s, l).value for l in ls]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    for l in ls:
        assert content_dp(SQRT, sub, l).value <= content_dp(SQRT, s, l).value + 1e-12


def test_subadditive_on_unions():
    a = normalize([[0, 0.2], [0.6, 0.65]], 1)
    b = normalize([[0.3, 0.4], [0.9, 1]], 1)
    for l in (math.inf, 0.5, 0.15):
        both = content_dp(SQRT, a.union(b), l).value
        assert both <= content_dp(SQRT, a, l).value + content_dp(SQRT, b, l).value + 1e-12


def test_lebesgue_limit_example():
    g = Gauge.normalized(1.0)
    s = normalize([[0.1, 0.35], [0.5, 0.52], [0.8, 1.0]], 1)
    res = content_limit(g, s)
    assert res.converged
    assert res.value == pytest.approx(s.total_length, abs=1e-8)


def test_zero_on_interval_for_d2():
    c2 = normalization_constant(2.0)
    g = Gauge.normalized(2.0)
    s = normalize([[0, 1]], 1)
    for j in range(13):
        l = 2.0 ** -j
        value = split_cover_bound(g, s, l)
        assert value <= c2 / math.floor(1 / l) + 1e-12
    assert split_cover_bound(g, s, 2.0 ** -12) < 1e-3


def test_cantor_calibration_all_stages():
    g = Gauge.power(1.0, CANTOR_D)
    for n in range(7):
        assert content_dp(g, cantor_prefractal(n, 1 / 3)).value == pytest.approx(1.0, abs=1e-9)


def test_counting_content():
    g = Gauge.normalized(0.0)
    rng = np.random.default_rng(11)
    for k in range(1, 11):
        pts = np.sort(rng.choice(np.arange(0, 64), size=k, replace=False) / 63.0)
        gap = np.min(np.diff(pts)) if k > 1 else 1.0
        assert content_dp(g, from_points(pts, 1), 0.5 * gap).value == k


def test_exhaustive_small_grid():
    cells = [(i / 8, (i + 1) / 8) for i in range(8)]
    for combo in itertools.combinations(range(8), 3):
        s = normalize([cells[i] for i in combo], 1)
        for g in (SQRT, LINEAR):
            for l in (math.inf, 0.3):
                assert content_dp(g, s, l).value == pytest.approx(brute_force_content(g, s, l), abs=1e-9)
