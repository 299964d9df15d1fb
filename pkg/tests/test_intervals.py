import math

import pytest

from fractal_nevanlinna.errors import DomainError, SizeError
from fractal_nevanlinna.intervals import (cantor_prefractal, from_literal, from_points, normalize,
                                          similarity_dimension)


def test_normalize_merges_overlaps_and_adjacency():
    assert normalize([[0.5, 0.9], [0.1, 0.6]], 1).components == [(0.1, 0.9)]
    assert normalize([[0, 0.3], [0.3, 0.5]], 1).components == [(0.0, 0.5)]


def test_degenerate_components_survive():
    s = normalize([[0, 0], [1, 1]], 1)
    assert s.components == [(0.0, 0.0), (1.0, 1.0)]


def test_outside_ambient_rejected():
    with pytest.raises(DomainError):
        normalize([[0.5, 1.5]], 1)


def test_cantor_stages():
    assert cantor_prefractal(0, 1 / 3).components == [(0.0, 1.0)]
    s1 = cantor_prefractal(1, 1 / 3)
    assert len(s1) == 2
    assert s1.rights[0] == pytest.approx(1 / 3)
    assert s1.lefts[1] == pytest.approx(2 / 3)
    s2 = cantor_prefractal(2, 1 / 3)
    assert len(s2) == 4
    assert all(b - a == pytest.approx(1 / 9) for a, b in s2)


def test_cantor_depth_guard():
    with pytest.raises(SizeError):
        cantor_prefractal(31, 1 / 3)


@pytest.mark.parametrize("ratio", [1 / 3, 0.25, 0.4])
def test_cantor_nesting_and_length(ratio):
    for n in range(10):
        outer, inner = cantor_prefractal(n, ratio), cantor_prefractal(n + 1, ratio)
        assert inner.issubset(outer)
        assert inner.total_length == pytest.approx((2 * ratio) ** (n + 1), rel=1e-12)


def test_similarity_dimension():
    assert similarity_dimension(1 / 3) == pytest.approx(math.log(2) / math.log(3))
    assert similarity_dimension(0.25) == pytest.approx(0.5)
    assert similarity_dimension(0.49) == pytest.approx(math.log(2) / math.log(1 / 0.49))
    assert similarity_dimension(0.49) == pytest.approx(0.97168, abs=1e-5)


def test_literals():
    assert len(from_literal({"cantor": {"depth": 3, "ratio": 0.3}})) == 8
    assert from_literal({"points": [0.2, 0.1]}).components == [(0.1, 0.1), (0.2, 0.2)]
    assert from_literal([[0, 2]]).r == 2.0
    assert from_points([0.5], 1).contains(0.5)
