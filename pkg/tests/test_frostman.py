import math

import numpy as np
import pytest

from fractal_nevanlinna.errors import CapabilityError, DegenerateSetError, DomainError
from fractal_nevanlinna.frostman import FrostmanResult, frostman_measure, verify_frostman
from fractal_nevanlinna.gauge import Gauge
from fractal_nevanlinna.increasing import IncreasingFunction
from fractal_nevanlinna.intervals import from_points, normalize


def test_uniform_on_unit_interval():
    g = Gauge.power(1.0, 1.0)
    E = normalize([[0, 1]], 1)
    res = frostman_measure(g, E, 2, 10)
    t = np.linspace(0, 1, 101)
    assert res.total_mass == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(res.distribution(t), t, atol=1e-12)
    report = verify_frostman(res, g, E)
    assert report.passed
    assert report.empirical_A == pytest.approx(1.0, abs=1e-12)


def test_cantor_stage_eight(cantor_frostman, cantor_gauge, cantor_set):
    assert cantor_frostman.total_mass == pytest.approx(1.0, abs=1e-5)
    stair = IncreasingFunction.cantor_staircase(8)
    t = np.linspace(0, 1, 2001)
    assert np.allclose(cantor_frostman.distribution(t), stair(t), atol=1e-5)
    report = verify_frostman(cantor_frostman, cantor_gauge, cantor_set)
    assert report.passed
    assert report.empirical_A <= 4


def test_single_point_is_degenerate():
    with pytest.raises(DegenerateSetError):
        frostman_measure(Gauge.power(1.0, 0.5), from_points([0.5], 1))


def test_gauge_guards():
    E = normalize([[0, 1]], 1)
    with pytest.raises(CapabilityError):
        frostman_measure(Gauge.power(1.0, 2.0), E)
    with pytest.raises(DomainError):
        frostman_measure(Gauge.normalized(0.0), E)


def test_adversarial_jump_is_flagged():
    g = Gauge.power(1.0, 0.5)
    E = normalize([[0, 1]], 1)
    bad = IncreasingFunction.single_jump(0.5, 2.0)
    report = verify_frostman(FrostmanResult(bad, 2.0, 2, 4, 0.5), g, E)
    assert not report.passed
    assert report.violations


def test_deterministic():
    g = Gauge.power(1.0, 0.7)
    E = normalize([[0.05, 0.2], [0.4, 0.41], [0.6, 0.93]], 1)
    a = frostman_measure(g, E, 2, 12).distribution
    b = frostman_measure(g, E, 2, 12).distribution
    assert np.array_equal(a.knot_t, b.knot_t) and np.array_equal(a.knot_v, b.knot_v)


def test_mass_stays_on_set():
    g = Gauge.power(1.0, 0.6)
    E = normalize([[0.1, 0.3], [0.7, 0.75]], 1)
    m = frostman_measure(g, E, 2, 10).distribution
    assert m.support().issubset(E, tol=1e-12)
    assert m(0.3) == pytest.approx(m(0.7), abs=1e-15)
