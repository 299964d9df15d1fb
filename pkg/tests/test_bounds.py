import math

import numpy as np
import pytest

from fractal_nevanlinna import bounds
from fractal_nevanlinna.bounds import (CaseInputs, power_gauge_chain, evaluate_case, frostman_sharpness, lemma1_monotone,
                                       lhs_integral, measure_factors, rhs_main, rhs_theorem1, rhs_theorem2_swap,
                                       rhs_theorem4)
from fractal_nevanlinna.content import content_dp
from fractal_nevanlinna.errors import PreconditionError
from fractal_nevanlinna.gauge import Gauge, normalization_constant
from fractal_nevanlinna.increasing import IncreasingFunction
from fractal_nevanlinna.intervals import from_points, normalize
from fractal_nevanlinna.nevanlinna import OUTER, LogRatio, characteristic_T, random_log_ratio

LOG = LogRatio.build(0.0, [(0, 1)])
ID = IncreasingFunction.identity(1.0)


def test_lhs_examples():
    assert lhs_integral(LOG, ID).value == pytest.approx(0.0, abs=1e-12)
    res = lhs_integral(LOG, IncreasingFunction.identity(math.e), tol=1e-12)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert abs(res.value - 1.0) <= res.error + 1e-15
    two = IncreasingFunction.identity(1.0, slope=2.0)
    assert lhs_integral(LogRatio.build(5.0), two).value == pytest.approx(10.0)


def test_main_examples():
    with pytest.raises(PreconditionError):
        measure_factors(IncreasingFunction.single_jump(0.5, 1.0), 2.0)
    f = measure_factors(ID, 2.0)
    assert f.diameter == 1.0
    assert f.log_integral == pytest.approx(1 + math.log(8), rel=1e-6)
    T = characteristic_T(LOG, 1.0, 2.0)
    for variant in (bounds.MAIN_MAX, bounds.MAIN_SUM):
        assert rhs_main(T, 1.0, 2.0, f, variant) == pytest.approx(12 * T * (1 + math.log(8)), rel=1e-6)


def test_theorem1_cantor(cantor_frostman, cantor_gauge):
    m = cantor_frostman.distribution
    value = rhs_theorem1(1.0, m, cantor_gauge, 1.0, 2.0)
    d = math.log(2) / math.log(3)
    M = m.total_variation
    expected = 12 * M * (math.log(8 / M ** (1 / d)) + 1 / d)
    assert value == pytest.approx(expected, rel=1e-12)


def test_theorem1_rejects_log_gauge():
    t = np.geomspace(1e-12, 1.0, 400)
    g = Gauge.tabulated(list(zip(t, 1.0 / np.log(math.e / t))))
    with pytest.raises(PreconditionError):
        rhs_theorem1(1.0, ID, g, 1.0, 2.0)


def test_theorem1_rejects_modulus_violation():
    with pytest.raises(PreconditionError, match="modulus exceeds gauge"):
        rhs_theorem1(1.0, IncreasingFunction.identity(1.0, slope=2.0), Gauge.power(1.0, 1.0), 1.0, 2.0)


def test_theorem4_identity():
    res = rhs_theorem4(1.0, ID, normalize([[0, 1]], 1), 1.0, 2.0, 1.0, 1.0)
    assert res.content == pytest.approx(1.0)
    assert res.value == pytest.approx(24 * 2 * (math.log(2 * math.e)), rel=1e-12)


def test_theorem4_zero_content():
    m = IncreasingFunction(1.0)
    res = rhs_theorem4(1.0, m, from_points([0.2, 0.7], 1), 1.0, 2.0, 1.0, 0.5)
    assert res.value == 0.0 and res.zero_content


def test_theorem2_chain_identity():
    res = rhs_theorem2_swap(1.0, ID, Gauge.power(1.0, 1.0), normalize([[0, 1]], 1), 1.0, 2.0)
    assert res.chain_ok
    assert res.content == pytest.approx(1.0)


def test_chain_upper_half_fails_below_r():
    """For l < r the cover cost of [0, 1] under sqrt exceeds h(1)."""
    x = content_dp(Gauge.power(1.0, 0.5, 1.0), normalize([[0, 1]], 1), 0.3).value
    assert x == pytest.approx(3 * math.sqrt(0.3) + math.sqrt(0.1), abs=1e-12)
    assert x > 1.0


def test_lemma1_and_power_gauge_chain():
    for d in (0.2, 0.5, 0.63, 1.0):
        for b in (0.5, 1.0, 3.0):
            g = Gauge.power(b, d, 1.0)
            assert lemma1_monotone(g, 8.0)
            for M in np.linspace(1e-3, b, 7):
                left, right = power_gauge_chain(float(M), b, 2.0, d)
                assert left <= right + 1e-12 * abs(right)
    for d in np.linspace(0.01, 1.0, 100):
        assert normalization_constant(d) >= 0.25
    assert normalization_constant(1.0) == pytest.approx(1.0, abs=1e-15)


def test_sharpness_cantor():
    d = math.log(2) / math.log(3)
    from fractal_nevanlinna.intervals import cantor_prefractal
    rep = frostman_sharpness(Gauge.power(1.0, d, 1.0), cantor_prefractal(6, 1 / 3), 1.0, 2.0, 6, 3)
    assert rep.holds
    assert 1.0 - 1e-9 <= rep.A <= 1.0 + 1e-4


def test_sharpness_random_union():
    rep = frostman_sharpness(Gauge.power(1.0, 0.5, 1.0), normalize([[0.1, 0.2], [0.5, 0.8]], 1), 1.0, 2.0, 12)
    assert rep.holds
    assert rep.A >= 1.0 - 1e-9


def test_rhs_decreases_in_R_at_fixed_T():
    f_values = [rhs_main(1.0, 1.0, R, measure_factors(ID, R)) for R in (1.5, 2.0, 3.0)]
    # 6R/(R - r) falls faster than the log factor grows near r
    assert f_values[0] > f_values[1]


def test_evaluate_case_statuses():
    rng = np.random.default_rng(0)
    u = random_log_ratio(rng, 2.0)
    case = CaseInputs(ID, normalize([[0, 1]], 1), Gauge.power(1.0, 1.0), (1.0, 1.0))
    reps = evaluate_case("id", u, case, 2.0, convention=OUTER)
    assert len(reps) == 3
    for rep in reps:
        assert rep.passed
        assert set(bounds.VARIANTS) <= set(rep.status)
    jump_case = CaseInputs(IncreasingFunction.single_jump(0.5, 1.0))
    rep = evaluate_case("jump", u, jump_case, 2.0, (1.0,), (bounds.MAIN_MAX,))[0]
    assert rep.status[bounds.MAIN_MAX] == "skipped"
    assert "Dini" in rep.notes[bounds.MAIN_MAX]
