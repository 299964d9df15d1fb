import math

import numpy as np
import pytest

from fractal_nevanlinna.errors import DomainError, SizeError
from fractal_nevanlinna.gauge import eval_gauge
from fractal_nevanlinna.increasing import (IncreasingFunction, dini_integral, eval_m, from_literal,
                                           interval_measure, modulus_of_continuity, stabilization_diameter,
                                           stieltjes_integral)

ID = IncreasingFunction.identity(1.0)
JUMP = IncreasingFunction.single_jump(0.5, 1.0)
CANTOR = IncreasingFunction.cantor_staircase(8)


def window_oracle(m, t, n=4001):
    """Largest increment over windows [c, c + t] with c on a uniform grid."""
    c = np.linspace(0.0, max(m.r - t, 0.0), n)
    return float(np.max(eval_m(m, c + t) - eval_m(m, c)))


def test_eval_examples():
    assert eval_m(ID, -0.5) == 0.0
    assert eval_m(ID, 2.0) == 1.0
    assert eval_m(CANTOR, 1 / 3) == 0.5


def test_interval_measure_examples():
    assert interval_measure(ID, 0.2, 0.5) == pytest.approx(0.3)
    assert interval_measure(JUMP, 0.4, 0.6) == 1.0
    assert interval_measure(CANTOR, 1 / 3, 2 / 3) == pytest.approx(0.0, abs=1e-15)
    assert interval_measure(JUMP, 0.5, 0.6, closed=True) == 1.0
    assert interval_measure(JUMP, 0.5, 0.6) == 0.0


def test_modulus_examples():
    assert modulus_of_continuity(ID, 0.25) == pytest.approx(0.25)
    assert modulus_of_continuity(JUMP, 1e-9) == 1.0
    assert modulus_of_continuity(JUMP, 0.0) == 0.0
    for k in range(7):
        assert modulus_of_continuity(CANTOR, 3.0 ** -k) == pytest.approx(2.0 ** -k, abs=1e-12)


@pytest.mark.parametrize("t", [0.01, 0.07, 0.2, 0.45, 0.8])
def test_modulus_dominates_window_grid(t):
    for m in (CANTOR, from_literal({"kind": "linear", "knots": [[0, 0], [0.3, 0.1], [0.6, 0.9], [1, 1]]})):
        exact = modulus_of_continuity(m, t)
        oracle = window_oracle(m, t)
        assert exact >= oracle - 1e-12
        assert exact == pytest.approx(oracle, abs=2e-3)


def test_stabilization_examples():
    assert stabilization_diameter(ID) == 1.0
    assert stabilization_diameter(JUMP) == 0.0
    assert stabilization_diameter(CANTOR) == pytest.approx(1.0, abs=1e-12)
    assert stabilization_diameter(IncreasingFunction(1.0)) == 0.0


def test_dini_examples():
    assert dini_integral(ID, 4.0).value == pytest.approx(1 + math.log(4), rel=1e-9)
    assert dini_integral(JUMP, 4.0).value == math.inf
    d = math.log(2) / math.log(3)
    value = dini_integral(IncreasingFunction.cantor_staircase(6), 4.0).value
    assert math.isfinite(value)
    assert value <= 2 / d + math.log(4)


def test_stieltjes_examples():
    for m in (ID, JUMP, CANTOR):
        assert stieltjes_integral(lambda t: np.ones_like(t), m).value == pytest.approx(m.total_variation)
    assert stieltjes_integral(lambda t: t, ID).value == pytest.approx(0.5)
    assert stieltjes_integral(lambda t: t, CANTOR).value == pytest.approx(0.5, abs=1e-9)
    assert stieltjes_integral(lambda t: t, JUMP).value == pytest.approx(0.5)


def test_construction_guards():
    with pytest.raises(DomainError):
        IncreasingFunction.from_knots([[0, 1], [1, 0]])
    with pytest.raises(SizeError):
        IncreasingFunction.cantor_staircase(21)


def test_support():
    m = from_literal({"kind": "linear", "knots": [[0, 0], [0.2, 0], [0.5, 1], [1, 1]]})
    assert m.support().components == [(0.2, 0.5)]
    assert JUMP.support().components == [(0.5, 0.5)]


def test_frostman_modulus_below_gauge(cantor_frostman, cantor_gauge):
    m = cantor_frostman.distribution
    t = np.linspace(0.0, 1.0, 501)
    assert np.all(modulus_of_continuity(m, t) <= eval_gauge(cantor_gauge, t) + 1e-12)


def test_modulus_subadditive_on_random_pairs():
    rng = np.random.default_rng(5)
    s, t = rng.uniform(0, 0.5, (2, 200))
    for m in (CANTOR, JUMP, ID):
        ws = modulus_of_continuity(m, s + t)
        assert np.all(ws <= modulus_of_continuity(m, s) + modulus_of_continuity(m, t) + 1e-12)
