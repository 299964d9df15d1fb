import math

import pytest

from fractal_nevanlinna.frostman import frostman_measure
from fractal_nevanlinna.gauge import Gauge
from fractal_nevanlinna.intervals import cantor_prefractal

CANTOR_DIM = math.log(2) / math.log(3)


@pytest.fixture(scope="session")
def cantor_gauge():
    return Gauge.power(1.0, CANTOR_DIM, 1.0)


@pytest.fixture(scope="session")
def cantor_set():
    return cantor_prefractal(8, 1 / 3)


@pytest.fixture(scope="session")
def cantor_frostman(cantor_gauge, cantor_set):
    return frostman_measure(cantor_gauge, cantor_set, net_base=3, depth=8)
