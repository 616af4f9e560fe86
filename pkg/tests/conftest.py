import math

import numpy as np
import pytest

from slgl.core import GridFunction
from slgl.forward import forward


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba propagation kernels once, outside any timed test."""
    q = GridFunction(0.0, math.pi, np.zeros(11))
    forward(q, math.pi / 2, math.pi / 2, 1, m=11)


@pytest.fixture(scope="session")
def q_zero():
    return GridFunction(0.0, math.pi, np.zeros(2001))


@pytest.fixture(scope="session")
def q_cos2x():
    xs = np.linspace(0.0, math.pi, 2001)
    return GridFunction(0.0, math.pi, np.cos(2.0 * xs))


def q_const(c, m=2001):
    return GridFunction(0.0, math.pi, np.full(m, float(c)))


@pytest.fixture(scope="session")
def neumann_forward(q_zero):
    """q = 0, alpha = beta = pi/2, N = 30 on the default grid."""
    return forward(q_zero, math.pi / 2, math.pi / 2, 30)


@pytest.fixture(scope="session")
def cos2x_forward_neumann(q_cos2x):
    """q = cos 2x, alpha = beta = pi/2, N = 16."""
    return forward(q_cos2x, math.pi / 2, math.pi / 2, 16)


@pytest.fixture(scope="session")
def cos2x_forward_mixed(q_cos2x):
    """q = cos 2x, alpha = pi/3, beta = 2pi/3, N = 64 (negative ground state)."""
    return forward(q_cos2x, math.pi / 3, 2.0 * math.pi / 3, 64)
