import numpy as np
import pytest

from eigloc import IntervalMatrix

# matrix exactly as printed for the first worked example (real spectrum)
Q_REAL = np.array([[-1.0, -2.5], [-0.5, -2.0]])
# sign-corrected variant with the stated spectrum -1.5 +/- i
Q_COMPLEX = np.array([[-1.0, -2.5], [0.5, -2.0]])
A_LTV = np.array([[-1.0, 3.0], [-2.5, -2.0]])


@pytest.fixture
def diag_model():
    return IntervalMatrix(np.diag([-1.0, -1.5]), [-1.0, -4.0], [1.0, 4.0], [[0.0, 2.0], [3.0, 0.0]])


@pytest.fixture
def ltv_model():
    return IntervalMatrix(A_LTV, [-0.1, -0.1], [0.1, 0.1], [[0.0, 0.1], [0.1, 0.0]])


def random_interval(g, n, scale=5.0):
    q0 = g.uniform(-scale, scale, (n, n))
    w = g.uniform(0, 1, n)
    c = g.uniform(-1, 1, n)
    m = g.uniform(0, 1, (n, n)) * (g.random((n, n)) < 0.7)
    np.fill_diagonal(m, 0.0)
    return IntervalMatrix(q0, c - w, c + w, m)
