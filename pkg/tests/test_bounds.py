import numpy as np
import pytest

from eigloc.bounds import (
    OptimizerBudget,
    all_variants,
    gershgorin_bounds,
    interval_bounds,
    optimize_scaling,
    ostrowski_bounds,
)
from eigloc.matcore import IntervalMatrix, Scaling
from eigloc.oracle import eigenvalues

from conftest import Q_REAL, A_LTV, random_interval


def test_plain_small_matrix():
    rep = gershgorin_bounds(Q_REAL)
    assert (rep.sigma_min, rep.sigma_max) == (-3.5, 0.5)


def test_scaled_symmetric_part_ltv_nominal():
    rep = gershgorin_bounds(A_LTV + A_LTV.T, Scaling([1.0, 0.711]))
    assert rep.sigma_max == pytest.approx(-1.6445, abs=1e-12)


def test_diagonal_exact():
    rep = gershgorin_bounds(np.diag([-1.0, -2.0]))
    assert (rep.sigma_min, rep.sigma_max) == (-2.0, -1.0)
    s, rep = optimize_scaling(np.diag([-1.0, -2.0]), "scaled_alpha", "max_bound")
    assert rep.sigma_max == -1.0


def test_ostrowski_balance_alpha():
    # 5^a balances u^2 + 2u - 5 = 0
    u = -1 + np.sqrt(6)
    alpha = np.log(u) / np.log(5)
    assert alpha == pytest.approx(0.2306, abs=1e-4)
    rep = ostrowski_bounds(Q_REAL, Scaling([1.0, 1.0], alpha))
    assert rep.sigma_max == pytest.approx(-0.2753, abs=1e-4)


def test_ostrowski_endpoints_reduce_to_rows_and_cols():
    g = np.random.default_rng(0)
    q = g.normal(size=(4, 4))
    off = np.abs(q) - np.diag(np.abs(np.diag(q)))
    rows = np.diag(q) + off.sum(axis=1)
    cols = np.diag(q) + off.sum(axis=0)
    assert ostrowski_bounds(q, Scaling(np.ones(4), 1.0)).sigma_max == pytest.approx(rows.max())
    assert ostrowski_bounds(q, Scaling(np.ones(4), 0.0)).sigma_max == pytest.approx(cols.max())


def test_interval_bounds_examples(diag_model):
    assert interval_bounds(diag_model).sigma_max == pytest.approx(4.5)
    net = IntervalMatrix(-10 * np.eye(3), offdiag_mag=np.ones((3, 3)) - np.eye(3))
    assert interval_bounds(net).sigma_max == pytest.approx(-8.0)
    q = np.array([[1.0, 2.0], [-3.0, 0.5]])
    a, b = interval_bounds(IntervalMatrix.exact(q)), gershgorin_bounds(q)
    assert (a.sigma_min, a.sigma_max) == (b.sigma_min, b.sigma_max)


def test_interval_lower_bound_uses_lower_diag_end():
    # asymmetric diagonal interval: realization q11 = -1 + (-3) must be covered
    m = IntervalMatrix(np.array([[-1.0]]), [-3.0], [0.5])
    rep = interval_bounds(m)
    assert rep.sigma_min == -4.0 and rep.sigma_max == -0.5


def test_optimizer_small_matrix():
    s, rep = optimize_scaling(Q_REAL, "scaled", "max_bound")
    assert rep.sigma_max <= -0.26
    (smax, smin), rep = optimize_scaling(Q_REAL, "scaled_alpha", "both")
    assert rep.sigma_max == pytest.approx(-1.5 + np.sqrt(1.5), abs=1e-6)
    assert rep.sigma_min == pytest.approx(-1.5 - np.sqrt(1.5), abs=1e-6)


def test_transpose_invariance():
    g = np.random.default_rng(1)
    for _ in range(50):
        q = g.normal(size=(5, 5))
        a, b = gershgorin_bounds(q), gershgorin_bounds(q.T)
        assert (a.sigma_min, a.sigma_max) == pytest.approx((b.sigma_min, b.sigma_max))


def test_monotone_in_m():
    g = np.random.default_rng(2)
    for _ in range(50):
        m = random_interval(g, 4)
        bigger = IntervalMatrix(m.nominal, m.diag_lo, m.diag_hi, m.offdiag_mag * 1.5 + (1 - np.eye(4)) * 0.1)
        a, b = interval_bounds(m), interval_bounds(bigger)
        assert b.sigma_min <= a.sigma_min and b.sigma_max >= a.sigma_max


def test_refinement_and_soundness_random():
    g = np.random.default_rng(7)
    budget = OptimizerBudget()
    for _ in range(40):
        n = int(g.integers(1, 7))
        q = g.uniform(-5, 5, (n, n))
        lam = eigenvalues(q).values.real
        reps = all_variants(q, budget)
        plain = reps["plain"]
        for name, rep in reps.items():
            assert rep.sigma_min <= rep.sigma_max
            assert rep.sigma_min - 1e-9 <= lam.min(), name
            assert lam.max() <= rep.sigma_max + 1e-9, name
            assert rep.sigma_max <= plain.sigma_max + 1e-12
            assert rep.sigma_min >= plain.sigma_min - 1e-12


def test_objectives_may_use_different_scalings():
    (smax, smin), rep = optimize_scaling(Q_REAL, "alpha", "both")
    assert smax.alpha == pytest.approx(0.2306, abs=1e-3)
    assert smin.alpha == pytest.approx(0.7694, abs=1e-3)


def test_unknown_variant():
    with pytest.raises(ValueError):
        optimize_scaling(Q_REAL, "magic")
