import numpy as np
import pytest

from eigloc.matcore import IntervalMatrix, Scaling
from eigloc.oracle import eigenvalues, sample_interval
from eigloc.regions import (
    DiscFamily,
    Region,
    Stadium,
    build_families,
    build_interval_families,
    contains,
    imag_bound,
    optimized_region,
    oscillation_estimate,
    real_extent,
)

from conftest import Q_REAL, Q_COMPLEX, random_interval


def _members(fam):
    return sorted((s.center_lo, s.center_hi, s.radius) for s in fam.members)


def test_build_families_small_matrix():
    rows, cols = build_families(Q_REAL)
    assert _members(rows) == [(-2, -2, 0.5), (-1, -1, 2.5)]
    assert _members(cols) == [(-2, -2, 2.5), (-1, -1, 0.5)]
    (ost,) = build_families(Q_REAL, Scaling([1, 1], 1.0), "ostrowski")
    assert _members(ost) == _members(rows)
    (ost0,) = build_families(Q_REAL, Scaling([1, 1], 0.0), "ostrowski")
    assert _members(ost0) == _members(cols)


def test_build_families_diagonal():
    fams = build_families(np.diag([1.0, -2.0]))
    assert all(s.radius == 0 for f in fams for s in f.members)
    r = Region(fams)
    assert r.contains(1.0) and r.contains(-2.0) and not r.contains(0.0)


def test_interval_families_diag_model(diag_model):
    (rows,) = build_interval_families(diag_model, None, "rows")
    assert _members(rows) == [(-5.5, 2.5, 3.0), (-2.0, 0.0, 2.0)]
    (ost,) = build_interval_families(diag_model, Scaling([1, 1], 0.5), "ostrowski")
    assert ost.members[0].radius == pytest.approx(np.sqrt(6))
    rows0, _ = build_interval_families(IntervalMatrix.exact(Q_REAL))
    assert _members(rows0) == _members(build_families(Q_REAL)[0])


def test_stadium_validation():
    with pytest.raises(ValueError):
        Stadium(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Stadium(0.0, 1.0, -1.0)


def test_contains_examples(diag_model):
    r = Region(build_families(Q_COMPLEX))
    assert contains(r, -1.5 + 1j)
    assert not contains(r, 10.0)
    r2 = Region(build_interval_families(diag_model))
    assert contains(r2, -1.0) and contains(r2, -1.5)
    assert not contains(r2, 10 + 0j)


def test_extent_and_imag_examples():
    r = Region(build_families(Q_REAL))
    assert real_extent(r) == (-3.5, 0.5)
    assert imag_bound(r) == pytest.approx(np.sqrt(6), abs=1e-12)
    d = Region([DiscFamily([Stadium.disc(2.0, 3.0)])])
    assert real_extent(d) == (-1.0, 5.0)
    assert imag_bound(d) == 3.0
    empty = Region([DiscFamily([Stadium.disc(0, 1)]), DiscFamily([Stadium.disc(3, 1)])])
    assert real_extent(empty) is None
    assert imag_bound(empty) == 0.0


def test_resolution_validated():
    with pytest.raises(ValueError):
        real_extent(Region(build_families(Q_REAL)), 0.0)


def test_oscillation_estimate():
    # two real discs -> imag bound equals the radius; a zero-radius region gives mu = 0
    pt = Region([DiscFamily([Stadium.disc(-2.0, 0.0)])])
    assert oscillation_estimate(pt) == (0.0, 0.0)
    assert oscillation_estimate(Region(build_families(Q_REAL))) is None
    mu = 1.2 / 0.73
    assert mu == pytest.approx(1.6438, abs=1e-4)
    assert np.exp(-np.pi / mu) == pytest.approx(0.1479, abs=1e-4)
    r = Region([DiscFamily([Stadium.disc(-2.0, 1.0)])])
    m, ov = oscillation_estimate(r)
    assert m == pytest.approx(1.0) and ov == pytest.approx(np.exp(-np.pi))


def _scan_extent(region, lo, hi, k=20001):
    xs = np.linspace(lo, hi, k)
    h = region.half_height(xs)
    inside = xs[h >= 0]
    return (inside.min(), inside.max(), h.max()) if inside.size else None


def test_exact_queries_agree_with_dense_scan():
    g = np.random.default_rng(0)
    for trial in range(40):
        m = random_interval(g, int(g.integers(1, 5)), scale=3)
        s = Scaling(g.uniform(0.3, 3, m.n), g.uniform())
        region = Region(build_interval_families(m)) & Region(build_interval_families(m, s, "ostrowski"))
        ext = real_extent(region)
        scan = _scan_extent(region, -30, 30)
        if ext is None:
            assert scan is None or scan[2] <= 1e-3
            continue
        assert ext[0] <= scan[0] + 1e-12 and scan[1] <= ext[1] + 1e-12
        assert ext[0] >= scan[0] - 0.01 and ext[1] <= scan[1] + 0.01
        ib = imag_bound(region)
        assert scan[2] <= ib + 1e-9
        assert ib <= scan[2] + 0.05


def test_monotone_under_intersection():
    g = np.random.default_rng(1)
    for _ in range(30):
        m = random_interval(g, 3)
        a = Region(build_interval_families(m))
        b = a & Region(build_interval_families(m, Scaling(g.uniform(0.3, 3, 3), g.uniform()), "ostrowski"))
        ea, eb = real_extent(a), real_extent(b)
        if eb is not None:
            assert ea[0] <= eb[0] and eb[1] <= ea[1]
        assert imag_bound(b) <= imag_bound(a) + 1e-12


def test_contains_consistent_with_extents():
    g = np.random.default_rng(2)
    m = random_interval(g, 3)
    r = Region(build_interval_families(m))
    lo, hi = real_extent(r)
    ib = imag_bound(r)
    for z in g.uniform(-15, 15, 2000) + 1j * g.uniform(-15, 15, 2000):
        if contains(r, z):
            assert lo - 1e-3 <= z.real <= hi + 1e-3 and abs(z.imag) <= ib + 1e-3


def test_enclosure_every_mode():
    g = np.random.default_rng(3)
    for trial in range(30):
        m = random_interval(g, int(g.integers(1, 6)))
        regions = [Region(build_interval_families(m, None, mode)) for mode in ("rows_cols", "rows", "cols")]
        s = Scaling(g.uniform(0.2, 5, m.n), g.uniform())
        regions.append(Region(build_interval_families(m, s, "ostrowski")))
        for q in sample_interval(m, trial, 30):
            spec = eigenvalues(q)
            tol = 1e-9 * (1 + np.abs(q).sum(axis=0).max())
            for z in spec.values:
                for r in regions:
                    assert r.contains(z, tol)


def test_optimized_region_small_matrix():
    region, (smax, smin) = optimized_region(Q_COMPLEX)
    lo, hi = real_extent(region)
    assert lo == pytest.approx(-1.5 - np.sqrt(1.5), abs=1e-6)
    assert hi == pytest.approx(-1.5 + np.sqrt(1.5), abs=1e-6)
    assert 1.0 <= imag_bound(region) <= 1.35
    for z in eigenvalues(Q_COMPLEX).values:
        assert region.contains(z, 1e-12)
