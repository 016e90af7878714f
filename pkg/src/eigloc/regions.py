"""Eigenvalue localization regions built from discs and e-circles.

A *stadium* (e-circle) is the union of equal-radius discs whose centers
sweep a real interval ``[center_lo, center_hi]``; an ordinary disc is the
degenerate case.  A :class:`DiscFamily` is a union of stadiums (one per
row or column), and a :class:`Region` is the intersection of several
families.  Every spectrum bound in this module is a query on a Region.

Because all centers lie on the real axis, the vertical slice of a region
at abscissa ``x`` is the symmetric segment ``[-H(x), H(x)]`` with::

    H(x) = min over families ( max over members h_m(x) )

where ``h_m`` is the half-height of stadium ``m`` above ``x``.  The real
extent and the imaginary bound are therefore computed exactly rather
than by scanning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import blend, optimize_scaling
from .matcore import IntervalMatrix, Scaling, as_matrix, col_radii, offdiag_abs, row_radii

__all__ = [
    "Stadium",
    "DiscFamily",
    "Region",
    "build_families",
    "build_interval_families",
    "contains",
    "real_extent",
    "imag_bound",
    "oscillation_estimate",
    "optimized_region",
]

MODES = ("rows_cols", "rows", "cols", "ostrowski")


@dataclass(frozen=True)
class Stadium:
    center_lo: float
    center_hi: float
    radius: float

    def __post_init__(self):
        if not self.center_lo <= self.center_hi:
            raise ValueError(f"stadium center interval [{self.center_lo}, {self.center_hi}] is reversed")
        if not self.radius >= 0:
            raise ValueError(f"stadium radius must be nonnegative, got {self.radius}")

    @classmethod
    def disc(cls, center, radius):
        return cls(float(center), float(center), float(radius))

    @property
    def is_disc(self) -> bool:
        return self.center_lo == self.center_hi

    def excess(self, z) -> float:
        """Distance from ``z`` to the center segment minus the radius."""
        x = min(max(z.real, self.center_lo), self.center_hi)
        return float(abs(complex(z) - x) - self.radius)


@dataclass(frozen=True)
class DiscFamily:
    members: tuple
    label: str = "rows"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a disc family needs at least one member")

    def arrays(self):
        lo = np.array([s.center_lo for s in self.members])
        hi = np.array([s.center_hi for s in self.members])
        r = np.array([s.radius for s in self.members])
        return lo, hi, r

    def excess(self, z) -> float:
        return min(s.excess(z) for s in self.members)


@dataclass(frozen=True)
class Region:
    """Intersection of disc families (union within each family)."""

    families: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))

    def __and__(self, other: "Region") -> "Region":
        return Region(self.families + other.families)

    def distance(self, z) -> float:
        """Signed outside measure: ``<= 0`` exactly when ``z`` is in the region.

        For a single stadium this is the Euclidean distance to its boundary;
        in general it is the worst family's best member excess.
        """
        if not self.families:
            return -np.inf
        return max(f.excess(z) for f in self.families)

    def contains(self, z, tol=0.0) -> bool:
        return self.distance(z) <= tol

    # -- exact slice geometry ------------------------------------------------

    def real_support(self):
        """Disjoint sorted intervals forming the region's projection on the real axis."""
        support = None
        for fam in self.families:
            lo, hi, r = fam.arrays()
            cover = _union(list(zip(lo - r, hi + r)))
            support = cover if support is None else _intersect(support, cover)
            if not support:
                return []
        return support or []

    def half_height(self, x):
        """``H(x)``, the half-height of the vertical slice (``-inf`` off the region)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.full(x.shape, np.inf)
        for fam in self.families:
            lo, hi, r = fam.arrays()
            gap = np.maximum(lo[:, None] - x[None, :], 0.0) + np.maximum(x[None, :] - hi[:, None], 0.0)
            h2 = r[:, None] ** 2 - gap**2
            h = np.where(h2 >= 0, np.sqrt(np.maximum(h2, 0.0)), -np.inf)
            out = np.minimum(out, h.max(axis=0))
        return out

    def _candidates(self):
        members = [s for f in self.families for s in f.members]
        lo = np.array([s.center_lo for s in members])
        hi = np.array([s.center_hi for s in members])
        r = np.array([s.radius for s in members])
        pts = [lo, hi]
        # arc/arc crossings: r1^2 - (x - c1)^2 = r2^2 - (x - c2)^2
        cs = np.concatenate([lo, hi])
        rs = np.concatenate([r, r])
        c1, c2 = np.meshgrid(cs, cs, indexing="ij")
        r1, r2 = np.meshgrid(rs, rs, indexing="ij")
        dc = c2 - c1
        ok = dc != 0
        x = 0.5 * (c1 + c2)[ok] + (r1**2 - r2**2)[ok] / (2.0 * dc[ok])
        pts.append(x)
        # plateau/arc crossings: r1 = sqrt(r2^2 - (x - c2)^2)
        q = r2**2 - r1**2
        ok = q >= 0
        root = np.sqrt(q[ok])
        pts += [c2[ok] + root, c2[ok] - root]
        for a, b in self.real_support():
            pts.append(np.array([a, b]))
        return np.unique(np.concatenate(pts))


def _union(intervals):
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _intersect(xs, ys):
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a = max(xs[i][0], ys[j][0])
        b = min(xs[i][1], ys[j][1])
        if a <= b:
            out.append((a, b))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


# ---------------------------------------------------------------------------
# construction


def _families_from(lo, hi, a, scaling, mode):
    d = None if scaling is None else scaling
    rr = row_radii(a, d)
    cc = col_radii(a, d)

    def family(radii, label):
        return DiscFamily(tuple(Stadium(float(l), float(h), float(r)) for l, h, r in zip(lo, hi, radii)), label)

    if mode == "rows_cols":
        return [family(rr, "rows"), family(cc, "cols")]
    if mode == "rows":
        return [family(rr, "rows")]
    if mode == "cols":
        return [family(cc, "cols")]
    if mode == "ostrowski":
        alpha = 1.0 if scaling is None else scaling.alpha
        return [family(blend(rr, cc, alpha), "ostrowski")]
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def build_families(q, scaling=None, mode="rows_cols"):
    """Gershgorin (``rows_cols``) or Ostrowski discs of a constant matrix."""
    a = as_matrix(q)
    dg = np.diag(a)
    return _families_from(dg, dg, offdiag_abs(a), scaling, mode)


def build_interval_families(m: IntervalMatrix, scaling=None, mode="rows_cols"):
    """e-circles enclosing the spectra of every realization of ``m``."""
    return _families_from(m.center_lo, m.center_hi, m.upper_abs(), scaling, mode)


# ---------------------------------------------------------------------------
# queries


def contains(region: Region, z, tol=0.0) -> bool:
    return region.contains(z, tol)


def _check_resolution(resolution):
    if not resolution > 0:
        raise ValueError(f"resolution must be positive, got {resolution}")


def real_extent(region: Region, resolution=1e-3):
    """Smallest real interval containing the region, or ``None`` if empty."""
    _check_resolution(resolution)
    support = region.real_support()
    if not support:
        return None
    return float(support[0][0]), float(support[-1][1])


def imag_bound(region: Region, resolution=1e-3) -> float:
    """Largest ``|Im z|`` over the region (0 for an empty region)."""
    _check_resolution(resolution)
    support = region.real_support()
    if not support:
        return 0.0
    xs = region._candidates()
    inside = np.zeros(xs.shape, dtype=bool)
    for a, b in support:
        inside |= (xs >= a) & (xs <= b)
    xs = xs[inside]
    if xs.size == 0:
        return 0.0
    return float(max(region.half_height(xs).max(), 0.0))


def oscillation_estimate(region: Region, resolution=1e-3):
    """Degree-of-oscillation bound and overshoot estimate.

    Returns ``(mu_hat, overshoot)`` with ``mu_hat = Im_hat / |sigma_max|`` and
    ``overshoot = exp(-pi / mu_hat)``, or ``None`` when the region reaches
    the closed right half-plane.
    """
    ext = real_extent(region, resolution)
    if ext is None or ext[1] >= 0:
        return None
    mu = imag_bound(region, resolution) / abs(ext[1])
    overshoot = float(np.exp(-np.pi / mu)) if mu > 0 else 0.0
    return mu, overshoot


def optimized_region(target, variant="scaled_alpha", sweep=16, budget=None, include_plain=True):
    """Intersect families over many scalings.

    The families for the optimal upper-bound and lower-bound scalings are
    joined by ``sweep`` intermediate scalings (geometric interpolation of
    ``d``, linear in ``alpha``).  Any positive scaling yields a valid
    family, so the intersection stays sound while shrinking the region in
    every direction, not only along the real axis.

    Returns ``(region, (scaling_max, scaling_min))``.
    """
    if isinstance(target, IntervalMatrix):
        build = lambda s, mode: build_interval_families(target, s, mode)
    else:
        q = as_matrix(target)
        build = lambda s, mode: build_families(q, s, mode)
    (s_max, s_min), _ = optimize_scaling(target, variant, "both", budget)
    mode = "rows_cols" if variant == "scaled" else "ostrowski"
    families = []
    if include_plain:
        families += build(None, "rows_cols")
    ld_max, ld_min = np.log(s_max.d), np.log(s_min.d)
    for t in np.linspace(0.0, 1.0, max(sweep, 2)):
        d = np.exp((1 - t) * ld_max + t * ld_min)
        alpha = (1 - t) * s_max.alpha + t * s_min.alpha
        families += build(Scaling(d, alpha), mode)
    return Region(families), (s_max, s_min)
