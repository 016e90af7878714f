"""Scalar bounds on the real parts of eigenvalues.

Four variants are supported, for constant and interval matrices alike:

``plain``
    Row and column Gershgorin discs, ``min`` of the two maxima.
``scaled``
    The same after a diagonal similarity ``D^{-1} Q D``.
``alpha``
    Ostrowski discs with radius ``R_i^alpha C_i^(1-alpha)``.
``scaled_alpha``
    Ostrowski discs of ``D^{-1} Q D``.

A constant matrix is handled as a zero-width interval matrix, so the
formulas below are written once, in terms of the lowest / highest
attainable diagonal entry and the off-diagonal magnitude bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .matcore import IntervalMatrix, Scaling, as_matrix, col_radii, row_radii

__all__ = [
    "VARIANTS",
    "BoundsReport",
    "OptimizerBudget",
    "blend",
    "gershgorin_bounds",
    "ostrowski_bounds",
    "interval_bounds",
    "all_variants",
    "optimize_scaling",
]

VARIANTS = ("plain", "scaled", "alpha", "scaled_alpha")


@dataclass(frozen=True)
class BoundsReport:
    """Lower/upper bounds on ``Re(lambda)``.

    When the two bounds were obtained under different scalings (allowed,
    since each is valid on its own), ``scaling_used`` refers to
    ``sigma_max`` and ``scaling_lower`` to ``sigma_min``.
    """

    sigma_min: float
    sigma_max: float
    variant: str
    scaling_used: Scaling | None = None
    scaling_lower: Scaling | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.scaling_lower is None and self.scaling_used is not None:
            object.__setattr__(self, "scaling_lower", self.scaling_used)

    def to_dict(self):
        out = {"variant": self.variant, "sigma_min": self.sigma_min, "sigma_max": self.sigma_max}
        if self.scaling_used is not None:
            out["scaling_max"] = self.scaling_used.to_dict()
            out["scaling_min"] = self.scaling_lower.to_dict()
        return out


def blend(r, c, alpha):
    """Ostrowski radius ``r^alpha c^(1-alpha)`` with ``0^0 = 1``."""
    if alpha == 1.0:
        return np.asarray(r, dtype=float)
    if alpha == 0.0:
        return np.asarray(c, dtype=float)
    return np.power(r, alpha) * np.power(c, 1.0 - alpha)


def _as_interval(target):
    if isinstance(target, IntervalMatrix):
        return target
    return IntervalMatrix.exact(as_matrix(target))


def _evaluate(lo, hi, a, variant, scaling):
    """Raw ``(sigma_min, sigma_max)`` for one variant and one scaling."""
    if variant in ("plain", "alpha"):
        d = None
    else:
        d = scaling
    rr = row_radii(a, d)
    cc = col_radii(a, d)
    if variant in ("plain", "scaled"):
        smax = min(np.max(hi + rr), np.max(hi + cc))
        smin = max(np.min(lo - rr), np.min(lo - cc))
    else:
        alpha = 1.0 if scaling is None else scaling.alpha
        r = blend(rr, cc, alpha)
        smax = np.max(hi + r)
        smin = np.min(lo - r)
    return float(smin), float(smax)


def _variant_for(scaling, use_alpha):
    if use_alpha:
        if scaling is None or np.all(scaling.d == scaling.d[0]):
            return "alpha"
        return "scaled_alpha"
    return "plain" if scaling is None else "scaled"


def gershgorin_bounds(q, scaling=None) -> BoundsReport:
    """Row/column Gershgorin bounds on ``Re(lambda)`` of a constant matrix."""
    a = as_matrix(q)
    dg = np.diag(a)
    variant = "plain" if scaling is None else "scaled"
    smin, smax = _evaluate(dg, dg, _offdiag(a), variant, scaling)
    return BoundsReport(smin, smax, variant, scaling)


def ostrowski_bounds(q, scaling: Scaling) -> BoundsReport:
    """Bounds from the blended radius ``R_i^alpha C_i^(1-alpha)``."""
    a = as_matrix(q)
    dg = np.diag(a)
    variant = _variant_for(scaling, True)
    smin, smax = _evaluate(dg, dg, _offdiag(a), variant, scaling)
    return BoundsReport(smin, smax, variant, scaling)


def interval_bounds(m: IntervalMatrix, scaling=None, use_alpha=False) -> BoundsReport:
    """Bounds valid for every realization of an interval matrix.

    The upper bound uses the highest attainable diagonal entries, the lower
    bound the lowest ones.
    """
    if use_alpha and scaling is None:
        scaling = Scaling.identity(m.n, 0.5)
    variant = _variant_for(scaling, use_alpha)
    smin, smax = _evaluate(m.center_lo, m.center_hi, m.upper_abs(), variant, scaling)
    return BoundsReport(smin, smax, variant, scaling)


def _offdiag(a):
    out = np.abs(a)
    np.fill_diagonal(out, 0.0)
    return out


def all_variants(target, budget=None) -> dict:
    """Plain bounds plus optimized bounds for the three tunable variants."""
    m = _as_interval(target)
    out = {"plain": interval_bounds(m)}
    for variant in ("scaled", "alpha", "scaled_alpha"):
        _, report = optimize_scaling(m, variant, "both", budget)
        out[variant] = report
    return out


# ---------------------------------------------------------------------------
# optimizer over (D, alpha)


@dataclass(frozen=True)
class OptimizerBudget:
    """Iteration limits for :func:`optimize_scaling`.

    ``log_bound`` caps ``|log d_i|``; reducible matrices would otherwise
    drive the weights to infinity.
    """

    maxiter: int = 200
    tol: float = 1e-9
    log_bound: float = 25.0
    alpha_grid: int = 5


class _MinMax:
    """``min_x max_i (c_i + r_i(x, alpha))`` for one radius kind.

    ``x = log d`` with ``x_0 = 0`` fixed (only ratios matter).  ``kind`` is
    ``rows``, ``cols`` or ``blend``; for ``blend`` alpha may be an extra
    optimization variable.
    """

    def __init__(self, c, a, kind):
        self.c = np.asarray(c, dtype=float)
        self.a = a
        self.kind = kind
        self.n = a.shape[0]

    def _rc(self, x):
        e = np.exp(x)
        ei = np.exp(-x)
        # W[i, j] = a_ij * d_j / d_i
        w = self.a * np.outer(ei, e)
        return w, w.sum(axis=1), w.sum(axis=0)

    def radii(self, x, alpha):
        _, rr, cc = self._rc(x)
        if self.kind == "rows":
            return rr
        if self.kind == "cols":
            return cc
        return blend(rr, cc, alpha)

    def value(self, x, alpha=1.0):
        return float(np.max(self.c + self.radii(x, alpha)))

    def _radii_and_jac(self, x, alpha):
        """Radii and their Jacobians w.r.t. ``x`` and ``alpha``."""
        w, rr, cc = self._rc(x)
        # dR_i/dx_j = w_ij (j != i), dR_i/dx_i = -R_i
        dr = w - np.diag(rr)
        # C_i = sum_k w_ki ; dC_i/dx_k = -w_ki (k != i), dC_i/dx_i = C_i
        dc = -w.T + np.diag(cc)
        if self.kind == "rows":
            return rr, dr, np.zeros(self.n)
        if self.kind == "cols":
            return cc, dc, np.zeros(self.n)
        r = blend(rr, cc, alpha)
        pos = (rr > 0) & (cc > 0)
        jac = np.zeros((self.n, self.n))
        dal = np.zeros(self.n)
        if np.any(pos):
            lr = np.log(rr[pos])
            lc = np.log(cc[pos])
            jac[pos] = r[pos, None] * (alpha * dr[pos] / rr[pos, None] + (1 - alpha) * dc[pos] / cc[pos, None])
            dal[pos] = r[pos] * (lr - lc)
        return r, jac, dal

    def solve(self, x0, alpha0, free_alpha, budget):
        """Epigraph SLSQP; returns best ``(value, x, alpha)`` seen."""
        n = self.n
        nx = n - 1

        def unpack(z):
            x = np.concatenate(([0.0], z[:nx]))
            alpha = float(np.clip(z[nx], 0.0, 1.0)) if free_alpha else alpha0
            return x, alpha

        def cons(z):
            x, alpha = unpack(z)
            return z[-1] - self.c - self.radii(x, alpha)

        def cons_jac(z):
            x, alpha = unpack(z)
            _, jx, ja = self._radii_and_jac(x, alpha)
            cols = [-jx[:, 1:]]
            if free_alpha:
                cols.append(-ja[:, None])
            cols.append(np.ones((n, 1)))
            return np.hstack(cols)

        z0 = list(x0[1:])
        bounds = [(-budget.log_bound, budget.log_bound)] * nx
        if free_alpha:
            z0.append(alpha0)
            bounds.append((0.0, 1.0))
        x_start = np.asarray(x0, dtype=float)
        t0 = self.value(x_start, alpha0)
        z0.append(t0)
        bounds.append((None, None))
        z0 = np.array(z0)
        best = (t0, x_start, alpha0)
        if nx == 0 and not free_alpha:
            return best
        obj_grad = np.zeros(z0.size)
        obj_grad[-1] = 1.0
        try:
            res = minimize(
                lambda z: z[-1],
                z0,
                jac=lambda z: obj_grad,
                method="SLSQP",
                bounds=bounds,
                constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                options={"maxiter": budget.maxiter, "ftol": budget.tol},
            )
            x, alpha = unpack(res.x)
        except (ValueError, FloatingPointError):
            return best
        if not np.all(np.isfinite(x)):
            return best
        # the solver's t may be slightly infeasible; re-evaluate the true bound
        val = self.value(x, alpha)
        if val < best[0]:
            best = (val, x, alpha)
        return best


def _golden(f, lo, hi, iters=40):
    g = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _optimize_side(c, a, variant, budget):
    """Minimize ``max_i(c_i + radius_i)`` over the variant's free parameters.

    Returns ``(value, Scaling)``.
    """
    n = a.shape[0]
    zero = np.zeros(n)

    def scaling(x, alpha):
        return Scaling(np.exp(x), alpha)

    if variant == "scaled":
        # rows-only and cols-only are separate convex problems; the variant's
        # bound is the min of the two, so the better one wins.
        rows = _MinMax(c, a, "rows").solve(zero, 1.0, False, budget)
        cols = _MinMax(c, a, "cols").solve(zero, 1.0, False, budget)
        v, x, _ = min(rows, cols, key=lambda t: t[0])
        return v, scaling(x, 1.0)

    prob = _MinMax(c, a, "blend")
    if variant == "alpha":
        f = lambda al: prob.value(zero, al)
        cands = [(f(0.0), 0.0), (f(1.0), 1.0), _golden(f, 0.0, 1.0)[::-1]]
        v, al = min(cands)
        return v, scaling(zero, al)

    # scaled_alpha: start from the optimal row-only and col-only scalings
    # (alpha = 1 and 0 are special cases), plus interior alpha grid points.
    rows = _MinMax(c, a, "rows").solve(zero, 1.0, False, budget)
    cols = _MinMax(c, a, "cols").solve(zero, 1.0, False, budget)
    cands = [(rows[0], rows[1], 1.0), (cols[0], cols[1], 0.0)]
    starts = [(rows[1], 1.0), (cols[1], 0.0)]
    starts += [(zero, al) for al in np.linspace(0, 1, budget.alpha_grid + 2)[1:-1]]
    for x0, al0 in starts:
        cands.append(prob.solve(x0, al0, True, budget))
    v, x, al = min(cands, key=lambda t: t[0])
    return v, scaling(x, al)


def optimize_scaling(target, variant="scaled_alpha", objective="both", budget=None):
    """Search ``(d, alpha)`` for the tightest bounds of one variant.

    Parameters
    ----------
    target : RealMatrix, array_like or IntervalMatrix
    variant : {'scaled', 'alpha', 'scaled_alpha'}
    objective : {'max_bound', 'min_bound', 'both'}
        The upper and lower bounds are optimized independently and may end
        up with different scalings.
    budget : OptimizerBudget, optional

    Returns
    -------
    scaling : Scaling, or (Scaling, Scaling) for ``objective='both'``
        The latter is ``(scaling for sigma_max, scaling for sigma_min)``.
    report : BoundsReport
        Never looser than the plain Gershgorin bounds.
    """
    if variant not in ("scaled", "alpha", "scaled_alpha"):
        raise ValueError(f"variant must be scaled, alpha or scaled_alpha, got {variant!r}")
    if objective not in ("max_bound", "min_bound", "both"):
        raise ValueError(f"unknown objective {objective!r}")
    budget = budget or OptimizerBudget()
    m = _as_interval(target)
    lo, hi, a = m.center_lo, m.center_hi, m.upper_abs()
    n = m.n
    plain_min, plain_max = _evaluate(lo, hi, a, "plain", None)
    ident = Scaling.identity(n, 1.0)

    def best_max():
        v, s = _optimize_side(hi, a, variant, budget)
        if v > plain_max:
            # the plain bound is min(rows, cols) at d = 1, alpha in {1, 0}
            rows = np.max(hi + row_radii(a))
            s = Scaling.identity(n, 1.0 if rows <= plain_max else 0.0)
        return s

    def best_min():
        v, s = _optimize_side(-lo, a, variant, budget)
        if -v < plain_min:
            rows = np.min(lo - row_radii(a))
            s = Scaling.identity(n, 1.0 if rows >= plain_min else 0.0)
        return s

    s_max = best_max() if objective in ("max_bound", "both") else None
    s_min = best_min() if objective in ("min_bound", "both") else None
    s_max = s_max or s_min
    s_min = s_min or s_max
    smax = _evaluate(lo, hi, a, variant, s_max)[1]
    smin = _evaluate(lo, hi, a, variant, s_min)[0]
    report = BoundsReport(smin, smax, variant, s_max, s_min)
    if objective == "both":
        return (s_max, s_min), report
    return (s_max if objective == "max_bound" else s_min), report
