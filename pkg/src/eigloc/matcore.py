"""Matrix types, the interval-matrix model and off-diagonal radius sums.

Every bound and every localization region in this package is assembled
from two ingredients: the diagonal entries (or diagonal intervals) of a
matrix and the weighted absolute off-diagonal row / column sums.  The
latter live here.

Scaling convention
------------------
A positive diagonal scaling ``d`` stands for the similarity
``D^{-1} Q D`` with ``D = diag(d)``.  Its entries are ``(d_j / d_i) q_ij``,
so the row and column radii are::

    R_i^D = sum_{j != i} (d_j / d_i) |q_ij|
    C_j^D = sum_{i != j} (d_j / d_i) |q_ij|

Both radii therefore belong to the *same* similar matrix, which is what
keeps the blended (Ostrowski) radius ``R^alpha C^(1-alpha)`` sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MatrixError",
    "RealMatrix",
    "IntervalMatrix",
    "Scaling",
    "as_matrix",
    "row_radius",
    "col_radius",
    "hat_row_radius",
    "hat_col_radius",
    "row_radii",
    "col_radii",
    "offdiag_abs",
    "symmetrize",
]


class MatrixError(ValueError):
    """Raised for malformed matrix input (shape, finiteness, index)."""


def _check_square(a, name="matrix"):
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise MatrixError(f"{name} must be a non-empty square 2-D array, got shape {a.shape}")
    bad = np.argwhere(~np.isfinite(a))
    if bad.size:
        i, j = bad[0]
        raise MatrixError(f"{name} entry ({i}, {j}) is not finite: {a[i, j]!r}")
    return a


@dataclass(frozen=True)
class RealMatrix:
    """Dense square real matrix with finite entries."""

    entries: np.ndarray

    def __post_init__(self):
        a = _check_square(self.entries)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def T(self) -> "RealMatrix":
        return RealMatrix(self.entries.T)


def as_matrix(q) -> np.ndarray:
    """Return a validated float array for ``RealMatrix`` or array-like input."""
    if isinstance(q, RealMatrix):
        return q.entries
    return _check_square(q)


@dataclass(frozen=True)
class Scaling:
    """Positive diagonal weights ``d`` and blend exponent ``alpha``.

    ``alpha`` only matters for the blended (Ostrowski-type) radius; plain
    row/column radii ignore it.
    """

    d: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        d = np.array(self.d, dtype=float).ravel()
        if d.size == 0 or not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise MatrixError(f"scaling weights must be finite and strictly positive, got {d}")
        alpha = float(self.alpha)
        if not 0.0 <= alpha <= 1.0:
            raise MatrixError(f"alpha must lie in [0, 1], got {alpha}")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def identity(cls, n, alpha=1.0):
        return cls(np.ones(n), alpha)

    @property
    def n(self) -> int:
        return self.d.size

    def inverse(self) -> "Scaling":
        return Scaling(1.0 / self.d, self.alpha)

    def to_dict(self):
        return {"d": self.d.tolist(), "alpha": self.alpha}


@dataclass(frozen=True)
class IntervalMatrix:
    """Nominal matrix plus entrywise perturbation bounds.

    Realizations are ``Q0 + dQ`` with ``diag_lo[i] <= dQ[i, i] <= diag_hi[i]``
    and ``|dQ[i, j]| <= offdiag_mag[i, j]`` for ``i != j``.  Entries are not
    correlated with each other.
    """

    nominal: np.ndarray
    diag_lo: np.ndarray = None
    diag_hi: np.ndarray = None
    offdiag_mag: np.ndarray = None

    def __post_init__(self):
        q0 = as_matrix(self.nominal)
        n = q0.shape[0]
        lo = np.zeros(n) if self.diag_lo is None else np.array(self.diag_lo, dtype=float).ravel()
        hi = np.zeros(n) if self.diag_hi is None else np.array(self.diag_hi, dtype=float).ravel()
        m = np.zeros((n, n)) if self.offdiag_mag is None else np.array(self.offdiag_mag, dtype=float)
        if lo.shape != (n,) or hi.shape != (n,):
            raise MatrixError(f"diagonal interval bounds must have length {n}")
        if m.shape != (n, n):
            raise MatrixError(f"offdiag_mag must have shape {(n, n)}, got {m.shape}")
        for name, arr in (("diag_lo", lo), ("diag_hi", hi), ("offdiag_mag", m)):
            bad = np.argwhere(~np.isfinite(arr))
            if bad.size:
                raise MatrixError(f"{name} entry {tuple(bad[0])} is not finite")
        if np.any(lo > hi):
            i = int(np.argmax(lo > hi))
            raise MatrixError(f"diag_lo[{i}] = {lo[i]} exceeds diag_hi[{i}] = {hi[i]}")
        if np.any(np.diag(m) != 0):
            i = int(np.argmax(np.diag(m) != 0))
            raise MatrixError(f"offdiag_mag[{i}, {i}] must be 0 (diagonal uncertainty goes in diag_lo/diag_hi)")
        if np.any(m < 0):
            i, j = np.argwhere(m < 0)[0]
            raise MatrixError(f"offdiag_mag[{i}, {j}] is negative")
        q0 = q0.copy()
        for arr in (q0, lo, hi, m):
            arr.setflags(write=False)
        object.__setattr__(self, "nominal", q0)
        object.__setattr__(self, "diag_lo", lo)
        object.__setattr__(self, "diag_hi", hi)
        object.__setattr__(self, "offdiag_mag", m)

    @classmethod
    def exact(cls, q):
        """Degenerate (zero-width) interval matrix around ``q``."""
        return cls(as_matrix(q))

    @property
    def n(self) -> int:
        return self.nominal.shape[0]

    @property
    def center_lo(self) -> np.ndarray:
        """Lowest attainable diagonal entries ``q0_ii + diag_lo_i``."""
        return np.diag(self.nominal) + self.diag_lo

    @property
    def center_hi(self) -> np.ndarray:
        return np.diag(self.nominal) + self.diag_hi

    @property
    def is_exact(self) -> bool:
        return not (np.any(self.diag_lo) or np.any(self.diag_hi) or np.any(self.offdiag_mag))

    def upper_abs(self) -> np.ndarray:
        """Entrywise bound ``|q0_ij| + m_ij`` on off-diagonal magnitudes (zero diagonal)."""
        a = np.abs(self.nominal) + self.offdiag_mag
        np.fill_diagonal(a, 0.0)
        return a

    def contains_matrix(self, q, tol=0.0) -> bool:
        q = as_matrix(q)
        dq = q - self.nominal
        dd = np.diag(dq)
        off = dq.copy()
        np.fill_diagonal(off, 0.0)
        return bool(
            np.all(dd >= self.diag_lo - tol)
            and np.all(dd <= self.diag_hi + tol)
            and np.all(np.abs(off) <= self.offdiag_mag + tol)
        )


def offdiag_abs(q) -> np.ndarray:
    """``|q_ij|`` with the diagonal zeroed."""
    a = np.abs(as_matrix(q))
    np.fill_diagonal(a, 0.0)
    return a


def _weights(n, scaling):
    if scaling is None:
        return None
    d = scaling.d if isinstance(scaling, Scaling) else np.asarray(scaling, dtype=float)
    if d.shape != (n,):
        raise MatrixError(f"scaling has {d.size} weights for an {n}x{n} matrix")
    return d


def row_radii(a, scaling=None) -> np.ndarray:
    """All weighted row radii of a nonnegative off-diagonal magnitude matrix ``a``."""
    d = _weights(a.shape[0], scaling)
    if d is None:
        return a.sum(axis=1)
    return (a @ d) / d


def col_radii(a, scaling=None) -> np.ndarray:
    """All weighted column radii of ``a`` (columns of ``D^{-1} A D``)."""
    d = _weights(a.shape[0], scaling)
    if d is None:
        return a.sum(axis=0)
    return d * ((1.0 / d) @ a)


def _index(i, n):
    if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
        raise MatrixError(f"index {i!r} out of range for n={n} (indices are 0-based)")
    return int(i)


def row_radius(q, i, scaling=None) -> float:
    """Off-diagonal absolute row sum of row ``i`` (0-based), optionally D-weighted."""
    a = offdiag_abs(q)
    i = _index(i, a.shape[0])
    return float(row_radii(a, scaling)[i])


def col_radius(q, j, scaling=None) -> float:
    a = offdiag_abs(q)
    j = _index(j, a.shape[0])
    return float(col_radii(a, scaling)[j])


def hat_row_radius(m: IntervalMatrix, i, scaling=None) -> float:
    """Row radius bound valid for every realization of ``m``."""
    i = _index(i, m.n)
    return float(row_radii(m.upper_abs(), scaling)[i])


def hat_col_radius(m: IntervalMatrix, j, scaling=None) -> float:
    j = _index(j, m.n)
    return float(col_radii(m.upper_abs(), scaling)[j])


def symmetrize(m: IntervalMatrix) -> IntervalMatrix:
    """Interval enclosure of ``A + A^T`` over all realizations ``A`` of ``m``."""
    a0 = m.nominal
    mag = m.offdiag_mag + m.offdiag_mag.T
    return IntervalMatrix(a0 + a0.T, 2.0 * m.diag_lo, 2.0 * m.diag_hi, mag)
