"""Brute-force ground truth: eigenvalues, interval sampling, enclosure checks.

The eigensolver is self-contained (balancing, Hessenberg reduction and
Francis double-shift QR, compiled with numba).  Tests cross-check it
against LAPACK and against characteristic-polynomial roots.

Randomness comes from numpy's PCG64 bit generator seeded with a plain
integer, so a seed reproduces the same samples on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _hqr
from .matcore import IntervalMatrix, as_matrix

__all__ = [
    "ConvergenceError",
    "Spectrum",
    "eigenvalues",
    "max_real_part",
    "rng",
    "sample_interval",
    "EnclosureReport",
    "enclosure_check",
]

SIZE_CAP = 2048
RESIDUAL_CAP = 64


class ConvergenceError(ArithmeticError):
    """QR iteration did not converge.

    ``partial`` holds the eigenvalues that did converge; they must not be
    used as a spectrum.
    """

    def __init__(self, msg, partial):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a real matrix.

    ``residual`` is the largest backward error ``sigma_min(Q - lambda I)``
    over the computed eigenvalues when ``residual_kind == 'backward'``.
    For matrices above ``RESIDUAL_CAP`` that costs an SVD per eigenvalue,
    so the cheaper trace defect ``|sum(lambda) - tr(Q)|`` is reported
    instead (``residual_kind == 'trace'``).
    """

    values: np.ndarray
    residual: float
    residual_kind: str = "backward"

    @property
    def max_real(self) -> float:
        return float(np.max(self.values.real))

    @property
    def min_real(self) -> float:
        return float(np.min(self.values.real))

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.values.imag)))

    def trusted(self, scale) -> bool:
        """Residual gate used before a spectrum is taken as ground truth."""
        return self.residual <= 1e-8 * max(1.0, scale)


def _pair_conjugates(values):
    """Sort and force exact conjugate closure."""
    values = np.asarray(values, dtype=complex)
    real = values[values.imag == 0]
    upper = values[values.imag > 0]
    upper = upper[np.lexsort((upper.imag, upper.real))]
    paired = np.concatenate([upper, upper.conj()])
    out = np.concatenate([np.sort(real.real).astype(complex), paired])
    return out[np.lexsort((out.imag, out.real))]


def eigenvalues(q, residual=True, max_sweeps=30) -> Spectrum:
    """All eigenvalues of a dense real matrix.

    Parameters
    ----------
    q : array_like or RealMatrix
    residual : bool
        Compute the a-posteriori residual (see :class:`Spectrum`).
    max_sweeps : int
        QR sweeps allowed per eigenvalue before giving up.

    Raises
    ------
    ConvergenceError
        With the converged part of the spectrum attached.
    """
    a = as_matrix(q)
    n = a.shape[0]
    if n > SIZE_CAP:
        raise ValueError(f"matrix size {n} exceeds the oracle cap {SIZE_CAP}")
    wr, wi, status = _hqr.eigvals_dense(np.ascontiguousarray(a), max_sweeps)
    if status >= 0:
        partial = wr[status + 1 :] + 1j * wi[status + 1 :]
        raise ConvergenceError(f"QR iteration stalled at row {status} of {n}", partial)
    # the 2x2 blocks produce conjugates as (mean + i b, mean - i b); keep
    # only positive imaginary parts as representatives
    values = _pair_conjugates(wr + 1j * wi)
    if not residual:
        res, kind = float("nan"), "none"
    elif n <= RESIDUAL_CAP:
        res, kind = _backward_error(a, values), "backward"
    else:
        res, kind = float(abs(values.sum().real - np.trace(a))), "trace"
    values.setflags(write=False)
    return Spectrum(values, res, kind)


def _backward_error(a, values):
    n = a.shape[0]
    eye = np.eye(n)
    worst = 0.0
    for lam in np.unique(values):
        s = np.linalg.svd(a - lam * eye, compute_uv=False)
        worst = max(worst, float(s[-1]))
    return worst


def max_real_part(q) -> float:
    """Largest real part of the spectrum (no residual computed)."""
    return eigenvalues(q, residual=False).max_real


def rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def sample_interval(m: IntervalMatrix, seed, count, law="uniform"):
    """Draw realizations of an interval matrix.

    ``uniform`` draws every perturbation uniformly from its interval;
    ``vertex`` picks one endpoint of each interval by a fair coin.
    Returns an array of shape ``(count, n, n)``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    g = rng(seed)
    n = m.n
    lo_off = -m.offdiag_mag
    hi_off = m.offdiag_mag.copy()
    lo = lo_off.copy()
    hi = hi_off.copy()
    np.fill_diagonal(lo, m.diag_lo)
    np.fill_diagonal(hi, m.diag_hi)
    if law == "uniform":
        u = g.random((count, n, n))
    elif law == "vertex":
        u = g.integers(0, 2, size=(count, n, n)).astype(float)
    else:
        raise ValueError(f"unknown sampling law {law!r}")
    return m.nominal + lo + u * (hi - lo)


@dataclass
class EnclosureReport:
    """Outcome of checking sampled spectra against a region.

    ``max_distance`` is the largest signed distance of a tested eigenvalue
    outside the region (``<= 0`` means everything was enclosed).
    """

    tested: int = 0
    violations: list = field(default_factory=list)
    max_distance: float = -np.inf
    tolerance: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "tested": self.tested,
            "violations": [
                {"sample": int(k), "re": float(z.real), "im": float(z.imag), "distance": float(dist)}
                for k, z, dist in self.violations
            ],
            "max_distance": float(self.max_distance),
            "tolerance": self.tolerance,
        }


def enclosure_check(m: IntervalMatrix, region, seed, count, law="uniform", samples=None) -> EnclosureReport:
    """Verify that every sampled eigenvalue lies in ``region``.

    An eigenvalue counts as a violation only if it sits farther outside
    than its own floating-point uncertainty (``1e-9 * (1 + ||Q||_1)``).
    """
    if samples is None:
        samples = sample_interval(m, seed, count, law)
    report = EnclosureReport()
    for k, q in enumerate(samples):
        spec = eigenvalues(q)
        tol = 1e-9 * (1.0 + np.abs(q).sum(axis=0).max()) + spec.residual
        report.tolerance = max(report.tolerance, tol)
        for z in spec.values:
            dist = region.distance(z)
            report.tested += 1
            report.max_distance = max(report.max_distance, dist)
            if dist > tol:
                report.violations.append((k, z, dist))
    return report
