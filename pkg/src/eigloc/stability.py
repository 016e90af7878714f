"""Stability certificates for interval and time-varying linear systems.

Two routes are offered.  ``direct`` bounds the eigenvalues of the system
matrix itself and needs it to be (scalably) diagonally dominant.
``demidovich`` bounds the eigenvalues of ``A(t) + A(t)^T`` instead; a
negative bound ``sigma`` certifies exponential decay of ``|x(t)|`` for
*every* time variation inside the interval model, with the explicit
envelope::

    |x(t)| <= 2 F f / |sigma| + C exp(sigma t / 2),
    C = max(0, |x(0)| - 2 F f / |sigma|)

where ``F`` bounds ``||F(t)||`` and ``f`` bounds ``|f(t)|``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import OptimizerBudget, interval_bounds, optimize_scaling
from .matcore import IntervalMatrix, Scaling, symmetrize

__all__ = [
    "CertificateUnavailable",
    "LtvSystem",
    "DecayEnvelope",
    "Certificate",
    "network_closed_loop",
    "demidovich_sigma",
    "decay_envelope",
    "certify",
]


class CertificateUnavailable(ValueError):
    """The bound is not negative, so no decay envelope exists."""


@dataclass(frozen=True)
class LtvSystem:
    """``dx/dt = A(t) x + F(t) f(t)`` with ``A(t)`` inside an interval model."""

    A: IntervalMatrix
    F_bar: float = 0.0
    f_bar: float = 0.0

    def __post_init__(self):
        if self.F_bar < 0 or self.f_bar < 0:
            raise ValueError("F_bar and f_bar must be nonnegative")


@dataclass(frozen=True)
class DecayEnvelope:
    sigma: float
    ultimate: float
    c0: float

    def __call__(self, t):
        return self.ultimate + self.c0 * np.exp(0.5 * self.sigma * np.asarray(t, dtype=float))

    def to_dict(self):
        return {"sigma": self.sigma, "ultimate": self.ultimate, "c0": self.c0}


def network_closed_loop(n, q, m) -> IntervalMatrix:
    """Closed loop of ``n`` scalar agents under ``u_i = -q x_i``.

    ``m`` bounds the unknown couplings ``|q_ij|`` (scalar or ``n x n``);
    its diagonal becomes the symmetric interval on the self-coupling.
    """
    if not q > 0:
        raise ValueError("coupling gain q must be positive")
    m = np.broadcast_to(np.asarray(m, dtype=float), (n, n)).copy()
    if np.any(m < 0):
        raise ValueError("coupling bounds must be nonnegative")
    diag = np.diag(m).copy()
    np.fill_diagonal(m, 0.0)
    return IntervalMatrix(-q * np.eye(n), -diag, diag, m)


def _matrix_of(sys):
    return sys.A if isinstance(sys, LtvSystem) else sys


def demidovich_sigma(sys, scaling=None, use_alpha=False) -> float:
    """Upper bound on ``lambda_max(A(t) + A(t)^T)`` over the whole model."""
    return interval_bounds(symmetrize(_matrix_of(sys)), scaling, use_alpha).sigma_max


def decay_envelope(sigma, F_bar, f_bar, x0_norm) -> DecayEnvelope:
    if not sigma < 0:
        raise CertificateUnavailable(f"sigma = {sigma} is not negative; no decay envelope")
    ultimate = 2.0 * F_bar * f_bar / abs(sigma)
    return DecayEnvelope(float(sigma), float(ultimate), float(max(0.0, x0_norm - ultimate)))


@dataclass(frozen=True)
class Certificate:
    """Outcome of :func:`certify`.  ``verdict`` is never 'unstable'."""

    verdict: str
    sigma: float
    variant: str
    strategy: str
    scaling: Scaling | None = None
    envelope: DecayEnvelope | None = None

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "sigma": self.sigma,
            "variant": self.variant,
            "strategy": self.strategy,
            "scaling": None if self.scaling is None else self.scaling.to_dict(),
            "envelope": None if self.envelope is None else self.envelope.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        sc = d.get("scaling")
        env = d.get("envelope")
        return cls(
            d["verdict"],
            float(d["sigma"]),
            d["variant"],
            d["strategy"],
            None if sc is None else Scaling(sc["d"], sc["alpha"]),
            None if env is None else DecayEnvelope(env["sigma"], env["ultimate"], env["c0"]),
        )


def certify(m, strategy="demidovich", budget=None, F_bar=0.0, f_bar=0.0, x0_norm=None, variants=None) -> Certificate:
    """Try every bound variant and keep the smallest upper bound.

    Parameters
    ----------
    m : IntervalMatrix or LtvSystem
    strategy : {'direct', 'demidovich'}
    budget : OptimizerBudget, optional
    F_bar, f_bar, x0_norm : float
        Used to attach a decay envelope when the Demidovich route succeeds.
        ``LtvSystem`` inputs supply ``F_bar``/``f_bar`` themselves.
    variants : iterable of str, optional
        Subset of ``('plain', 'scaled', 'alpha', 'scaled_alpha')``.
    """
    if isinstance(m, LtvSystem):
        F_bar, f_bar, m = m.F_bar, m.f_bar, m.A
    if strategy == "direct":
        target = m
    elif strategy == "demidovich":
        target = symmetrize(m)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    budget = budget or OptimizerBudget()
    variants = tuple(variants or ("plain", "scaled", "alpha", "scaled_alpha"))
    best = None
    for variant in variants:
        if variant == "plain":
            rep = interval_bounds(target)
            cand = (rep.sigma_max, variant, None)
        else:
            s, rep = optimize_scaling(target, variant, "max_bound", budget)
            cand = (rep.sigma_max, variant, s)
        if best is None or cand[0] < best[0]:
            best = cand
    sigma, variant, scaling = best
    verdict = "stable" if sigma < 0 else "inconclusive"
    envelope = None
    if verdict == "stable" and strategy == "demidovich" and x0_norm is not None:
        envelope = decay_envelope(sigma, F_bar, f_bar, x0_norm)
    return Certificate(verdict, float(sigma), variant, strategy, scaling, envelope)
