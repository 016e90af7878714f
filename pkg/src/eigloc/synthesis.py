"""State-feedback synthesis through elementwise-linear Lyapunov conditions.

For ``dx/dt = A x + B u + F f`` and ``u = K x`` with ``K = Y Q^{-1}``,
``V = x^T Q^{-1} x`` decays at rate ``alpha`` whenever::

    Psi = Q A^T + A Q + Y^T B^T + B Y + alpha Q + beta F F^T  < 0.

Instead of a semidefinite program the negativity of ``Psi`` and the
positivity of ``Q`` are certified by Gershgorin rows of the symmetric
matrices, which is linear in ``(Q, Y, beta)`` once the off-diagonal
entries of ``Psi`` are required to be nonnegative::

    (a) Psi_ij >= 0                               i < j
    (b) Psi_ii + sum_{j != i} Psi_ij <= -eps
    (c) -s_ij <= Q_ij <= s_ij                    i != j
    (d) Q_ii - sum_{j != i} s_ij >= eps
    (e) beta >= eps
    (f) Q_ii <= scale_cap

For uncertain ``A(t) = A0 + dA(t)``, ``|dA_ij| <= m_ij`` and
``B(t) = b(t) B0`` the same block (with ``beta Fbar^2 I`` for the
disturbance term) is imposed at every vertex of the parameter box.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .lp import LinearProgram, solve_feasibility
from .oracle import eigenvalues, rng

__all__ = [
    "SynthesisError",
    "SynthesisInfeasible",
    "VertexCapExceeded",
    "SynthesisProblem",
    "SynthesisResult",
    "VerificationReport",
    "build_constant_program",
    "build_vertex_program",
    "synthesize",
    "extract_gain",
    "verify_synthesis",
    "vertices",
]

DEFAULT_VERTEX_CAP = 8
# solver-side tightening of every inequality, absorbing recombination rounding
INNER_MARGIN = 1e-9


class SynthesisError(ArithmeticError):
    """The certificate cannot be turned into a gain (e.g. singular ``Q``)."""


class SynthesisInfeasible(Exception):
    """The feasibility program has no solution (phase-1 optimum > 0)."""

    def __init__(self, msg, phase1_value, farkas=None):
        super().__init__(msg)
        self.phase1_value = phase1_value
        self.farkas = farkas


class VertexCapExceeded(ValueError):
    pass


def _as2d(x, name):
    a = np.atleast_2d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


@dataclass
class SynthesisProblem:
    """Plant data for :func:`synthesize`.

    ``F`` (optional, ``n x p``) gives the exact disturbance matrix and
    enters as ``beta F F^T``; otherwise ``beta F_bar^2 I`` is used.
    """

    A0: np.ndarray
    B0: np.ndarray
    deltaA_mag: np.ndarray | None = None
    b_range: tuple = (1.0, 1.0)
    F_bar: float = 0.0
    alpha_rate: float = 0.5
    epsilon: float = 1e-3
    F: np.ndarray | None = None
    scale_cap: float = 100.0
    vertex_cap: int = DEFAULT_VERTEX_CAP

    def __post_init__(self):
        self.A0 = _as2d(self.A0, "A0")
        n = self.A0.shape[0]
        if self.A0.shape != (n, n):
            raise ValueError(f"A0 must be square, got {self.A0.shape}")
        self.B0 = np.asarray(self.B0, dtype=float)
        if self.B0.ndim == 1:
            self.B0 = self.B0[:, None]
        if self.B0.shape[0] != n:
            raise ValueError(f"B0 has {self.B0.shape[0]} rows, expected {n}")
        if self.deltaA_mag is None:
            self.deltaA_mag = np.zeros((n, n))
        self.deltaA_mag = _as2d(self.deltaA_mag, "deltaA_mag")
        if self.deltaA_mag.shape != (n, n):
            raise ValueError("deltaA_mag must match A0")
        if np.any(self.deltaA_mag < 0):
            raise ValueError("deltaA_mag must be nonnegative")
        lo, hi = map(float, self.b_range)
        if not lo <= hi:
            raise ValueError("b_range must satisfy lo <= hi")
        if not (lo > 0 or hi < 0):
            raise ValueError("b_range must be sign-definite")
        self.b_range = (lo, hi)
        if self.F is not None:
            self.F = np.asarray(self.F, dtype=float)
            if self.F.ndim == 1:
                self.F = self.F[:, None]
            if self.F.shape[0] != n:
                raise ValueError("F must have n rows")
        if not self.F_bar >= 0:
            raise ValueError("F_bar must be nonnegative")
        if not self.alpha_rate > 0:
            raise ValueError("alpha_rate must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.scale_cap > self.epsilon:
            raise ValueError("scale_cap must exceed epsilon")

    @property
    def n(self) -> int:
        return self.A0.shape[0]

    @property
    def m(self) -> int:
        return self.B0.shape[1]

    @property
    def disturbance_gram(self) -> np.ndarray:
        if self.F is not None:
            return self.F @ self.F.T
        return self.F_bar**2 * np.eye(self.n)

    @property
    def uncertain(self):
        """Indices ``(p, q)`` of uncertain entries of ``A``."""
        return [tuple(map(int, ix)) for ix in np.argwhere(self.deltaA_mag > 0)]

    def to_dict(self):
        return {
            "A0": self.A0.tolist(),
            "deltaA_mag": self.deltaA_mag.tolist(),
            "B0": self.B0.tolist(),
            "b_range": list(self.b_range),
            "F_bar": self.F_bar,
            "F": None if self.F is None else self.F.tolist(),
            "alpha_rate": self.alpha_rate,
            "epsilon": self.epsilon,
            "scale_cap": self.scale_cap,
            "vertex_cap": self.vertex_cap,
        }


# ---------------------------------------------------------------------------
# program construction


class _Layout:
    """Variable naming and the linear maps ``z -> Q, Y, beta``."""

    def __init__(self, n, m):
        self.n, self.m = n, m
        self.lp = LinearProgram()
        self.q = {}
        for i in range(n):
            for j in range(i, n):
                self.q[i, j] = self.q[j, i] = self.lp.add_variable(f"Q[{i},{j}]")
        self.y = {(k, j): self.lp.add_variable(f"Y[{k},{j}]") for k in range(m) for j in range(n)}
        self.beta = self.lp.add_variable("beta")
        self.s = {(i, j): self.lp.add_variable(f"s[{i},{j}]") for i in range(n) for j in range(n) if i != j}

    def unpack(self, z):
        n, m = self.n, self.m
        Q = np.empty((n, n))
        for (i, j), k in self.q.items():
            Q[i, j] = z[k]
        Y = np.empty((m, n))
        for (k, j), v in self.y.items():
            Y[k, j] = z[v]
        return Q, Y, float(z[self.beta])

    def basis_maps(self, fn):
        """Stack ``fn(Q, Y, beta)`` over unit vectors: shape ``(n, n, nvars)``."""
        nv = self.lp.n_vars
        out = np.zeros((self.n, self.n, nv))
        for k in range(nv):
            e = np.zeros(nv)
            e[k] = 1.0
            out[:, :, k] = fn(*self.unpack(e))
        return out


def _psi_pieces(layout, A0, B0, gram, alpha, uncertain):
    nominal = layout.basis_maps(lambda Q, Y, b: Q @ A0.T + A0 @ Q + alpha * Q + b * gram)
    h = layout.basis_maps(lambda Q, Y, b: Y.T @ B0.T + B0 @ Y)
    g = []
    for p, q in uncertain:
        e = np.zeros_like(A0)
        e[p, q] = 1.0
        g.append(layout.basis_maps(lambda Q, Y, b, e=e: Q @ e.T + e @ Q))
    return nominal, h, g


def _inner(rel, bound, coeff):
    """Threshold handed to the solver: ``INNER_MARGIN`` inside the stated one.

    Active rows then still hold after ``(Q, Y, beta)`` are recombined in
    floating point.  Rows with no coefficients are left alone.
    """
    if not np.any(coeff):
        return bound
    return bound + INNER_MARGIN if rel == ">=" else bound - INNER_MARGIN


def _psi_rows(phi, n, eps):
    """Rows (a) and (b) from a coefficient tensor of a symmetric block."""
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            rows.append((phi[i, j], ">=", 0.0, f"offdiag[{i},{j}]"))
    for i in range(n):
        rows.append((phi[i].sum(axis=0), "<=", -eps, f"rowsum[{i}]"))
    return rows


def _q_rows(layout, eps, cap):
    lp, n = layout.lp, layout.n
    for i in range(n):
        for j in range(n):
            if i != j:
                lp.add({layout.q[i, j]: 1.0, layout.s[i, j]: -1.0}, "<=", 0.0, f"abs_hi[{i},{j}]")
                lp.add({layout.q[i, j]: -1.0, layout.s[i, j]: -1.0}, "<=", 0.0, f"abs_lo[{i},{j}]")
    for i in range(n):
        coeffs = {layout.q[i, i]: 1.0}
        for j in range(n):
            if j != i:
                coeffs[layout.s[i, j]] = -1.0
        lp.add(coeffs, ">=", eps + INNER_MARGIN, f"q_dominance[{i}]")
    lp.add({layout.beta: 1.0}, ">=", eps + INNER_MARGIN, "beta")
    for i in range(n):
        lp.add({layout.q[i, i]: 1.0}, "<=", cap - INNER_MARGIN, f"q_cap[{i}]")


def build_constant_program(A, B, F, alpha_rate, eps=1e-3, scale_cap=100.0) -> LinearProgram:
    """Linear program for constant ``(A, B, F)``; see the module docstring."""
    A = _as2d(A, "A")
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"A must be square, got {A.shape}")
    B = np.asarray(B, dtype=float)
    B = B[:, None] if B.ndim == 1 else B
    F = np.asarray(F, dtype=float)
    F = F[:, None] if F.ndim == 1 else F
    if B.shape[0] != n or F.shape[0] != n:
        raise ValueError("B and F must have n rows")
    layout = _Layout(n, B.shape[1])
    nominal, h, _ = _psi_pieces(layout, A, B, F @ F.T, alpha_rate, [])
    for coeff, rel, bound, label in _psi_rows(nominal + h, n, eps):
        layout.lp.add(coeff, rel, _inner(rel, bound, coeff), label)
    _q_rows(layout, eps, scale_cap)
    layout.lp.layout = layout
    return layout.lp


def vertices(problem: SynthesisProblem):
    """All ``(dA, b)`` corners of the parameter box."""
    unc = problem.uncertain
    bs = sorted(set(problem.b_range))
    for signs in itertools.product((-1.0, 1.0), repeat=len(unc)):
        dA = np.zeros((problem.n, problem.n))
        for (p, q), s in zip(unc, signs):
            dA[p, q] = s * problem.deltaA_mag[p, q]
        for b in bs:
            yield dA, b


def build_vertex_program(problem: SynthesisProblem, per_entry=False) -> LinearProgram:
    """Program for the interval/time-varying plant.

    By default rows (a)-(b) are repeated at each of the ``2^k x |{b_lo, b_hi}|``
    vertices (``k`` uncertain entries, at most ``problem.vertex_cap``).
    With ``per_entry=True`` every row is instead written once per ``b``
    vertex with its worst case over ``dA``, ``row(N) +/- sum_k m_k t_k``
    and epigraph variables ``t_k >= |row(G_k)|``.  Each row is affine in
    ``dA``, so this describes the same feasible set without enumerating
    vertices.
    """
    P = problem
    unc = P.uncertain
    if not per_entry and len(unc) > P.vertex_cap:
        raise VertexCapExceeded(
            f"{len(unc)} uncertain entries give {2 ** len(unc)} vertices, above the cap of "
            f"2^{P.vertex_cap}; use the per-entry mode (per_entry=True / --per-entry)"
        )
    layout = _Layout(P.n, P.m)
    lp = layout.lp
    nominal, h, g = _psi_pieces(layout, P.A0, P.B0, P.disturbance_gram, P.alpha_rate, unc)
    if per_entry:
        mags = [P.deltaA_mag[p, q] for p, q in unc]
        base_rows = _psi_rows(nominal, P.n, P.epsilon)
        h_rows = _psi_rows(h, P.n, P.epsilon)
        g_rows = [_psi_rows(gk, P.n, P.epsilon) for gk in g]
        for r, (coeff, rel, bound, label) in enumerate(base_rows):
            worst = np.zeros(lp.n_vars)
            extra = {}
            for k, mk in enumerate(mags):
                gk = g_rows[k][r][0]
                if not np.any(gk):
                    continue
                t = lp.add_variable(f"t[{label},{k}]")
                extra[t] = mk
                gk = np.append(gk, np.zeros(lp.n_vars - gk.size))
                lp.add({t: 1.0, **{i: -v for i, v in enumerate(gk) if v}}, ">=", 0.0, f"epi+[{label},{k}]")
                lp.add({t: 1.0, **{i: v for i, v in enumerate(gk) if v}}, ">=", 0.0, f"epi-[{label},{k}]")
            sgn = -1.0 if rel == ">=" else 1.0
            for b in sorted(set(P.b_range)):
                row = {i: v for i, v in enumerate(coeff + b * h_rows[r][0]) if v}
                for t, mk in extra.items():
                    row[t] = sgn * mk
                lp.add(row, rel, _inner(rel, bound, list(row.values())), f"{label}@b={b:g}")
    else:
        seen = set()
        for dA, b in vertices(P):
            phi = nominal + b * h
            for (p, q), gk in zip(unc, g):
                phi = phi + dA[p, q] * gk
            for coeff, rel, bound, label in _psi_rows(phi, P.n, P.epsilon):
                key = (tuple(np.round(coeff, 12)), rel)
                if key in seen:
                    continue
                seen.add(key)
                lp.add(coeff, rel, _inner(rel, bound, coeff), label)
    _q_rows(layout, P.epsilon, P.scale_cap)
    lp.layout = layout
    return lp


# ---------------------------------------------------------------------------
# solve / extract / verify


def extract_gain(Q, Y):
    """``K = Y Q^{-1}`` and ``P = Q^{-1}``.

    Raises :class:`SynthesisError` if ``Q`` is not Gershgorin-positive
    (which is what guarantees invertibility) or the solve is inaccurate.
    """
    Q = _as2d(Q, "Q")
    Y = _as2d(Y, "Y")
    Q = 0.5 * (Q + Q.T)
    margin = np.diag(Q) - (np.abs(Q).sum(axis=1) - np.abs(np.diag(Q)))
    if not np.all(margin > 0):
        raise SynthesisError(f"Q is not certified positive definite (Gershgorin margin {margin.min():g})")
    K = np.linalg.solve(Q, Y.T).T
    resid = np.linalg.norm(K @ Q - Y)
    if resid > 1e-9 * max(np.linalg.norm(Y), np.finfo(float).tiny) and resid > 1e-300:
        raise SynthesisError(f"gain solve residual {resid:g} too large")
    P = np.linalg.inv(Q)
    return K, 0.5 * (P + P.T)


@dataclass
class SynthesisResult:
    K: np.ndarray
    Q: np.ndarray
    Y: np.ndarray
    beta: float
    certificate: dict = field(default_factory=dict)
    mode: str = "vertex"

    @property
    def P(self):
        return extract_gain(self.Q, self.Y)[1]

    @property
    def min_slack(self) -> float:
        return min((min(v) for v in self.certificate.values() if len(v)), default=np.inf)

    def to_dict(self):
        return {
            "K": self.K.tolist(),
            "Q": self.Q.tolist(),
            "Y": self.Y.tolist(),
            "beta": self.beta,
            "mode": self.mode,
            "slacks": {k: list(map(float, v)) for k, v in self.certificate.items()},
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            np.atleast_2d(np.asarray(d["K"], dtype=float)),
            np.asarray(d["Q"], dtype=float),
            np.atleast_2d(np.asarray(d["Y"], dtype=float)),
            float(d["beta"]),
            {k: np.asarray(v, dtype=float) for k, v in d.get("slacks", {}).items()},
            d.get("mode", "vertex"),
        )


def synthesize(problem: SynthesisProblem, objective=None, per_entry=None) -> SynthesisResult:
    """Build, solve and check the synthesis program.

    Parameters
    ----------
    objective : {None, 'trace'}
        ``None`` is pure feasibility; ``'trace'`` minimizes ``sum Q_ii``.
    per_entry : bool, optional
        Force the per-entry formulation; by default it is used only when
        the vertex count exceeds the cap.

    Raises
    ------
    SynthesisInfeasible
    SolverStall
    """
    if per_entry is None:
        per_entry = len(problem.uncertain) > problem.vertex_cap
    lp = build_vertex_program(problem, per_entry=per_entry)
    cost = None
    if objective == "trace":
        cost = np.zeros(lp.n_vars)
        for i in range(problem.n):
            cost[lp.layout.q[i, i]] = 1.0
    elif objective is not None:
        raise ValueError(f"unknown objective {objective!r}")
    sol = solve_feasibility(lp, objective=cost)
    if not sol.feasible:
        raise SynthesisInfeasible(
            f"no certificate exists in this encoding (phase-1 optimum {sol.phase1_value:.3g})",
            sol.phase1_value,
            sol.farkas,
        )
    Q, Y, beta = lp.layout.unpack(sol.x)
    K, _ = extract_gain(Q, Y)
    result = SynthesisResult(K, Q, Y, beta, mode="per_entry" if per_entry else "vertex")
    result.certificate = certificate_slacks(problem, Q, Y, beta)
    return result


def _worst_case_rows(problem, Q, Y, beta):
    """Rows (a)-(b) at their worst case over the box, per b vertex."""
    P = problem
    eps = P.epsilon
    base = Q @ P.A0.T + P.A0 @ Q + P.alpha_rate * Q + beta * P.disturbance_gram
    h = Y.T @ P.B0.T + P.B0 @ Y
    gs = []
    for p, q in P.uncertain:
        e = np.zeros_like(P.A0)
        e[p, q] = 1.0
        gs.append((P.deltaA_mag[p, q], Q @ e.T + e @ Q))
    out = []
    iu = np.triu_indices(P.n, 1)
    for b in sorted(set(P.b_range)):
        phi = base + b * h
        spread = sum((mk * np.abs(g[iu]) for mk, g in gs), np.zeros(len(iu[0])))
        off = phi[iu] - spread
        rs = phi.sum(axis=1) + sum((mk * np.abs(g.sum(axis=1)) for mk, g in gs), np.zeros(P.n))
        out.append(np.concatenate([off, -eps - rs]))
    return np.concatenate(out)


def certificate_slacks(problem: SynthesisProblem, Q, Y, beta) -> dict:
    """Recompute every certificate inequality from ``(Q, Y, beta)``.

    Vertex rows are evaluated at each vertex when their number is within
    the cap, otherwise at their exact worst case over the box.
    """
    P = problem
    n = P.n
    eps = P.epsilon
    iu = np.triu_indices(n, 1)
    if len(P.uncertain) <= P.vertex_cap:
        rows = []
        for dA, b in vertices(P):
            A = P.A0 + dA
            phi = Q @ A.T + A @ Q + b * (Y.T @ P.B0.T + P.B0 @ Y) + P.alpha_rate * Q + beta * P.disturbance_gram
            rows.append(np.concatenate([phi[iu], -eps - phi.sum(axis=1)]))
        psi = np.concatenate(rows)
    else:
        psi = _worst_case_rows(P, Q, Y, beta)
    off = np.abs(Q).sum(axis=1) - np.abs(np.diag(Q))
    return {
        "psi": psi,
        "q_dominance": np.diag(Q) - off - eps,
        "q_cap": P.scale_cap - np.diag(Q),
        "beta": np.array([beta - eps]),
    }


@dataclass
class VerificationReport:
    vertex_count: int
    min_slack: float
    slack_ok: bool
    samples: int
    max_real: float
    unstable: int

    @property
    def ok(self) -> bool:
        return self.slack_ok and self.unstable == 0

    def to_dict(self):
        return dict(self.__dict__, ok=self.ok)


def verify_synthesis(problem: SynthesisProblem, result: SynthesisResult, seed=0, samples=200, tol=1e-9) -> VerificationReport:
    """Independent re-check of a synthesis result.

    ``Y`` is recomputed as ``K Q`` so that a tampered gain is caught, the
    vertex inequalities are re-evaluated, and ``samples`` random interior
    closed loops are tested with the eigenvalue oracle.
    """
    P = problem
    Q = np.asarray(result.Q, dtype=float)
    Y = np.asarray(result.K, dtype=float) @ Q
    slacks = certificate_slacks(P, Q, Y, result.beta)
    cap_ok = len(P.uncertain) <= P.vertex_cap
    nvert = 2 ** len(P.uncertain) * len(set(P.b_range)) if cap_ok else 0
    min_slack = min(float(v.min()) for v in slacks.values())
    g = rng(seed)
    worst = -np.inf
    unstable = 0
    lo, hi = P.b_range
    for _ in range(samples):
        dA = P.deltaA_mag * g.uniform(-1.0, 1.0, size=P.deltaA_mag.shape)
        b = g.uniform(lo, hi) if hi > lo else lo
        lam = eigenvalues(P.A0 + dA + b * P.B0 @ result.K, residual=False).max_real
        worst = max(worst, lam)
        unstable += lam >= 0
    return VerificationReport(nvert, min_slack, min_slack >= -tol, samples, float(worst), int(unstable))
