"""Small dense linear programs and a two-phase simplex solver.

The feasibility programs built by :mod:`eigloc.synthesis` have at most a
few hundred variables, so a dense tableau with Bland's anti-cycling rule
is adequate and keeps the solver fully inspectable.  Every answer is
re-checked against the original constraints before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LinearProgram",
    "LpSolution",
    "SolverStall",
    "LpUnbounded",
    "solve_feasibility",
]

RELATIONS = ("<=", ">=", "==")


class SolverStall(ArithmeticError):
    """Numerical failure: iteration limit, lost pivot, or failed re-check.

    Distinct from infeasibility, which is a regular outcome.
    """


class LpUnbounded(ArithmeticError):
    pass


@dataclass
class LinearProgram:
    """Constraints ``a . x  (<=|>=|==)  b`` over free real variables."""

    variables: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self._index = {name: k for k, name in enumerate(self.variables)}

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def add_variable(self, name) -> int:
        if name in self._index:
            raise ValueError(f"duplicate variable {name!r}")
        self._index[name] = len(self.variables)
        self.variables.append(name)
        return self._index[name]

    def index(self, name) -> int:
        return self._index[name]

    def add(self, coeffs, relation, bound, label=""):
        """Add one constraint.

        ``coeffs`` maps variable names (or indices) to coefficients, or is
        a dense array of length ``n_vars``.
        """
        if relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {relation!r}")
        if isinstance(coeffs, dict):
            row = {}
            for key, val in coeffs.items():
                k = key if isinstance(key, (int, np.integer)) else self._index[key]
                if not 0 <= k < self.n_vars:
                    raise ValueError(f"constraint {label!r} references undeclared variable {key!r}")
                row[int(k)] = row.get(int(k), 0.0) + float(val)
        else:
            dense = np.asarray(coeffs, dtype=float)
            if dense.shape != (self.n_vars,):
                raise ValueError(f"dense row has shape {dense.shape}, expected ({self.n_vars},)")
            row = {int(k): float(dense[k]) for k in np.flatnonzero(dense)}
        if not all(np.isfinite(v) for v in row.values()) or not np.isfinite(bound):
            raise ValueError(f"constraint {label!r} has non-finite data")
        self.rows.append(row)
        self.relations.append(relation)
        self.rhs.append(float(bound))
        self.labels.append(label)

    def matrix(self):
        a = np.zeros((self.n_rows, self.n_vars))
        for i, row in enumerate(self.rows):
            for k, v in row.items():
                a[i, k] = v
        return a, np.array(self.rhs), list(self.relations)

    def slacks(self, x) -> np.ndarray:
        """Per-row slack: ``>= 0`` iff the row holds (``-|residual|`` for equalities)."""
        a, b, rel = self.matrix()
        ax = a @ np.asarray(x, dtype=float)
        out = np.empty(self.n_rows)
        for i, r in enumerate(rel):
            if r == "<=":
                out[i] = b[i] - ax[i]
            elif r == ">=":
                out[i] = ax[i] - b[i]
            else:
                out[i] = -abs(ax[i] - b[i])
        return out

    def signature(self):
        """Hashable canonical form (used to compare programs)."""
        return tuple(
            (tuple(sorted((self.variables[k], round(v, 12)) for k, v in row.items() if v != 0)), rel, round(b, 12))
            for row, rel, b in zip(self.rows, self.relations, self.rhs)
        )


@dataclass
class LpSolution:
    """``status`` is ``'feasible'`` or ``'infeasible'``.

    For infeasible programs ``farkas`` holds multipliers ``u`` (one per
    constraint; ``<= 0`` on ``<=`` rows, ``>= 0`` on ``>=`` rows) with
    ``u @ A = 0`` and ``u @ b > 0``, which proves that no ``x`` exists.
    """

    status: str
    x: np.ndarray | None
    phase1_value: float
    iterations: int
    farkas: np.ndarray | None = None
    objective: float | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


class _Tableau:
    def __init__(self, t, basis, tol, max_iter):
        self.t = t
        self.basis = basis
        self.tol = tol
        self.max_iter = max_iter
        self.iterations = 0

    def pivot(self, r, c):
        t = self.t
        p = t[r, c]
        if abs(p) < self.tol:
            raise SolverStall(f"pivot element {p:g} too small")
        t[r] /= p
        col = t[:, c].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        self.basis[r] = c

    def run(self, allowed):
        """Bland's rule on the last row as reduced costs."""
        t = self.t
        m = t.shape[0] - 1
        while True:
            red = t[-1, :-1]
            cand = np.flatnonzero((red < -self.tol) & allowed)
            if cand.size == 0:
                return
            c = cand[0]
            colv = t[:m, c]
            pos = np.flatnonzero(colv > self.tol)
            if pos.size == 0:
                raise LpUnbounded("objective is unbounded below")
            ratios = t[pos, -1] / colv[pos]
            best = ratios.min()
            ties = pos[ratios <= best + self.tol * max(1.0, abs(best))]
            r = ties[np.argmin(self.basis[ties])]
            self.pivot(r, c)
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise SolverStall(f"simplex did not terminate within {self.max_iter} pivots")


def solve_feasibility(lp: LinearProgram, objective=None, tol=1e-9, max_iter=None) -> LpSolution:
    """Two-phase simplex.

    Phase 1 minimizes the sum of artificial variables; a positive optimum
    (beyond ``tol``) declares the program infeasible.  With ``objective``
    (a dense cost vector over the variables) phase 2 minimizes it.

    Raises
    ------
    SolverStall
        Iteration limit reached, vanishing pivot, or the returned point
        fails the independent constraint re-check.
    LpUnbounded
        Phase 2 objective unbounded below.
    """
    a, b, rel = lp.matrix()
    m, nv = a.shape
    if m == 0:
        x = np.zeros(nv)
        return LpSolution("feasible", x, 0.0, 0, objective=0.0 if objective is not None else None)
    n_slack = sum(r != "==" for r in rel)
    # columns: x+ | x- | slacks | artificials | rhs
    ncol = 2 * nv + n_slack + m
    t = np.zeros((m + 1, ncol + 1))
    sign = np.ones(m)
    basis = np.empty(m, dtype=int)
    needs_art = np.zeros(m, dtype=bool)
    init_col = np.empty(m, dtype=int)  # identity column of the starting basis
    k = 2 * nv
    for i in range(m):
        s = -1.0 if b[i] < 0 else 1.0
        sign[i] = s
        t[i, :nv] = s * a[i]
        t[i, nv : 2 * nv] = -s * a[i]
        t[i, -1] = s * b[i]
        if rel[i] != "==":
            coef = 1.0 if rel[i] == "<=" else -1.0
            t[i, k] = s * coef
            if s * coef > 0:
                basis[i] = k
                init_col[i] = k
            else:
                needs_art[i] = True
            k += 1
        else:
            needs_art[i] = True
        art = 2 * nv + n_slack + i
        if needs_art[i]:
            t[i, art] = 1.0
            basis[i] = art
            init_col[i] = art
    art_cols = np.arange(2 * nv + n_slack, ncol)
    art_mask = np.zeros(ncol, dtype=bool)
    art_mask[art_cols[needs_art]] = True
    # phase-1 reduced costs: cost 1 on artificials in use
    t[-1, :] = -t[:m][needs_art].sum(axis=0)
    t[-1, :-1][art_mask] = 0.0
    max_iter = max_iter or 50 * (m + ncol)
    tab = _Tableau(t, basis, tol, max_iter)
    usable = np.zeros(ncol, dtype=bool)
    usable[: 2 * nv + n_slack] = True
    tab.run(usable | art_mask)
    phase1 = -t[-1, -1]
    scale = max(1.0, float(np.abs(b).max()))
    if phase1 > tol * scale:
        red = t[-1, :-1]
        y = np.where(needs_art, 1.0 - red[init_col], -red[init_col])
        u = y * sign
        return LpSolution("infeasible", None, float(phase1), tab.iterations, farkas=u)
    # drive zero-level artificials out of the basis
    keep = np.ones(m + 1, dtype=bool)
    for i in range(m):
        if art_mask[basis[i]]:
            row = t[i, : 2 * nv + n_slack]
            nz = np.flatnonzero(np.abs(row) > 1e3 * tol)
            if nz.size:
                tab.pivot(i, nz[0])
            else:
                keep[i] = False  # redundant row
    t = t[keep][:, np.concatenate([usable, [True]])]
    basis = basis[keep[:m]]
    tab = _Tableau(t, basis, tol, max_iter)
    tab.iterations = 0
    obj_value = None
    if objective is not None:
        c = np.asarray(objective, dtype=float)
        if c.shape != (nv,):
            raise ValueError("objective has the wrong length")
        cost = np.concatenate([c, -c, np.zeros(n_slack)])
        t[-1, :-1] = cost
        t[-1, -1] = 0.0
        for i, bi in enumerate(basis):
            t[-1] -= cost[bi] * t[i]
        tab.run(np.ones(t.shape[1] - 1, dtype=bool))
    z = np.zeros(t.shape[1] - 1)
    z[basis] = t[:-1, -1]
    x = z[:nv] - z[nv : 2 * nv]
    if objective is not None:
        obj_value = float(np.asarray(objective) @ x)
    worst = lp.slacks(x).min(initial=0.0)
    if worst < -1e3 * tol * max(scale, float(np.abs(a).max(initial=1.0)) * max(1.0, np.abs(x).max(initial=0.0))):
        raise SolverStall(f"solution fails re-check (worst slack {worst:g})")
    return LpSolution("feasible", x, float(phase1), tab.iterations, objective=obj_value)
