"""
State-feedback synthesis by linear programming
==============================================

Gershgorin rows of the Lyapunov matrix are linear in ``(Q, Y, beta)``,
so a stabilizing gain ``K = Y Q^-1`` comes out of a feasibility LP.
"""

import numpy as np

from eigloc import LtvRhs, SynthesisProblem, eigenvalues, integrate, synthesize, verify_synthesis

# %%
# An unstable third-order plant driven through its last state.
A = np.array([[0.0, 1, 0], [0, 0, 1], [1, 2, 3]])
B = np.array([0.0, 0, 1])
F = np.array([0.1, 0.5, 1])
print("open loop eigenvalues:", np.round(eigenvalues(A).values, 4))

problem = SynthesisProblem(A, B, F=F, alpha_rate=0.5)
result = synthesize(problem)
K = result.K.ravel()
print("K =", np.round(K, 4), " beta =", result.beta)
closed = A + np.outer(B, K)
print("closed loop eigenvalues:", np.round(eigenvalues(closed).values, 4))
print("verification:", verify_synthesis(problem, result).to_dict())

traj = integrate(LtvRhs(lambda t: closed, lambda t: F * np.sin(t)), [1.0, 1.0, 1.0], 30.0, 1e-3)
print(f"|x| under sin t: max {traj.norms.max():.3f}, last 10 s max {traj.norms[-10000:].max():.3f}")

# %%
# Robust version: every entry of A uncertain by +/-0.1.  The conditions
# are imposed at each of the 16 corners of the parameter box.
A2 = np.array([[-1.0, 3.0], [-2.5, -2.0]])
robust = SynthesisProblem(A2, [0.0, 1.0], deltaA_mag=np.full((2, 2), 0.1), F_bar=0.05, alpha_rate=0.5)
res2 = synthesize(robust)
rep = verify_synthesis(robust, res2, seed=1, samples=200)
print("robust K =", np.round(res2.K.ravel(), 4), f"| {rep.vertex_count} vertices,",
      f"{rep.unstable} of {rep.samples} sampled closed loops unstable, worst Re {rep.max_real:.3f}")
