"""
Certifying a time-varying system and bounding its trajectory
============================================================

If ``A(t) + A(t)^T`` has eigenvalues below ``sigma < 0`` for all ``t``,
then ``|x(t)| <= 2 Fbar fbar / |sigma| + (|x0| - ...) exp(sigma t / 2)``.
The eigenvalue bound comes from the symmetric part of the interval model.
"""

import numpy as np

from eigloc import IntervalMatrix, LtvRhs, LtvSystem, Scaling, certify, check_envelope, decay_envelope
from eigloc import demidovich_sigma, integrate, sample_interval
from eigloc.sim import piecewise_constant, signal

A = np.array([[-1.0, 3.0], [-2.5, -2.0]])
F = np.array([0.0, 0.05])
x0 = np.array([1.0, 1.0])

# %%
# Gershgorin on A itself cannot decide (a disc crosses the imaginary axis),
# but the symmetric part is comfortably negative.
exact = IntervalMatrix.exact(A)
print("direct:", certify(exact, "direct").verdict)
print("sigma(A + A^T), plain      :", demidovich_sigma(LtvSystem(exact)))
print("sigma(A + A^T), d=(1,0.711):", round(demidovich_sigma(LtvSystem(exact), Scaling([1.0, 0.711])), 4))
cert = certify(exact, "demidovich", F_bar=np.linalg.norm(F), f_bar=1.0, x0_norm=np.linalg.norm(x0))
print("best certificate:", cert.variant, round(cert.sigma, 6), "ultimate bound", round(cert.envelope.ultimate, 4))

# %%
# Simulate under f = sin t and compare with the envelope.
env = decay_envelope(cert.sigma, np.linalg.norm(F), 1.0, np.linalg.norm(x0))
traj = integrate(LtvRhs(lambda t: A, lambda t: F * np.sin(t)), x0, 20.0, 1e-3)
chk = check_envelope(traj, env)
print(f"constant A: inside envelope = {chk.ok}, final |x| = {traj.norms[-1]:.4f}")

# %%
# Now let every entry drift by +/-0.1, switching every 0.25 s, and push
# with a square wave.
M = IntervalMatrix(A, [-0.1, -0.1], [0.1, 0.1], [[0.0, 0.1], [0.1, 0.0]])
cert = certify(M, "demidovich", F_bar=0.05, f_bar=1.0, x0_norm=np.sqrt(2))
print("interval model certificate:", cert.verdict, round(cert.sigma, 4))
mats = sample_interval(M, 3, 81, "vertex")
rhs = LtvRhs(piecewise_constant(mats, 0.25), lambda t: F * signal("sign_sin", 2.0)(t), hold=True)
traj = integrate(rhs, x0, 20.0, 1e-3)
chk = check_envelope(traj, cert.envelope)
print(f"switching A(t): inside envelope = {chk.ok}, worst excess {chk.worst_excess:.2e}")
