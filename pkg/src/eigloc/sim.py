"""Fixed-step RK4 integration of linear time-varying systems."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SimulationError",
    "Trajectory",
    "integrate",
    "check_envelope",
    "EnvelopeCheck",
    "signal",
    "LtvRhs",
    "piecewise_constant",
]


class SimulationError(ArithmeticError):
    def __init__(self, msg, last_finite):
        super().__init__(msg)
        self.last_finite = last_finite


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray | None = None

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        n = self.states.shape[1]
        m = 0 if self.controls is None else self.controls.shape[1]
        w.writerow(["t"] + [f"x{i + 1}" for i in range(n)] + ["norm_x"] + [f"u{i + 1}" for i in range(m)])
        norms = self.norms
        for k, t in enumerate(self.times):
            row = [repr(float(t))] + [repr(float(v)) for v in self.states[k]] + [repr(float(norms[k]))]
            if m:
                row += [repr(float(v)) for v in self.controls[k]]
            w.writerow(row)
        return buf.getvalue()


def integrate(rhs, x0, t_end, step=1e-3, control=None) -> Trajectory:
    """Classical 4th-order Runge-Kutta on a uniform mesh.

    ``rhs(t, x)`` returns ``dx/dt``.  If ``control(t, x)`` is given its value
    is recorded at every mesh point (the dynamics must already include it).
    The mesh is ``k * step`` for ``k = 0..N`` with ``N = round(t_end / step)``.

    If ``rhs`` has a ``begin_step(t)`` method it is called at the start of
    every step, which lets parameters be sampled and held for the step.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if not t_end >= step:
        raise ValueError("t_end must be at least one step")
    nsteps = int(round(t_end / step))
    x = np.array(x0, dtype=float)
    times = step * np.arange(nsteps + 1)
    states = np.empty((nsteps + 1, x.size))
    states[0] = x
    h = step
    begin = getattr(rhs, "begin_step", None)
    for k in range(nsteps):
        t = times[k]
        if begin is not None:
            begin(t)
        k1 = rhs(t, x)
        k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2)
        k4 = rhs(t + h, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise SimulationError(f"non-finite state at t={times[k + 1]:g}", k)
        states[k + 1] = x
    controls = None
    if control is not None:
        controls = np.array([np.atleast_1d(control(t, s)) for t, s in zip(times, states)], dtype=float)
    return Trajectory(times, states, controls)


@dataclass
class EnvelopeCheck:
    ok: bool
    worst_excess: float
    worst_time: float

    def __bool__(self):
        return self.ok


def check_envelope(traj: Trajectory, env, margin=0.0) -> EnvelopeCheck:
    """Compare ``|x(t_k)|`` with ``env(t_k)`` at every mesh point."""
    excess = traj.norms - env(traj.times)
    k = int(np.argmax(excess))
    return EnvelopeCheck(bool(excess[k] <= margin), float(excess[k]), float(traj.times[k]))


def signal(kind="sin", freq=1.0, amp=1.0, phase=0.0):
    """Built-in scalar disturbances: ``sin``, ``cos``, ``sign_sin``, ``sign_cos``, ``const``."""
    if kind == "sin":
        return lambda t: amp * np.sin(freq * t + phase)
    if kind == "cos":
        return lambda t: amp * np.cos(freq * t + phase)
    if kind == "sign_sin":
        return lambda t: amp * np.sign(np.sin(freq * t + phase))
    if kind == "sign_cos":
        return lambda t: amp * np.sign(np.cos(freq * t + phase))
    if kind == "const":
        return lambda t: amp * np.ones_like(np.asarray(t, dtype=float))
    raise ValueError(f"unknown signal kind {kind!r}")


def piecewise_constant(values, period):
    """``t -> values[floor(t / period)]``, held at the last value after the end.

    Pair with ``LtvRhs(..., hold=True)`` and a period that is a multiple
    of the step, so each RK4 step sees a single piece.
    """
    values = np.asarray(values)

    def at(t):
        k = min(int(np.floor(t / period + 1e-12)), len(values) - 1)
        return values[k]

    return at


class LtvRhs:
    """Right-hand side ``A(t) x + F(t) f(t)``.

    ``a_of_t(t)`` gives the system matrix; ``f_vec(t)`` the already
    multiplied forcing ``F(t) f(t)`` (or ``None``).  With ``hold=True`` the
    matrix is sampled at the start of each integration step and held
    constant across the RK stages.
    """

    def __init__(self, a_of_t, f_vec=None, hold=False):
        self.a_of_t = a_of_t
        self.f_vec = f_vec
        self.hold = hold
        self._held = None

    def begin_step(self, t):
        if self.hold:
            self._held = self.a_of_t(t)

    def __call__(self, t, x):
        a = self._held if self.hold and self._held is not None else self.a_of_t(t)
        dx = a @ x
        if self.f_vec is not None:
            dx = dx + self.f_vec(t)
        return dx
