"""Timing of bound-based stability checks against the dense eigensolver.

The test model is the synchronization network closed loop with gain
``q = 10`` and coupling bounds ``m = 5 / (n - 1)``, so every hat row sum
equals 5 and the interval Gershgorin check certifies it at any size.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from .bounds import gershgorin_bounds, interval_bounds
from .oracle import eigenvalues, max_real_part, sample_interval
from .stability import network_closed_loop

__all__ = ["METHODS", "BenchRecord", "bench_model", "run_bench", "records_to_csv", "loglog_slope"]

METHODS = ("gershgorin", "interval_gershgorin", "oracle_eig")


@dataclass(frozen=True)
class BenchRecord:
    n: int
    method: str
    wall_time: float
    verdict: str


def bench_model(n, seed):
    model = network_closed_loop(n, 10.0, 5.0 / max(n - 1, 1))
    return model, sample_interval(model, seed, 1)[0]


def _check(method, model, q):
    if method == "gershgorin":
        return "stable" if gershgorin_bounds(q).sigma_max < 0 else "inconclusive"
    if method == "interval_gershgorin":
        return "stable" if interval_bounds(model).sigma_max < 0 else "inconclusive"
    if method == "oracle_eig":
        return "stable" if max_real_part(q) < 0 else "unstable"
    raise ValueError(f"unknown bench method {method!r}; expected one of {METHODS}")


def run_bench(ns, methods=METHODS, seed=0, repeats=3, oracle_repeats=1):
    """Best-of-``repeats`` wall time per ``(n, method)``; records in input order."""
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown bench method {method!r}; expected one of {METHODS}")
    eigenvalues(np.eye(3) + np.diag([1.0, 1.0], 1), residual=False)  # trigger compilation
    out = []
    for n in ns:
        model, q = bench_model(int(n), seed)
        for method in methods:
            reps = oracle_repeats if method == "oracle_eig" else repeats
            best = np.inf
            for _ in range(max(reps, 1)):
                t0 = time.perf_counter()
                verdict = _check(method, model, q)
                best = min(best, time.perf_counter() - t0)
            out.append(BenchRecord(int(n), method, float(best), verdict))
    return out


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["n", "method", "wall_time", "verdict"])
    for r in records:
        w.writerow([r.n, r.method, f"{r.wall_time:.6g}", r.verdict])
    return buf.getvalue()


def loglog_slope(records, method) -> float:
    """Least-squares slope of ``log(time)`` against ``log(n)``."""
    pts = [(r.n, r.wall_time) for r in records if r.method == method]
    n, t = np.array(pts, dtype=float).T
    return float(np.polyfit(np.log(n), np.log(t), 1)[0])
