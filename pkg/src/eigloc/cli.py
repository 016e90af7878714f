"""``eigloc`` command line.

Exit codes: 0 success, 1 infeasible / not certified / check failed,
2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench as _bench
from .bounds import VARIANTS, OptimizerBudget, all_variants, interval_bounds
from .lp import SolverStall
from .matcore import IntervalMatrix, MatrixError, RealMatrix, Scaling
from .oracle import ConvergenceError, enclosure_check, eigenvalues, sample_interval
from .regions import (
    MODES,
    Region,
    build_interval_families,
    imag_bound,
    optimized_region,
    oscillation_estimate,
    real_extent,
)
from .serialize import InputError, dumps, parse_matrix, parse_problem, parse_system, read_json, read_points
from .sim import LtvRhs, SimulationError, check_envelope, integrate, piecewise_constant, signal
from .stability import certify, decay_envelope, network_closed_loop
from .svg import Canvas, render_svg
from .synthesis import SynthesisInfeasible, SynthesisResult, VertexCapExceeded, synthesize, verify_synthesis

EXIT_OK, EXIT_UNCERTIFIED, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _interval(target):
    if isinstance(target, RealMatrix):
        return IntervalMatrix.exact(target.entries)
    return target


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}") from exc


def _scalings(args, n):
    """Pair up repeated ``--scaling``/``--alpha`` flags."""
    ds = [np.array(_floats(s)) for s in args.scaling or []]
    alphas = list(args.alpha or [])
    count = max(len(ds), len(alphas))
    out = []
    for k in range(count):
        d = ds[k] if k < len(ds) else np.ones(n)
        if d.size != n:
            raise InputError(f"--scaling #{k + 1} has {d.size} weights, expected {n}")
        a = alphas[k] if k < len(alphas) else 1.0
        try:
            out.append(Scaling(d, a))
        except (ValueError, MatrixError) as exc:
            raise InputError(str(exc)) from exc
    return out


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_bounds(args):
    m = _interval(parse_matrix(read_json(args.input)))
    if args.optimize:
        reports = all_variants(m)
    else:
        scalings = _scalings(args, m.n) or [Scaling.identity(m.n, 0.5)]
        s = scalings[0]
        reports = {
            "plain": interval_bounds(m),
            "scaled": interval_bounds(m, Scaling(s.d, 1.0)),
            "alpha": interval_bounds(m, Scaling.identity(m.n, s.alpha), True),
            "scaled_alpha": interval_bounds(m, s, True),
        }
    _emit(dumps({k: reports[k].to_dict() for k in VARIANTS}), args.output)
    return EXIT_OK


def _region_for(args, m):
    mode = args.mode
    if args.optimize:
        region, _ = optimized_region(m, "scaled_alpha")
    else:
        region = Region(build_interval_families(m, None, mode))
    for s in _scalings(args, m.n):
        # a non-trivial alpha only means something for the blended radius
        fam_mode = "ostrowski" if s.alpha != 1.0 else mode
        region = region & Region(build_interval_families(m, s, fam_mode))
    return region


def cmd_region(args):
    m = _interval(parse_matrix(read_json(args.input)))
    region = _region_for(args, m)
    ext = real_extent(region, args.resolution)
    osc = oscillation_estimate(region, args.resolution)
    report = {
        "mode": args.mode,
        "optimized": bool(args.optimize),
        "families": len(region.families),
        "real_extent": None if ext is None else list(ext),
        "empty": ext is None,
        "imag_bound": imag_bound(region, args.resolution),
        "mu_hat": None if osc is None else osc[0],
        "overshoot": None if osc is None else osc[1],
    }
    if args.svg:
        pts = []
        if args.points:
            with open(args.points) as fh:
                pts = read_points(fh.read())
        elif args.eigs:
            pts = eigenvalues(m.nominal).values
        try:
            svg = render_svg(region, pts, Canvas(width=args.width, height=args.height))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        with open(args.svg, "w") as fh:
            fh.write(svg)
        report["svg"] = args.svg
    _emit(dumps(report), args.output)
    return EXIT_OK


def cmd_check(args):
    m = _interval(parse_matrix(read_json(args.input)))
    region = _region_for(args, m)
    rep = enclosure_check(m, region, args.seed, args.count, args.law)
    _emit(dumps(rep.to_dict() | {"ok": rep.ok, "seed": args.seed, "law": args.law}), args.output)
    return EXIT_OK if rep.ok else EXIT_UNCERTIFIED


def _certificate_out(cert, args):
    _emit(dumps(cert.to_dict()), args.output)
    return EXIT_OK if cert.stable else EXIT_UNCERTIFIED


def cmd_certify(args):
    m = _interval(parse_matrix(read_json(args.input)))
    cert = certify(m, args.strategy, OptimizerBudget(), args.F_bar, args.f_bar, args.x0_norm)
    return _certificate_out(cert, args)


def cmd_network(args):
    m = network_closed_loop(args.n, args.q, args.m)
    cert = certify(m, args.strategy, OptimizerBudget(), variants=("plain",) if args.plain_only else None)
    return _certificate_out(cert, args)


def cmd_synthesize(args):
    problem = parse_problem(read_json(args.input))
    try:
        result = synthesize(problem, args.objective, True if args.per_entry else None)
    except VertexCapExceeded as exc:
        raise InputError(str(exc)) from exc
    except SynthesisInfeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    rep = verify_synthesis(problem, result, args.seed, args.samples)
    out = result.to_dict() | {"verification": rep.to_dict()}
    _emit(dumps(out), args.output)
    summary = [
        f"certificate ({result.mode} mode): K = {np.array2string(result.K, precision=4)}",
        f"  beta = {result.beta:.4g}, min slack = {rep.min_slack:.3g}, vertices = {rep.vertex_count}",
        f"  sampled closed loops: {rep.samples}, worst max Re(lambda) = {rep.max_real:.4g}, unstable = {rep.unstable}",
    ]
    print("\n".join(summary), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_UNCERTIFIED


def cmd_verify(args):
    problem = parse_problem(read_json(args.problem))
    doc = read_json(args.result)
    try:
        result = SynthesisResult.from_dict(doc)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad result document: {exc}") from exc
    rep = verify_synthesis(problem, result, args.seed, args.samples)
    _emit(dumps(rep.to_dict()), args.output)
    return EXIT_OK if rep.ok else EXIT_UNCERTIFIED


def cmd_simulate(args):
    sysdoc = parse_system(read_json(args.input))
    m = sysdoc["matrix"]
    cert = certify(m, "demidovich")
    dist = sysdoc["disturbance"]
    try:
        f = signal(dist["kind"], dist["freq"], dist["amp"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    F = sysdoc["F"]
    step, t_end, period = sysdoc["step"], sysdoc["t_end"], sysdoc["switch_period"]
    pieces = int(np.ceil(t_end / period)) + 1
    mats = sample_interval(m, args.seed, pieces, args.law)
    rhs = LtvRhs(piecewise_constant(mats, period), lambda t: F * f(t), hold=True)
    traj = integrate(rhs, sysdoc["x0"], t_end, step)
    _emit(traj.to_csv(), args.csv)
    report = {"certificate": cert.to_dict(), "envelope_ok": None}
    code = EXIT_UNCERTIFIED
    if cert.stable:
        env = decay_envelope(cert.sigma, float(np.linalg.norm(F)), abs(dist["amp"]), float(np.linalg.norm(sysdoc["x0"])))
        chk = check_envelope(traj, env, args.margin)
        report.update(envelope=env.to_dict(), envelope_ok=chk.ok, worst_excess=chk.worst_excess, worst_time=chk.worst_time)
        code = EXIT_OK if chk.ok else EXIT_UNCERTIFIED
    print(dumps(report), file=sys.stderr if args.csv in (None, "-") else sys.stdout)
    return code


def cmd_bench(args):
    ns = [int(v) for v in _floats(args.n)]
    methods = [s.strip() for s in args.method.split(",") if s.strip()]
    try:
        recs = _bench.run_bench(ns, methods, args.seed, args.repeats)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(_bench.records_to_csv(recs), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="eigloc", description="Eigenvalue localization, stability certificates and gain synthesis.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        if output:
            sp.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    def scaling_flags(sp):
        sp.add_argument("--scaling", action="append", help="comma-separated weights d (repeatable)")
        sp.add_argument("--alpha", action="append", type=float, help="Ostrowski exponent (repeatable)")

    sp = sub.add_parser("bounds", help="bounds on Re(lambda), all variants")
    sp.add_argument("input")
    sp.add_argument("--optimize", action="store_true", help="optimize (D, alpha) for each variant")
    scaling_flags(sp)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    for name, fn, hlp in (("region", cmd_region, "localization region, extents, SVG"), ("check", cmd_check, "seeded enclosure check")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("input")
        sp.add_argument("--mode", choices=MODES, default="rows_cols")
        sp.add_argument("--optimize", action="store_true", help="intersect the regions of many optimized scalings")
        scaling_flags(sp)
        common(sp)
        sp.set_defaults(func=fn)
        if name == "region":
            sp.add_argument("--resolution", type=float, default=1e-3)
            sp.add_argument("--svg", help="write an SVG picture here")
            sp.add_argument("--points", help="CSV of overlay points (re,im)")
            sp.add_argument("--eigs", action="store_true", help="overlay eigenvalues of the nominal matrix")
            sp.add_argument("--width", type=int, default=640)
            sp.add_argument("--height", type=int, default=480)
        else:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--count", type=int, default=200)
            sp.add_argument("--law", choices=("uniform", "vertex"), default="uniform")

    sp = sub.add_parser("certify", help="stability certificate for an interval model")
    sp.add_argument("input")
    sp.add_argument("--strategy", choices=("direct", "demidovich"), default="demidovich")
    sp.add_argument("--F-bar", dest="F_bar", type=float, default=0.0)
    sp.add_argument("--f-bar", dest="f_bar", type=float, default=0.0)
    sp.add_argument("--x0-norm", dest="x0_norm", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("network", help="certify the synchronization network closed loop")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=float, default=10.0)
    sp.add_argument("--m", type=float, required=True, help="bound on every coupling |q_ij|")
    sp.add_argument("--strategy", choices=("direct", "demidovich"), default="direct")
    sp.add_argument("--plain-only", action="store_true", help="skip the scaling optimizer (large n)")
    common(sp)
    sp.set_defaults(func=cmd_network)

    sp = sub.add_parser("synthesize", help="state-feedback synthesis from a problem JSON")
    sp.add_argument("input")
    sp.add_argument("--objective", choices=("trace",), default=None)
    sp.add_argument("--per-entry", action="store_true", help="worst-case rows instead of vertex enumeration")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=200)
    common(sp)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("verify", help="re-verify a synthesis result JSON")
    sp.add_argument("problem")
    sp.add_argument("result")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=200)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("simulate", help="simulate a system JSON and check the decay envelope")
    sp.add_argument("input")
    sp.add_argument("--csv", default=None, help="trajectory CSV (default stdout)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--law", choices=("uniform", "vertex"), default="uniform")
    sp.add_argument("--margin", type=float, default=1e-6)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="timing of bound checks vs the eigensolver (CSV)")
    sp.add_argument("--n", default="250,500,1000,2000", help="comma-separated sizes")
    sp.add_argument("--method", default=",".join(_bench.METHODS))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeats", type=int, default=3)
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, MatrixError, json.JSONDecodeError) as exc:
        print(f"eigloc: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, SolverStall, SimulationError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"eigloc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"eigloc: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
