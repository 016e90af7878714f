import csv
import io
import json
from pathlib import Path

import pytest

from eigloc.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_plain(capsys):
    code, out, _ = _run(capsys, "bounds", DATA / "small_real.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["plain"]["sigma_min"] == -3.5 and rep["plain"]["sigma_max"] == 0.5
    assert set(rep) == {"plain", "scaled", "alpha", "scaled_alpha"}


def test_bounds_optimize(capsys):
    code, out, _ = _run(capsys, "bounds", DATA / "small_real.json", "--optimize")
    rep = json.loads(out)
    assert rep["scaled"]["sigma_max"] <= -0.26 and rep["scaled"]["sigma_min"] >= -2.73


def test_region_svg_and_extents(capsys, tmp_path):
    svg = tmp_path / "r.svg"
    code, out, _ = _run(capsys, "region", DATA / "small_complex.json", "--optimize", "--svg", svg, "--eigs")
    rep = json.loads(out)
    assert code == 0 and svg.read_text().startswith("<?xml")
    assert rep["real_extent"][1] == pytest.approx(-0.27525513, abs=1e-6)
    assert 1.0 <= rep["imag_bound"] <= 1.35
    assert rep["mu_hat"] > 0


def test_region_repeated_scalings(capsys):
    code, out, _ = _run(
        capsys, "region", DATA / "small_real.json", "--scaling", "1,0.69", "--scaling", "1,1", "--alpha", "1", "--alpha", "0.23"
    )
    rep = json.loads(out)
    assert rep["families"] == 2 + 2 + 1
    assert rep["real_extent"][1] < 0


def test_region_points_overlay(capsys, tmp_path):
    pts = tmp_path / "p.csv"
    pts.write_text("-1.5,1\n-1.5,-1\n")
    svg = tmp_path / "r.svg"
    code, _, _ = _run(capsys, "region", DATA / "small_complex.json", "--svg", svg, "--points", pts)
    assert code == 0 and svg.read_text().count('class="marker"') == 2


def test_check(capsys):
    code, out, _ = _run(capsys, "check", DATA / "interval_diag.json", "--seed", 42, "--count", 200)
    rep = json.loads(out)
    assert code == 0 and rep["tested"] == 400 and rep["violations"] == []


def test_certify_codes(capsys):
    code, out, _ = _run(capsys, "certify", DATA / "ltv_nominal.json", "--strategy", "direct")
    assert code == 1 and json.loads(out)["verdict"] == "inconclusive"
    code, out, _ = _run(capsys, "certify", DATA / "ltv_nominal.json", "--F-bar", 0.05, "--f-bar", 1, "--x0-norm", 1.4142)
    cert = json.loads(out)
    assert code == 0 and cert["verdict"] == "stable" and cert["envelope"]["ultimate"] > 0


def test_network(capsys):
    code, out, _ = _run(capsys, "network", "--n", 20, "--m", 0.2, "--plain-only")
    assert code == 0 and json.loads(out)["sigma"] == pytest.approx(-10 + 0.2 + 19 * 0.2)
    code, _, _ = _run(capsys, "network", "--n", 20, "--m", 1.0, "--plain-only")
    assert code == 1


def test_synthesize_and_verify_round_trip(capsys, tmp_path):
    res = tmp_path / "res.json"
    code, _, err = _run(capsys, "synthesize", DATA / "third_order_problem.json", "-o", res)
    assert code == 0 and "certificate" in err
    doc = json.loads(res.read_text())
    assert doc["verification"]["ok"]
    code, out, _ = _run(capsys, "verify", DATA / "third_order_problem.json", res)
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] == doc["verification"]["ok"] and rep["min_slack"] == doc["verification"]["min_slack"]


def test_synthesize_infeasible(capsys, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"A0": [[1, 0], [0, 1]], "B0": [[0], [0]]}))
    code, _, err = _run(capsys, "synthesize", p)
    assert code == 1 and "infeasible" in err


def test_simulate(capsys, tmp_path):
    out_csv = tmp_path / "t.csv"
    code, out, _ = _run(capsys, "simulate", DATA / "ltv_nominal_system.json", "--csv", out_csv)
    rep = json.loads(out)
    assert code == 0 and rep["envelope_ok"]
    rows = list(csv.reader(io.StringIO(out_csv.read_text())))
    assert rows[0] == ["t", "x1", "x2", "norm_x"] and len(rows) == 20001 + 1


def test_bench(capsys):
    code, out, _ = _run(capsys, "bench", "--n", "20,40", "--method", "gershgorin,oracle_eig", "--repeats", 1)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [(r["n"], r["method"]) for r in rows] == [
        ("20", "gershgorin"), ("20", "oracle_eig"), ("40", "gershgorin"), ("40", "oracle_eig")
    ]
    assert all(r["verdict"] == "stable" for r in rows)


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "entries": [[1, 2], [3]]}')
    code, _, err = _run(capsys, "bounds", bad)
    assert code == 2 and "entries[1]" in err
    bad.write_text("{not json")
    assert _run(capsys, "bounds", bad)[0] == 2
    assert _run(capsys, "bounds", tmp_path / "missing.json")[0] == 2
    assert _run(capsys, "frobnicate")[0] == 2
    assert _run(capsys, "bench", "--method", "magic", "--n", "5")[0] == 2
    code, _, _ = _run(capsys, "region", DATA / "small_real.json", "--svg", tmp_path / "x.svg", "--width", 0)
    assert code == 2


def test_numerical_failure_code(capsys, tmp_path, monkeypatch):
    from eigloc import cli
    from eigloc.lp import SolverStall

    def stall(*a, **k):
        raise SolverStall("forced")

    monkeypatch.setattr(cli, "synthesize", stall)
    assert _run(capsys, "synthesize", DATA / "third_order_problem.json")[0] == 3


def test_deterministic_outputs(capsys):
    a = _run(capsys, "check", DATA / "interval_diag.json", "--seed", 7, "--law", "vertex")[1]
    b = _run(capsys, "check", DATA / "interval_diag.json", "--seed", 7, "--law", "vertex")[1]
    assert a == b
