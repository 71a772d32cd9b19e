import json
from fractions import Fraction

import pytest

import horo


def test_reduce_and_height():
    r = horo.reduce("1/2i")
    assert r["point"] == (Fraction(0), Fraction(2))
    assert r["word"] == "S"
    # (3, -1) bottom row: 1 / (9 y)
    assert horo.orbit_height((Fraction(1, 3), Fraction(1, 100))) == Fraction(100, 9)
    assert horo.orbit_height("1/3+1/100i") == horo.reduce("1/3+1/100i")["point"][1]
    (a, b), (c, d) = r["matrix"]
    assert a * d - b * c == 1
    assert horo.mobius(r["matrix"], "1/2i") == r["point"]


def test_sample():
    pts = horo.sample(4, "1/3", "1/10")
    assert len(pts) == 4
    assert pts[1] == (Fraction(1, 3) + Fraction(1, 4), Fraction(1, 10))
    assert len(horo.sample(12, 0, "1/10", primitive=True)) == 4
    lo, hi, _ = horo.min_orbit_height(10, 0, "1/100")
    assert lo == hi


def test_cusps_and_index():
    cs = horo.cusps(3)
    assert len(cs) == horo.cusp_count(3) == 4
    assert sum(c["width"] for c in cs) == horo.index(3)
    assert horo.gamma_n_contains(3, [[2, 1], [9, 5]])


def test_hecke_constant():
    # T_n 1 = sigma_1(n) / sqrt(n)
    assert horo.hecke(6, "const:1", "1/5+2i") == pytest.approx(12 / 6 ** 0.5)
    assert horo.hecke(3, "const:1", "1/5+2i", kind="double") == pytest.approx(1.0)
    assert horo.nu(4) == 24


def test_experiments_and_certificates(tmp_path):
    rec = horo.run_experiment("symmetry", {"m": 1, "k": 2, "l": 1, "n": 3, "j": 1, "y": "1/5"})
    assert not rec.get("errors")
    cert = rec["certificate"]
    assert horo.verify_certificate(cert)["pass"]
    cert["gamma"][0][1] = str(int(cert["gamma"][0][1]) + 1)
    assert not horo.verify_certificate(cert)["pass"]

    cfg = {"seed": 3, "experiments": [{"id": "c", "type": "cusps", "params": {"n": 3}}]}
    out = horo.run(cfg, str(tmp_path))
    assert out["status"] == 0
    assert (tmp_path / "c.csv").exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest == out["manifest"]
    assert horo.run({"experiments": [{"id": "x", "type": "cusps", "params": {"n": "q"}}]})["status"] == 2


def test_errors_and_hash():
    with pytest.raises(horo.PreconditionError):
        horo.sample(0, 0, 1)
    assert horo.content_hash(b"") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391"
    assert "cusps" in horo.experiment_types()
