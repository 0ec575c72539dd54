from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from siegellab.cli import COMMANDS, canonical, cmatrix_from_json, cmatrix_to_json, qi_str, run
from siegellab.expansion import FourierExpansion
from siegellab.jacobi import JacobiFormExpansion

import numpy as np
from fractions import Fraction


def invoke(argv, stdin: str | None = None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None), out


def shell(argv, stdin: str | None = None):
    return subprocess.run([sys.executable, "-m", "siegellab", *argv], input=stdin, capture_output=True, text=True)


def test_all_commands_registered():
    assert set(COMMANDS) == {
        "reduce", "volume", "distance", "cayley", "torus-ip", "theta", "theta-const", "chi10", "eisenstein",
        "phi", "hecke", "satake", "fj", "vlift", "maass-check", "euler", "sk-check",
    }


def test_volume(monkeypatch, capsys):
    code, env, _ = invoke(["volume", "--genus", "2"], monkeypatch=monkeypatch, capsys=capsys)
    assert code == 0
    assert env["outputs"]["rational"] == "1/270" and env["outputs"]["pi_power"] == 3
    assert env["command"] == ["volume", "--genus", "2"] and len(env["inputs_digest"]) == 64


def test_reduce_example(monkeypatch, capsys):
    point = json.dumps({"X": [["3/10"]], "Y": [["2/5"]]})
    code, env, _ = invoke(["reduce", "--mode", "siegel"], point, monkeypatch, capsys)
    assert code == 0
    assert env["outputs"]["reduced"]["entries"] == [["(-1+8i)/5"]]


def test_reduce_minkowski(tmp_path, monkeypatch, capsys):
    path = tmp_path / "y.json"
    path.write_text(json.dumps({"g": 2, "rows": [["5", "4"], ["4", "5"]]}))
    code, env, _ = invoke(["reduce", "--mode", "minkowski", "--in", str(path)], monkeypatch=monkeypatch, capsys=capsys)
    assert code == 0 and env["outputs"]["reduced"]["rows"] == [["2", "1"], ["1", "5"]]


def test_chi10_hecke_pipeline():
    first = shell(["chi10", "--bound", "8"])
    assert first.returncode == 0
    second = shell(["hecke", "--op", "T(p)", "--p", "2"], first.stdout)
    assert second.returncode == 0, second.stderr
    assert json.loads(second.stdout)["outputs"]["eigenvalue"] == "240"


def test_bound6_pipeline_reports_truncation():
    first = shell(["chi10", "--bound", "6"])
    second = shell(["hecke", "--op", "T(p)", "--p", "2"], first.stdout)
    assert second.returncode == 3
    assert "8" in second.stderr


def test_exit_codes(monkeypatch, capsys):
    assert run(["nonsense"]) == 2
    assert run(["volume"]) == 2
    assert run(["satake", "--genus", "2", "--k", "10", "--p", "2", "--ev", "240,-153600,1"]) == 4
    monkeypatch.setattr(sys, "stdin", io.StringIO("not json"))
    assert run(["phi"]) == 2
    monkeypatch.setenv("SIEGELLAB_THREADS", "zero")
    assert run(["volume", "--genus", "1"]) == 2
    capsys.readouterr()


def test_determinism():
    a = shell(["chi10", "--bound", "6"])
    b = shell(["chi10", "--bound", "6"])
    assert a.returncode == 0 and a.stdout == b.stdout


def test_roundtrip_expansion_and_jacobi(monkeypatch, capsys):
    code, env, _ = invoke(["chi10", "--bound", "8"], monkeypatch=monkeypatch, capsys=capsys)
    f = FourierExpansion.from_json_obj(env["outputs"])
    assert canonical(f.to_json_obj()) == canonical(env["outputs"])
    code, env2, _ = invoke(["fj", "--m", "1"], json.dumps(env), monkeypatch, capsys)
    assert code == 0
    phi = JacobiFormExpansion.from_json_obj(env2["outputs"])
    code, env3, _ = invoke(["vlift", "--bound", "6"], json.dumps(env2), monkeypatch, capsys)
    assert code == 0
    assert FourierExpansion.from_json_obj(env3["outputs"]) == f.truncate(6)
    assert phi.nmax == 3


def test_maass_check(monkeypatch, capsys):
    _, env, _ = invoke(["chi10", "--bound", "8"], monkeypatch=monkeypatch, capsys=capsys)
    code, out, _ = invoke(["maass-check"], json.dumps(env), monkeypatch, capsys)
    assert code == 0 and out["outputs"]["maass"] is True


def test_euler_and_sk(monkeypatch, capsys):
    ev = "240,-153600,16384"
    code, env, _ = invoke(["euler", "--type", "spinor", "--k", "10", "--p", "2", "--ev", ev],
                          monkeypatch=monkeypatch, capsys=capsys)
    assert code == 0
    assert env["outputs"]["coeffs"] == ["1", "-240", "-143360", "-31457280", "17179869184"]
    code, env, _ = invoke(["sk-check", "--k", "10", "--p", "2", "--ev", ev], monkeypatch=monkeypatch, capsys=capsys)
    assert code == 0 and env["outputs"]["holds"] is True and env["outputs"]["a_f"] == "-528"


def test_geometry_commands(monkeypatch, capsys):
    payload = {"omega0": cmatrix_to_json([[1j]]), "omega1": cmatrix_to_json([[3j]])}
    code, env, _ = invoke(["distance"], json.dumps(payload), monkeypatch, capsys)
    assert code == 0 and abs(env["outputs"]["distance"] - np.log(3)) < 1e-12
    code, env, _ = invoke(["cayley"], json.dumps({"w": cmatrix_to_json([[0.5j]])}), monkeypatch, capsys)
    omega = cmatrix_from_json(env["outputs"]["omega"])
    code, env, _ = invoke(["cayley", "--inverse"], json.dumps({"omega": cmatrix_to_json(omega)}), monkeypatch, capsys)
    assert abs(cmatrix_from_json(env["outputs"]["w"])[0, 0] - 0.5j) < 1e-12


def test_qi_str():
    assert qi_str(Fraction(-1, 5), Fraction(8, 5)) == "(-1+8i)/5"
    assert qi_str(Fraction(0), Fraction(2)) == "2i"
    assert qi_str(Fraction(1, 2), Fraction(-1, 3)) == "(3-2i)/6"


def test_cmatrix_roundtrip():
    m = np.array([[1 + 2j, 0.25], [0.25, -3j]])
    assert np.array_equal(cmatrix_from_json(json.loads(json.dumps(cmatrix_to_json(m)))), m)


def test_out_file(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert run(["volume", "--genus", "1", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["outputs"]["pi_power"] == 1
