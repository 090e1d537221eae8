from __future__ import annotations

import json
import subprocess
import sys

import pytest

from dualbill.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_verify_d(capsys):
    code, out = run(capsys, "verify", "--spec", '{"kind":"d"}', "--samples", "100", "--seed", "7")
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == "1"
    assert data["report"]["failures"] == 0
    assert data["report"]["checked"] > 0


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--spec", '{"kind":"b1"}', "--samples", "5", "--seed", "11")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_classify_outside_M(capsys):
    code, out = run(capsys, "classify", "--rho", "5/7")
    assert code == 0
    assert json.loads(out)["in_M"] is False


def test_classify_with_primitive(capsys):
    code, out = run(capsys, "classify", "--rho", "3/2", "--build-primitive")
    data = json.loads(out)
    assert code == 0
    assert data["primitive"]["c"] == ["-3"]


def test_residues_b1(capsys):
    code, out = run(capsys, "residues", "--spec", '{"kind":"b1"}')
    data = json.loads(out)
    assert code == 0
    assert data["poles"] == {"0": "3/2", "1": "1"}
    assert data["infinity"] == "3/2" and data["total"] == "4"


def test_spec_from_file(capsys, tmp_path):
    path = tmp_path / "c1.json"
    path.write_text('{"kind": "c1"}')
    code, out = run(capsys, "residues", "--spec", str(path))
    assert code == 0
    assert json.loads(out)["infinity"] == "0"


def test_catalog_lists_every_kind(capsys):
    code, out = run(capsys, "catalog")
    kinds = [e["spec"]["kind"] for e in json.loads(out)["entries"]]
    assert code == 0
    for k in ("b1", "b2", "c1", "c2", "d"):
        assert k in kinds


@pytest.mark.parametrize("fmt", ["json", "csv", "svg"])
def test_simulate_formats(capsys, fmt):
    code, out = run(
        capsys, "simulate", "--field", '{"field":"a","rho":"4/3"}', "--x", "1,1", "--v", "3,0", "--steps", "4", "--format", fmt
    )
    assert code == 0
    if fmt == "json":
        assert json.loads(out)["trajectory"]["schema"] == "1"
    elif fmt == "csv":
        assert out.splitlines()[0].startswith("step,x1,x2,v1,v2")
    else:
        assert out.startswith("<svg")


def test_simulate_to_file(capsys, tmp_path):
    target = tmp_path / "traj.json"
    code, _ = run(capsys, "--output", str(target), "simulate", "--field", '{"field":"c1"}', "--x", "2,4", "--v=-1,0")
    assert code == 0
    assert json.loads(target.read_text())["passed"] is True


def test_dualize_both_ways(capsys):
    code, out = run(capsys, "dualize", "--spec", '{"kind":"c1"}')
    assert code == 0 and json.loads(out)["constant"] == "64"
    code, out = run(capsys, "dualize", "--field", '{"field":"a","rho":"8/3"}')
    assert code == 0 and json.loads(out)["spec"]["rho"] == "8/3"


def test_hessian_spec(capsys):
    code, out = run(capsys, "hessian", "--spec", '{"kind":"b1"}')
    data = json.loads(out)
    assert code == 0
    assert data["origin_residue"] == "3/2"
    assert data["ode"]["passed"]


def test_equiv(capsys):
    code, out = run(capsys, "equiv", "--case", "b")
    assert code == 0
    assert json.loads(out)["constant"] == "1"


def test_approx_rendering(capsys):
    code, out = run(capsys, "--approx", "residues", "--spec", '{"kind":"d"}')
    assert code == 0
    assert json.loads(out)["infinity"].startswith("1.66666")


def test_config_errors_exit_2(capsys):
    code, out = run(capsys, "verify", "--spec", "{oops")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "ConfigError"
    code, _ = run(capsys, "verify", "--spec", '{"kind":"zz"}')
    assert code == 2
    code, _ = run(capsys, "verify", "--spec", '{"kind":"d"}', "--samples", "0")
    assert code == 2


def test_library_errors_exit_1(capsys):
    code, out = run(capsys, "classify", "--rho", "5/7", "--build-primitive")
    assert code == 1
    assert json.loads(out)["error"]["type"] == "NotPrimitive"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dualbill", "classify", "--rho", "4/3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["m"] == -3
