"""Command-line interface: output shape, exit codes and determinism."""

import json
import subprocess
import sys

import pytest

from kowtower.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_curves(capsys):
    code, out = run(capsys, "curves", "--H", "1", "--I2", "2")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "rk-1" and doc["command"] == "curves"
    # C1(1, 2) = 2x((x-1)^2 + 1/2)((x-1)^2 - 1/2) = 2x^5 - 8x^4 + 12x^3 - 8x^2 + 3/2 x
    assert doc["C1"]["f"] == ["0/1", "3/2", "-8/1", "12/1", "-8/1", "2/1"]


def test_richelot_relation_and_degenerate(capsys):
    code, out = run(capsys, "richelot", "--H", "3/2", "--I2", "5")
    doc = json.loads(out)
    assert code == 0 and doc["image_to_C1"]["translation"] == "-3/2"
    code, out = run(capsys, "richelot", "--H", "1/2", "--I2", "1")
    doc = json.loads(out)
    assert code == 1 and "4H² − I2 = 0" in doc["error"] and doc["kind"] == "CurveError"


def test_usage_errors_exit_2(capsys):
    for argv in (["curves", "--H", "1.5", "--I2", "5"], ["nonsense"],
                 ["verify", "mult2"], ["verify", "trace", "--H", "1", "--I2", "2", "--precision", "20"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_igusa_and_jacobian(capsys):
    code, out = run(capsys, "igusa", "--H", "1", "--I2", "2")
    assert code == 0 and json.loads(out)["isomorphic_C1_C2"] is False
    code, out = run(capsys, "jacobian", "--H", "1", "--I2", "2")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["G1_plus_G2_equals_G3"]


def test_verify_is_deterministic(capsys):
    argv = ["verify", "trace", "--H", "1", "--I2", "2", "--seed", "7", "--samples", "10"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b and json.loads(a)["pass"]


def test_verify_negative_control_and_spectral(capsys):
    code, out = run(capsys, "verify", "trace", "--H", "1", "--I2", "2", "--degree", "2", "--samples", "10")
    doc = json.loads(out)
    assert code == 0 and doc["negative_control"] and doc["pass"]
    code, out = run(capsys, "verify", "spectral", "--samples", "20")
    assert code == 0 and json.loads(out)["max_error"] <= 1e-10


def test_tower_to_file(tmp_path, capsys):
    out = tmp_path / "tower.json"
    code, _ = run(capsys, "tower", "--H", "1", "--I2", "2", "--depth", "3", "--mode", "exact",
                  "--samples", "3", "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0 and doc["depth"] == 3 and len(doc["edges"]) == 2


def test_top_simulate_jsonl(capsys):
    code, out = run(capsys, "top", "simulate", "--t-end", "0.01", "--dt", "1e-3", "--report", "jsonl")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 11
    assert set(rows[0]) == {"t", "l", "g", "H", "I1", "I2", "gnorm"}


def test_console_module_entry():
    proc = subprocess.run([sys.executable, "-m", "kowtower.cli", "curves", "--H", "1", "--I2", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "curves"


@pytest.mark.parametrize("curve", ["c1", "c2"])
def test_richelot_real_splitting_of_exact_curve(capsys, curve):
    code, out = run(capsys, "richelot", "--H", "3/2", "--I2", "5", "--curve", curve,
                    "--splitting", "paired-real-roots")
    doc = json.loads(out)
    assert code == 0 and "float" in doc["richelot"]["delta"]
