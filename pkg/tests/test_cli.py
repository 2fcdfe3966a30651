import json
import subprocess
import sys

import pytest

from rmflab.cli import main, parse_int_list


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_grid():
    assert parse_int_list("1e2,1e3, 500,2.9") == [100, 1000, 500, 2]


def test_classify(capsys):
    code, out, _ = run(["classify", "--m", "5", "--set", "1"], capsys)
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "BoundedBelow" and d["witness"] is not None
    code, out, _ = run(["classify", "--m", "1", "--set", "1"], capsys)
    assert json.loads(out)["verdict"] == "Decay"
    code, out, _ = run(["classify", "--m", "4", "--set", "3"], capsys)
    d = json.loads(out)
    assert [c["exact"] for c in d["coefficients"]] == ["1/2", "-1/2"]


def test_domain_error_is_status_1(capsys):
    code, out, err = run(["classify", "--m", "4", "--set", "2"], capsys)
    assert code == 1 and out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["error"] == "InvalidArgument"


def test_usage_errors_are_status_2(capsys):
    for argv in (["bogus"], ["classify", "--m", "5"], ["simulate", "--model", "x"], ["bounds", "--nope"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2
    capsys.readouterr()


def test_simulate_stdout(capsys):
    code, out, err = run(["simulate", "--model", "residue", "--m", "1", "--x-grid", "5",
                          "--trials", "8", "--seed", "0"], capsys)
    lines = out.splitlines()
    assert code == 0 and err == ""
    assert lines[0] == "x,count,trials,p_hat,wilson_lo,wilson_hi,model,seed"
    row = lines[1].split(",")
    assert row[0] == "5" and row[1] == "0" and float(row[3]) == 0.0 and row[-1] == "0"


def test_simulate_manifest_replay(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = run(["simulate", "--model", "cyclotomic", "--n", "4", "--x-grid", "1e2,1e3",
                      "--trials", "30", "--seed", "12", "--out", str(out)], capsys)
    assert code == 0
    man = json.loads((tmp_path / "r.csv.manifest.json").read_text())
    assert man["seed"] == 12 and man["params"]["x_grid"] == [100, 1000]
    again = tmp_path / "again.csv"
    code, _, _ = run(["replay", str(tmp_path / "r.csv.manifest.json"), "--out", str(again)], capsys)
    assert code == 0 and again.read_bytes() == out.read_bytes()


def test_simulate_tau_and_steer_flags(capsys):
    code, out, _ = run(["simulate", "--model", "tau", "--x-grid", "10,100", "--trials", "5",
                        "--seed", "1"], capsys)
    assert code == 0 and out.splitlines()[1].endswith("tau:weight=11,1")
    code, out, _ = run(["simulate", "--model", "residue", "--m", "4", "--set", "3", "--x-grid", "100",
                        "--trials", "5", "--seed", "1", "--steer-z", "-0.3", "--steer-a", "3",
                        "--steer-m", "4"], capsys)
    assert code == 0
    with pytest.raises(SystemExit):
        main(["simulate", "--model", "residue", "--x-grid", "10", "--trials", "2", "--seed", "1",
              "--steer-z", "1"])
    capsys.readouterr()


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run(["simulate", "--model", "residue", "--x-grid", "10", "--trials", "2",
                        "--seed", "1", "--out", str(tmp_path / "missing" / "r.csv")], capsys)
    assert code == 1 and json.loads(err)["error"]


def test_splitting_steer_bounds_fixture(capsys):
    code, out, _ = run(["splitting", "--n", "4", "--pmax", "5"], capsys)
    assert out.splitlines() == ["p,v_p,e,f,r,norm", "2,2,2,1,1,2", "3,0,1,2,1,9", "5,0,1,1,2,5"]
    code, out, _ = run(["steer", "--z", "0", "--a", "0", "--m", "1", "--x", "100"], capsys)
    d = json.loads(out)
    assert d["turning_points"][0]["prime"] == 2 and d["turning_points"][1]["prime"] == 5
    code, out, _ = run(["steer", "--z", "9", "--a", "1", "--m", "4", "--x", "100"], capsys)
    assert code == 1
    code, out, _ = run(["bounds", "--x-grid", "1e6", "--C", "1"], capsys)
    assert out.splitlines()[0] == "x,C,decay_reference"
    code, out, _ = run(["tau-fixture", "--n", "6"], capsys)
    assert out.split() == ["1", "-24", "252", "-1472", "4830", "-6048"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "rmflab", "classify", "--m", "1", "--set", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["verdict"] == "Decay"
