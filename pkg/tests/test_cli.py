import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from tpsig.cli import SWEEP_COLUMNS, main
from tpsig.constructions import construct_gauss
from tpsig.signals import profile, set_from_json, set_to_json, standard_basis


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_sweep(path):
    lines = open(path).read().splitlines()
    assert lines[0].startswith("# tpsig-sweep/")
    rows = list(csv.DictReader(lines[1:]))
    assert list(rows[0].keys()) == SWEEP_COLUMNS
    return rows


def test_construct_gauss_stdout(capsys):
    code, out, _ = run(capsys, "construct", "gauss", "--p", "2", "--m", "2")
    d = json.loads(out)
    assert code == 0 and d["n"] == 3 and d["M"] == 1
    assert d["meta"]["construction"] == "gauss"


def test_construct_cyclotomic(capsys, tmp_path):
    out = tmp_path / "c.json"
    code, _, _ = run(capsys, "construct", "cyclotomic", "--p", "13", "--m", "1", "--e", "3", "--out", str(out))
    d = json.loads(out.read_text())
    assert code == 0 and (d["n"], d["M"]) == (4, 3)
    assert d["meta"]["e"] == 3


def test_construct_e1_routes_to_gauss(capsys):
    code, out, _ = run(capsys, "construct", "cyclotomic", "--p", "5", "--m", "1", "--e", "1")
    assert code == 0 and json.loads(out)["meta"]["construction"] == "gauss"


@pytest.mark.parametrize("argv,needle", [
    (["construct", "cyclotomic", "--p", "7", "--m", "1", "--e", "5"], "e must divide q-1"),
    (["construct", "gauss", "--p", "4", "--m", "1"], "not prime"),
    (["construct", "gauss", "--p", "2", "--m", "1"], "q >= 3"),
    (["construct", "cyclotomic", "--p", "7", "--m", "1"], "--e"),
    (["construct", "hadamard", "--p", "7", "--m", "1"], "invalid choice"),
])
def test_construct_bad_parameters(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert needle in err and err.count("\n") == 1


def test_eval_q4(capsys, tmp_path):
    path = write(tmp_path, "g.json", set_to_json(construct_gauss(2, 2)))
    code, out, _ = run(capsys, "eval", "--in", path)
    assert code == 0 and "lambda     0.666666667" in out
    code, out, _ = run(capsys, "eval", "--in", path, "--format", "json")
    d = json.loads(out)
    assert abs(d["lambda"] - 2 / 3) < 1e-9
    assert d["witness_lambda"] == [0, 0, 1, 1]
    assert abs(d["papr_max"] - 3**-0.5) < 1e-12


def test_eval_basis_fixture(capsys, tmp_path):
    path = write(tmp_path, "e.json", set_to_json(standard_basis(4)))
    code, out, _ = run(capsys, "eval", "--in", path, "--format", "json")
    assert code == 0 and json.loads(out)["nu"] == 0


def test_eval_zero_signal(capsys, tmp_path):
    path = write(tmp_path, "z.json", '{"n":2,"M":2,"signals":[[[1,0],[0,0]],[[0,0],[0,0]]]}')
    code, _, err = run(capsys, "eval", "--in", path)
    assert code == 3 and "index 1" in err and "norm 0" in err


@pytest.mark.parametrize("text", ["{", '{"n": 3}', "[]"])
def test_eval_malformed(capsys, tmp_path, text):
    code, _, _ = run(capsys, "eval", "--in", write(tmp_path, "bad.json", text))
    assert code == 2


def test_eval_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", "--in", str(tmp_path / "nope.json"))
    assert code == 2


def test_bounds_examples(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "3", "--m", "1", "--format", "json")
    d = json.loads(out)
    w1 = [e for e in d["entries"] if e["bound_name"] == "welch_timephase_k1"][0]
    assert code == 0 and abs(w1["value"] - 0.5) < 1e-12
    code, out, _ = run(capsys, "bounds", "--n", "4", "--m", "2", "--format", "csv")
    rows = list(csv.DictReader(out.splitlines()))
    lv = [r for r in rows if r["bound_name"] == "levenstein_timephase"][0]
    assert abs(float(lv["value"]) - 0.560612) < 1e-6 and lv["applicable"] == "true"
    code, out, _ = run(capsys, "bounds", "--n", "4", "--m", "2")
    assert "levenstein_timephase" in out and "0.560611911" in out


def test_bounds_with_lambda(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "3", "--m", "1", "--alphabet", "qary", "--lam", "0.6666666666666666")
    assert code == 0 and "verdict = optimal" in out


@pytest.mark.parametrize("argv", [
    ["bounds", "--n", "3", "--m", "0"],
    ["bounds", "--n", "1", "--m", "2"],
    ["bounds", "--n", "3", "--m", "2", "--k", "0"],
    ["bounds", "--n", "3", "--m", "2", "--lam", "1.5"],
    ["bounds", "--n", "x", "--m", "2"],
])
def test_bounds_bad_grid(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bridge_full_check(capsys, tmp_path):
    src = write(tmp_path, "g.json", set_to_json(construct_gauss(2, 2)))
    out = tmp_path / "b.json"
    code, text, _ = run(capsys, "bridge", "--in", src, "--kind", "full", "--out", str(out), "--check")
    assert code == 0
    diff = float(text.split("abs_diff")[1].split()[0])
    assert diff < 1e-9
    T = set_from_json(out.read_text())
    assert (T.n, T.M) == (3, 9)


def test_bridge_phase(capsys, tmp_path):
    src = write(tmp_path, "g.json", set_to_json(construct_gauss(2, 2)))
    out = tmp_path / "p.json"
    code, text, _ = run(capsys, "bridge", "--in", src, "--kind", "phase", "--out", str(out), "--check")
    T = set_from_json(out.read_text())
    assert code == 0 and (T.n, T.M) == (3, 3)
    assert abs(profile(T).theta - 2 / 3) < 1e-9
    assert "target_theta" in text


def test_bridge_duplicates_exit_3(capsys, tmp_path):
    row = [[0.5 ** 0.5, 0], [0.5 ** 0.5, 0]]
    src = write(tmp_path, "d.json", json.dumps({"n": 2, "M": 2, "signals": [row, row]}))
    code, _, err = run(capsys, "bridge", "--in", src, "--kind", "full", "--out", str(tmp_path / "x.json"))
    assert code == 3 and "lambda" in err


def test_bridge_check_failure_exit_4(capsys, tmp_path, monkeypatch):
    import tpsig.cli as cli

    src = write(tmp_path, "g.json", set_to_json(construct_gauss(2, 2)))
    monkeypatch.setattr(cli, "nu_of", lambda T: (0.5, None))
    code, _, err = run(capsys, "bridge", "--in", src, "--kind", "full", "--out", str(tmp_path / "b.json"), "--check")
    assert code == 4 and "check failed" in err


def test_sweep_gauss_16(capsys, tmp_path):
    out = tmp_path / "s.csv"
    assert run(capsys, "sweep", "--construction", "gauss", "--q-max", "16", "--out", str(out))[0] == 0
    rows = read_sweep(out)
    assert [int(r["p"]) ** int(r["m"]) for r in rows] == [4, 5, 7, 8, 9, 11, 13, 16]
    assert all(r["verdict"] == "optimal" for r in rows)
    assert all(r["runtime_ms"] == "" for r in rows)


def test_sweep_cyclotomic(capsys, tmp_path):
    out = tmp_path / "c.csv"
    assert run(capsys, "sweep", "--construction", "cyclotomic", "--q-max", "13", "--e-max", "4", "--out", str(out))[0] == 0
    rows = read_sweep(out)
    keys = [(int(r["p"]), int(r["m"]), int(r["e"])) for r in rows]
    assert (13, 1, 3) in keys
    assert keys == sorted(keys, key=lambda k: (k[0] ** k[1], k[2]))
    assert all(int(k[2]) <= 4 for k in keys)


def test_sweep_q3(capsys, tmp_path):
    out = tmp_path / "g3.csv"
    assert run(capsys, "sweep", "--construction", "gauss", "--q-max", "3", "--out", str(out))[0] == 0
    rows = read_sweep(out)
    assert len(rows) == 1 and (rows[0]["p"], rows[0]["n"]) == ("3", "2")


def test_sweep_guard(capsys, tmp_path):
    assert run(capsys, "sweep", "--construction", "gauss", "--q-max", "513", "--out", str(tmp_path / "x"))[0] == 2


def test_sweep_timing(capsys, tmp_path):
    out = tmp_path / "t.csv"
    run(capsys, "sweep", "--construction", "gauss", "--q-max", "5", "--out", str(out), "--timing")
    assert all(float(r["runtime_ms"]) >= 0 for r in read_sweep(out))


def test_round_trip(capsys, tmp_path):
    out = tmp_path / "c.json"
    run(capsys, "construct", "cyclotomic", "--p", "3", "--m", "3", "--e", "2", "--out", str(out))
    _, text, _ = run(capsys, "eval", "--in", str(out), "--format", "json")
    from tpsig.constructions import construct_cyclotomic

    assert abs(json.loads(text)["lambda"] - profile(construct_cyclotomic(3, 3, 2)).lam) <= 1e-12


def test_deterministic_bytes(tmp_path):
    def go(tag, threads):
        env = {"TPSIG_THREADS": str(threads), "PATH": "/usr/bin:/bin"}
        files = {}
        for name, argv in {
            "c.json": ["construct", "cyclotomic", "--p", "13", "--m", "1", "--e", "3"],
            "s.csv": ["sweep", "--construction", "cyclotomic", "--q-max", "32"],
        }.items():
            path = tmp_path / f"{tag}-{name}"
            subprocess.run([sys.executable, "-m", "tpsig", *argv, "--out", str(path)], check=True, env=env)
            files[name] = path.read_bytes()
        b = subprocess.run([sys.executable, "-m", "tpsig", "bounds", "--n", "5", "--m", "3", "--format", "json"],
                           check=True, env=env, capture_output=True).stdout
        e = subprocess.run([sys.executable, "-m", "tpsig", "eval", "--in", str(tmp_path / f"{tag}-c.json"),
                            "--format", "json"], check=True, env=env, capture_output=True).stdout
        return files, b, e

    assert go("a", 1) == go("b", 4)


def test_module_entry_exit_code(tmp_path):
    r = subprocess.run([sys.executable, "-m", "tpsig", "bounds", "--n", "3", "--m", "0"], capture_output=True)
    assert r.returncode == 2 and r.stderr.startswith(b"tpsig: error:")
