import json
import os
import subprocess
import sys

import pytest

from bergedecomp.cli import RunReport, main, parse_lengths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_lengths():
    assert parse_lengths("3,3,4") == [3, 3, 4]
    assert parse_lengths("38x3,37") == [38, 38, 38, 37]
    assert parse_lengths("") == []


def test_report_rejects_unknown_branch():
    with pytest.raises(ValueError):
        RunReport(input={}, branches=["nope"])


def test_decompose_writes_certificate(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code, stdout, _ = run(capsys, "decompose", "--n", "5", "--k", "4", "--mu", "1",
                          "--cycles", "2", "--paths", "3", "--seed", "7", "--out", str(out))
    assert code == 0
    report = json.loads(stdout)
    assert report["case"] == "case3" and report["seed"] == 7 and report["output"] == str(out)
    cert = json.loads(out.read_text())
    assert cert["n"] == 5 and len(cert["walks"]) == 2


def test_decompose_infeasible(capsys):
    code, _, err = run(capsys, "decompose", "--n", "6", "--k", "3", "--mu", "1", "--cycles", "21")
    assert code == 2
    assert json.loads(err)["status"] == "infeasible"


def test_decompose_dump_stages(tmp_path, capsys):
    stages = tmp_path / "stages"
    code, _, _ = run(capsys, "decompose", "--n", "9", "--k", "4", "--mu", "1",
                     "--cycles", "9x8,6", "--paths", "8x6", "--out", str(tmp_path / "c.json"),
                     "--dump-stages", str(stages))
    assert code == 0
    hc = json.loads((stages / "H_C.json").read_text())
    assert set(hc) == {"graph", "decomposition", "level_bounds", "branch", "details"}
    assert (stages / "H_P.json").exists() and (stages / "levels.json").exists()


@pytest.mark.parametrize("argv,code,payload", [
    (["check", "--mode", "pack", "--lambda", "1", "--n", "5", "--lengths", "3,3,3"], 1, {"r": 1}),
    (["check", "--mode", "admissible", "--lambda", "2", "--n", "3", "--lengths", "2,2,2"], 0,
     {"admissible": True}),
    (["check", "--mode", "path", "--lambda", "1", "--n", "4", "--lengths", "4"], 1, {"feasible": False}),
])
def test_check(capsys, argv, code, payload):
    got, stdout, _ = run(capsys, *argv)
    assert got == code
    data = json.loads(stdout)
    assert all(data[k] == v for k, v in payload.items())


@pytest.mark.parametrize("lengths,n,truth", [("3,3", 5, True), ("3,3,3", 5, False), ("3", 3, True)])
def test_oracle(capsys, lengths, n, truth):
    code, stdout, _ = run(capsys, "oracle", "--lambda", "1", "--n", str(n),
                          "--lengths", lengths, "--kind", "cycle")
    assert json.loads(stdout) is truth
    assert code == (0 if truth else 1)


def test_graph_decompose(capsys):
    code, stdout, _ = run(capsys, "graph-decompose", "--lambda", "1", "--n", "5",
                          "--lengths", "3,3,4", "--kind", "cycle", "--seed", "2")
    assert code == 0
    data = json.loads(stdout)
    assert sorted(len(w["edges"]) for w in data["walks"]) == [3, 3, 4]
    assert data["leave"] == []
    code, stdout, _ = run(capsys, "graph-decompose", "--lambda", "1", "--n", "5",
                          "--lengths", "3,3", "--mode", "pack")
    assert code == 0 and len(json.loads(stdout)["leave"]) == 4
    code, _, _ = run(capsys, "graph-decompose", "--lambda", "1", "--n", "5", "--lengths", "3,3,3")
    assert code == 2


def test_factorize(capsys):
    code, stdout, _ = run(capsys, "factorize", "--n", "4", "--mu", "1")
    assert code == 0 and len(json.loads(stdout)["classes"]) == 3


def test_verify_flags_bad_certificate(tmp_path, capsys):
    cert = tmp_path / "c.json"
    run(capsys, "decompose", "--n", "4", "--k", "3", "--cycles", "4", "--out", str(cert))
    code, stdout, _ = run(capsys, "verify", "--input", str(cert), "--cycles", "3", "--paths", "1")
    assert code == 1
    assert json.loads(stdout)["violations"][0]["code"] == "LengthMismatch"


def cli(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "bergedecomp.cli", *argv],
                          capture_output=True, text=True, env=env)


def test_round_trip_in_separate_processes(tmp_path):
    cert = tmp_path / "c.json"
    lists = ["--cycles", "12x8,5,7", "--paths", "11x2,2"]
    made = cli("decompose", "--n", "12", "--k", "10", "--mu", "2", *lists, "--out", str(cert))
    assert made.returncode == 0, made.stderr
    checked = cli("verify", "--input", str(cert), *lists)
    assert checked.returncode == 0 and json.loads(checked.stdout)["valid"]


def test_output_independent_of_hash_seed(tmp_path):
    outs = []
    for hs in ("0", "12345"):
        cert = tmp_path / f"c{hs}.json"
        env = dict(os.environ, PYTHONHASHSEED=hs)
        r = cli("decompose", "--n", "9", "--k", "4", "--cycles", "9x8,6", "--paths", "8x6",
                "--seed", "5", "--out", str(cert), env=env)
        assert r.returncode == 0, r.stderr
        outs.append(cert.read_bytes())
    assert outs[0] == outs[1]
