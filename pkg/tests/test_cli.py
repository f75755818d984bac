import json
import subprocess
import sys

from conftest import tribonacci_vector
from jperron.cf import Expansion, Tail, expansion_to_json
from jperron.scalars import vector_to_json

RATIONAL_THETA = '[["rat",[1,1]],["rat",[7,5]],["rat",[11,5]]]'


def run_cli(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "jperron.cli", *args],
        capture_output=True,
        text=True,
        input=stdin,
    )
    return proc


def test_expand_rational_terminates():
    proc = run_cli("expand", "--theta", RATIONAL_THETA, "--depth", "10")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["blocks"] == [[1, 2], [0, 2], [1, 2]]
    assert payload["tail"]["kind"] == "terminated"
    assert payload["theta"][0] == {"rat": [1, 1]}


def test_expand_depth_zero():
    proc = run_cli("expand", "--theta", RATIONAL_THETA, "--depth", "0",
                   "--budget-preperiod", "0", "--budget-period", "0")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["blocks"] == []


def test_expand_malformed_json_exit_1():
    proc = run_cli("expand", "--theta", "[[nope", "--depth", "3")
    assert proc.returncode == 1
    err = json.loads(proc.stderr)
    assert err["error"] == "parse"
    assert "position" in err


def test_expand_indeterminate_exit_2():
    theta = json.dumps(
        [["rat", [1, 1]], ["ivl", {"lo": [9, 10], "hi": [11, 10]}]]
    )
    proc = run_cli("expand", "--theta", theta, "--depth", "4")
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "indeterminate"


def test_expand_interval_mode_points():
    proc = run_cli(
        "expand", "--theta", '["1", "1.4", "2.2"]', "--mode", "interval",
        "--depth", "6",
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tail"]["kind"] == "terminated"


def test_expand_deterministic_bytes():
    a = run_cli("expand", "--theta", RATIONAL_THETA, "--depth", "10")
    b = run_cli("expand", "--theta", RATIONAL_THETA, "--depth", "10")
    assert a.stdout == b.stdout


def test_expand_periodic_tagging(tmp_path):
    theta = json.dumps(vector_to_json(tribonacci_vector()))
    proc = run_cli("expand", "--theta", theta, "--depth", "12")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["tail"] == {"kind": "periodic", "preperiod": 0, "period": [[1, 1]]}
    assert payload["blocks"] == [[1, 1]] * 12


def test_expand_batch_jobs(tmp_path):
    batch = [
        [["rat", [1, 1]], ["rat", [7, 5]]],
        [["rat", [1, 1]], ["rat", [10, 7]]],
    ]
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(batch))
    seq = run_cli("expand", "--input", str(path), "--depth", "12")
    par = run_cli("expand", "--input", str(path), "--depth", "12", "--jobs", "2")
    assert seq.returncode == par.returncode == 0
    assert seq.stdout == par.stdout
    out = json.loads(seq.stdout)
    assert [e["blocks"] for e in out] == [[[1], [2], [2]], [[1], [2], [3]]]


def test_round_trip_expand_bratteli_represent(tmp_path):
    theta = json.dumps(vector_to_json(tribonacci_vector()))
    expand = run_cli("expand", "--theta", theta, "--depth", "8")
    path = tmp_path / "exp.json"
    path.write_text(expand.stdout)

    brat = run_cli("bratteli", "--input", str(path))
    assert brat.returncode == 0
    diagram = json.loads(brat.stdout)
    assert diagram["diagram"]["levels"] == 8
    assert diagram["blocks"] == json.loads(expand.stdout)["blocks"]

    rep = run_cli("represent", "--input", str(path))
    assert rep.returncode == 0
    payload = json.loads(rep.stdout)
    assert payload["rank"] == 3
    assert payload["report"]["stationary"] is True


def test_bratteli_dot_output(tmp_path):
    path = tmp_path / "exp.json"
    exp = Expansion(rank=3, blocks=((1, 2),), tail=Tail.truncated())
    path.write_text(json.dumps(expansion_to_json(exp)))
    proc = run_cli("bratteli", "--input", str(path), "--format", "dot")
    assert proc.returncode == 0
    assert proc.stdout.startswith("digraph")
    assert proc.stdout.count("root ->") == 3


def test_bratteli_compare(tmp_path):
    a = Expansion(rank=3, blocks=((1, 1),) * 2, tail=Tail.periodic(0, [(1, 1)]))
    b = Expansion(
        rank=3, blocks=((3, 4), (1, 1), (1, 1)), tail=Tail.periodic(1, [(1, 1)])
    )
    c = Expansion(rank=3, blocks=((1, 2),) * 2, tail=Tail.periodic(0, [(1, 2)]))
    paths = {}
    for name, e in (("a", a), ("b", b), ("c", c)):
        p = tmp_path / (name + ".json")
        p.write_text(json.dumps(expansion_to_json(e)))
        paths[name] = str(p)
    eq = run_cli("bratteli", "--compare", paths["a"], paths["b"])
    assert eq.returncode == 0
    verdict = json.loads(eq.stdout)
    assert verdict["verdict"] == "equivalent" and verdict["offsets"] == [0, 1]
    ne = run_cli("bratteli", "--compare", paths["a"], paths["c"], "--format", "text")
    assert ne.returncode == 0
    assert "not equivalent" in ne.stdout


def test_represent_identity_action(tmp_path):
    job = {
        "rank": 3,
        "theta": [["rat", [1, 1]], ["rat", [7, 5]], ["rat", [11, 5]]],
        "generators": [
            {"name": "e", "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
        ],
        "relations": [[["e", 1], ["e", -1]]],
    }
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    proc = run_cli("represent", "--input", str(path))
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["matrices"]["e"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert all(
        entry["ok"]
        for entry in payload["report"]["entries"]
        if entry["kind"] in ("reconstruction", "relation")
    )


def test_represent_incompatible_tails_exit_3(tmp_path):
    theta = vector_to_json(tribonacci_vector())
    other = Expansion(rank=3, blocks=((1, 2),) * 2, tail=Tail.periodic(0, [(1, 2)]))
    job = {
        "rank": 3,
        "theta": theta,
        "generators": [{"name": "g", "expansion": expansion_to_json(other)}],
    }
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    proc = run_cli("represent", "--input", str(path))
    assert proc.returncode == 3
    assert json.loads(proc.stderr)["error"] == "no_common_tail"


def test_genus_command():
    assert json.loads(run_cli("genus", "2").stdout) == {"genus": 2, "rank": 6}
    assert run_cli("genus", "3", "--format", "text").stdout.strip() == "12"
    bad = run_cli("genus", "0")
    assert bad.returncode == 1
    assert json.loads(bad.stderr)["error"] == "invalid_genus"


def test_stdin_input():
    proc = run_cli("expand", "--input", "-", "--depth", "6", stdin=RATIONAL_THETA)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tail"]["kind"] == "terminated"


def test_missing_input_is_exit_1():
    proc = run_cli("expand", "--depth", "3")
    assert proc.returncode == 1


def test_nonpositive_theta_is_exit_1():
    proc = run_cli("expand", "--theta", '[["rat",[1,1]],["rat",[-1,2]]]', "--depth", "3")
    assert proc.returncode == 1


def test_text_formats(tmp_path):
    exp = run_cli("expand", "--theta", RATIONAL_THETA, "--depth", "6", "--format", "text")
    assert exp.returncode == 0
    assert "tail terminated" in exp.stdout

    job = {
        "rank": 2,
        "theta": [["rat", [1, 1]], ["rat", [7, 5]]],
        "generators": [{"name": "e", "matrix": [[1, 0], [0, 1]]}],
    }
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    rep = run_cli("represent", "--input", str(path), "--format", "text")
    assert rep.returncode == 0
    assert "certification" in rep.stdout and "e:" in rep.stdout
