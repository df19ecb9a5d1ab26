import json
import subprocess
import sys

import pytest

from surfsing.cli import main
from surfsing.rates import rate_graph_from_json

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def shell(*argv, stdin=None):
    return subprocess.run([sys.executable, "-m", "surfsing", *argv], input=stdin,
                          capture_output=True, text=True, check=False)


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", str(DATA / "e8.graph"))
    assert code == 0 and json.loads(out)["negative_definite"]


def test_validate_not_negative_definite(capsys):
    code, _, err = run(capsys, "validate", str(DATA / "notnegdef.graph"))
    assert code == 1
    assert json.loads(err)["error"]["kind"] == "not_negative_definite"


def test_parse_error_is_structured(tmp_path, capsys):
    p = tmp_path / "bad.graph"
    p.write_text("vertex 1 euler=-2\nedge 1 5\n")
    code, _, err = run(capsys, "validate", str(p))
    e = json.loads(err)["error"]
    assert code == 1 and e["kind"] == "dangling_reference" and e["line"] == 2


def test_missing_file_is_usage_error(capsys):
    code, _, _ = run(capsys, "validate", "/nonexistent/x.graph")
    assert code == 2


def test_usage_error_exit_code():
    assert shell("decompose").returncode == 2
    assert shell("--version").stdout.startswith("surfsing ")


def test_cycles_table(capsys):
    code, out, _ = run(capsys, "cycles", str(DATA / "e8.graph"), "--table", "--label", "x", "--label", "z")
    assert code == 0
    assert out.splitlines()[1].split() == ["x:", "15", "12", "9", "6", "3", "10", "5", "8"]


def test_cycles_gap(capsys):
    code, out, _ = run(capsys, "cycles", str(DATA / "e8.graph"), "--label", "fx", "--label", "fy",
                       "--label", "fz", "--gap", "8")
    assert json.loads(out)["lower_bound"] == 2


def test_decompose_json_and_dot(capsys):
    code, out, _ = run(capsys, "decompose", str(DATA / "e8.graph"))
    d = json.loads(out)
    assert code == 0 and (len(d["thick"]), len(d["thin"])) == (1, 1) and d["conical"] is False
    code, out, _ = run(capsys, "decompose", "--dot", str(DATA / "e8.graph"))
    assert out.startswith("graph G {") and "cluster_0" in out


def test_family_pipeline():
    g = shell("family", "A", "5", "--emit", "graph")
    r = shell("decompose", "-", stdin=g.stdout)
    assert r.returncode == 0
    assert json.loads(r.stdout)["summary"] == "2 thick, 1 thin"


def test_family_expected(capsys):
    code, out, _ = run(capsys, "family", "D", "7", "--emit", "expected")
    assert json.loads(out)["rates"] == [["thick", "1/1"], ["thin-Seifert", "5/2"]]
    code, _, err = run(capsys, "family", "D", "2")
    assert code == 1 and json.loads(err)["error"]["kind"] == "bad_parameters"


def test_rates(capsys):
    code, out, _ = run(capsys, "rates", str(DATA / "superisolated.graph"), "--aux", "x+y")
    r = json.loads(out)["rates"]
    assert r["4"] == r["6"] == "6/5" and "5" not in r
    code, out, _ = run(capsys, "rates", str(DATA / "superisolated.graph"), "--aux", "x+y", "--all")
    assert json.loads(out)["rates"]["5"] == "5/4"


def test_gamma0_round_trip(capsys):
    extra = [a for v in range(8, 13) for a in ("--rate", f"{v}=3/2")]
    code, out, _ = run(capsys, "gamma0", str(DATA / "superisolated.graph"), "--aux", "x+y", *extra)
    d = json.loads(out)
    assert code == 0 and d["violations"] == []
    assert sorted(p["q"] for p in d["pieces"]) == sorted(["1/1"] * 2 + ["6/5"] * 2 + ["5/4"] + ["3/2"] * 5)
    d.pop("violations")
    assert rate_graph_from_json(d).to_json() == d


def test_gamma0_missing_rate(capsys):
    code, _, err = run(capsys, "gamma0", str(DATA / "briancon_speder_t.graph"))
    assert code == 1 and json.loads(err)["error"]["kind"] == "missing_rate"


def test_carrousel_tree_and_reduce(capsys):
    code, out, _ = run(capsys, "carrousel", str(DATA / "carrousel_example.branches"))
    assert out.splitlines()[0] == "A(1,4/3)" and out.count("⊗") == 2
    code, out, _ = run(capsys, "carrousel", "--reduce", str(DATA / "polar_family_a2.branches"))
    kinds = [v["kind"] for v in json.loads(out)["vertices"]]
    assert sorted(kinds) == ["root", "root", "special-annular"]
    code, out, _ = run(capsys, "carrousel", "--reduce", "--dot", str(DATA / "polar_family_a2.branches"))
    assert out.startswith("digraph")


def test_cf_commands(capsys):
    assert json.loads(run(capsys, "cf", "eval", "3", "2", "2")[1])["value"] == "7/3"
    assert json.loads(run(capsys, "cf", "expand", "7", "3")[1])["entries"] == [3, 2, 2]
    assert run(capsys, "cf", "bamboo", "7", "3")[1].startswith("vertex 1 euler=-3")
    code, _, err = run(capsys, "cf", "eval", "1", "2")
    assert code == 1


def test_fastloop_commands(tmp_path, capsys):
    p = tmp_path / "b.graph"
    p.write_text(run(capsys, "cf", "bamboo", "7", "3")[1])
    assert json.loads(run(capsys, "fastloop", "check", str(p), "--cut", "1", "2")[1])["fast_loop"] is True
    lam = json.loads(run(capsys, "fastloop", "lambda", str(DATA / "core235.graph"), "--cut", "2", "4")[1])
    assert lam == {"cut": [2, 4], "lambda": 2, "nontrivial": True}
    lam = json.loads(run(capsys, "fastloop", "lambda", str(DATA / "e8.graph"), "--cut", "1", "8", "--label", "z")[1])
    assert lam["lambda"] == 0


def test_deterministic_output():
    a = shell("decompose", str(DATA / "superisolated.graph")).stdout
    b = shell("decompose", str(DATA / "superisolated.graph")).stdout
    assert a == b and a
