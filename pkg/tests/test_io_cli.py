import json
from fractions import Fraction

import pytest

from vrmorse.cli import run
from vrmorse.io import parse_generator, read_cayley_edges, read_distance_matrix, read_point_cloud


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_read_point_cloud(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("x,y,name\n0,0,a\n3,4,b\n")
    sp = read_point_cloud(p)
    assert sp.labels == ("a", "b")
    assert sp.real(sp.levels[1]) == pytest.approx(5)
    q = tmp_path / "bare.csv"
    q.write_text("0,0\n1,0\n# comment\n0,1\n")
    assert read_point_cloud(q).n == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0\n1,0,2\n")
    with pytest.raises(ValueError):
        read_point_cloud(bad)


def test_read_distance_matrix(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("a,b,c\n0,1/3,2/3\n1/3,0,1/3\n2/3,1/3,0\n")
    sp = read_distance_matrix(p)
    assert sp.labels == ("a", "b", "c")
    assert list(sp.levels) == [0, Fraction(1, 3), Fraction(2, 3)]
    p.write_text("0,1\n1,0,2\n")
    with pytest.raises(ValueError):
        read_distance_matrix(p)


def test_read_cayley_edges(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("u,v,generator\n0,1,a\n1,2,a\n2,0,a\n")
    assert read_cayley_edges(p) == ((0, 1, "a"), (1, 2, "a"), (2, 0, "a"))


def test_parse_generator():
    assert parse_generator("circle:12").n == 12
    assert parse_generator("lattice:2:4").n == 16
    assert parse_generator("sphere:2").n == 4
    with pytest.raises(ValueError):
        parse_generator("torus:3")


def test_validate_and_bad_generator(capsys):
    code, out, _ = _run(capsys, "validate", "--gen", "circle:6")
    assert code == 0 and json.loads(out)["result"]["ok"]
    code, _, err = _run(capsys, "validate", "--gen", "nope:1")
    assert code == 1 and "bad input" in err
    code, _, err = _run(capsys, "validate")
    assert code == 1


def test_validate_broken_metric(tmp_path, capsys):
    p = tmp_path / "d.csv"
    p.write_text("0,1,5\n1,0,1\n5,1,0\n")
    code, out, _ = _run(capsys, "validate", "--matrix", str(p), "--strict")
    assert code == 2
    assert json.loads(out)["result"]["problems"][0]["kind"] == "triangle"


def test_simplices_jsonl(capsys):
    code, out, _ = _run(capsys, "simplices", "--gen", "circle:12", "--scale", "1/6", "--max-dim", "2")
    lines = out.strip().splitlines()
    head = json.loads(lines[0])
    assert code == 0 and head["result"]["f_vector"] == [12, 24, 12]
    assert len(lines) == 1 + 48


def test_dlink(capsys):
    code, out, _ = _run(capsys, "dlink", "--gen", "circle:12", "--simplex", "0,4,8", "--strict")
    data = json.loads(out)
    assert code == 2 and data["result"]["kind"] == "NONTRIVIAL" and data["result"]["betti"] == [2]
    code, out, _ = _run(capsys, "dlink", "--gen", "circle:12", "--simplex", "0,2,10")
    assert code == 0 and json.loads(out)["result"]["z"] == 0


def test_criteria_and_strict(capsys):
    code, out, _ = _run(capsys, "criteria", "--gen", "circle:12", "--scales", "1/6,1/4")
    res = json.loads(out)["result"]
    assert code == 0 and [r["status"] for r in res] == ["CERTIFIED", "CERTIFIED"]
    code, out, _ = _run(capsys, "criteria", "--gen", "circle:12", "--strict")
    assert code == 2
    res = json.loads(out)["result"]
    assert res[3]["scale"] == "1/3" and res[3]["refuting_subset"] == [0, 4, 8]


def test_persistence(capsys):
    code, out, _ = _run(capsys, "persistence", "--gen", "circle:12", "--betti-dim", "2", "--strict")
    res = json.loads(out)["result"]
    assert code == 0 and res["cross_validate"]["passed"]
    assert res["intervals"][0]["left"] == "1/12(open)"


def test_forman(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"simplices": [[0], [1], [0, 1]], "h": [0, 2, 1]}))
    code, out, _ = _run(capsys, "forman", "--input", str(p), "--strict")
    assert code == 0 and json.loads(out)["result"]["valid"]
    p.write_text(json.dumps({"simplices": [[0], [1], [0, 1]], "h": [2, 3, 1]}))
    code, out, _ = _run(capsys, "forman", "--input", str(p), "--strict")
    assert code == 2


def test_group(tmp_path, capsys):
    code, out, _ = _run(capsys, "group", "--spec", "free_group:2", "--radius", "6", "--scale", "2,3",
                        "--combing", "prefix")
    res = json.loads(out)["result"]
    assert code == 0 and [c["status"] for c in res["checks"]] == ["CERTIFIED", "CERTIFIED"]
    assert res["combing"]["passed"]
    e = tmp_path / "c8.csv"
    e.write_text("".join(f"{i},{(i + 1) % 8},a\n" for i in range(8)))
    code, out, _ = _run(capsys, "group", "--spec", "explicit", "--edges", str(e), "--identity", "0",
                        "--radius", "4", "--scale", "4", "--strict")
    assert code == 2 and json.loads(out)["result"]["ball_size"] == 8


def test_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["persistence", "--gen", "circle:12", "--betti-dim", "2", "--out", str(p)]) == 0
    assert a.read_text() == b.read_text()
    data = json.loads(a.read_text())
    assert data["config"]["betti_dim"] == 2 and len(data["input_hash"]) >= 16


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_subset": 3, "scales": "1/4"}))
    code, out, _ = _run(capsys, "criteria", "--gen", "circle:12", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and data["config"]["max_subset"] == 3 and len(data["result"]) == 1
    code, out, _ = _run(capsys, "criteria", "--gen", "circle:12", "--config", str(cfg), "--scales", "1/6,1/4")
    assert len(json.loads(out)["result"]) == 2
    cfg.write_text("[1, 2]")
    assert _run(capsys, "criteria", "--gen", "circle:12", "--config", str(cfg))[0] == 1


def test_budget(monkeypatch, capsys):
    code, _, err = _run(capsys, "simplices", "--gen", "circle:12", "--scale", "1/2", "--max-dim", "4",
                        "--budget", "50")
    assert code == 1 and "budget" in err
    monkeypatch.setenv("VRMORSE_BUDGET", "50")
    code, _, err = _run(capsys, "simplices", "--gen", "circle:12", "--scale", "1/2", "--max-dim", "4")
    assert code == 1 and "budget" in err
    code, _, _ = _run(capsys, "simplices", "--gen", "circle:12", "--scale", "1/2", "--max-dim", "4",
                      "--budget", "0")
    assert code == 1


def test_unknown_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["criteria", "--bogus"])
    assert exc.value.code == 1


def test_persistence_table(tmp_path, capsys):
    import csv

    t = tmp_path / "table.csv"
    code, _, _ = _run(capsys, "persistence", "--gen", "circle:12", "--betti-dim", "2", "--table", str(t))
    rows = list(csv.DictReader(t.open()))
    assert code == 0 and [r["scale"] for r in rows] == ["1/12", "1/6", "1/4", "1/3", "5/12", "1/2"]
    assert rows[1] == {"scale": "1/6", "real": "0.166666666667", "status": "CERTIFIED", "interval": "0",
                       "b0": "0", "b1": "1", "b2": "0"}
    assert rows[3]["b2"] == "3" and rows[3]["interval"] == ""
