from __future__ import annotations

import json

import pytest

from qcluster.cli import main
from qcluster.injchain import checkInjectiveReachable, injectives
from qcluster.qtorus import TorusElement
from qcluster.seeds import Seed

from fixtures import a2_seed, type_a_word


@pytest.fixture
def a2_file(tmp_path):
    path = tmp_path / "a2.json"
    path.write_text(json.dumps(a2_seed().to_json()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tropical_degree(capsys, a2_file):
    code, out, _ = run(capsys, "tropical", a2_file, "--seq", "1", "--deg", "-1,0")
    assert code == 0 and out.strip() == "1,0"


def test_mutate_expand_gives_injectives(capsys, a2_file):
    code, out, _ = run(capsys, "mutate", a2_file, "--seq", "1,2", "--expand")
    assert code == 0
    data = json.loads(out)
    s = a2_seed()
    got = [TorusElement.from_json(s.torus, v) for v in data["vars"]]
    want = injectives(s, checkInjectiveReachable(s, [2, 1], [1, 2]))
    assert got == want


def test_empty_sequence_echoes(capsys, a2_file):
    code, out, _ = run(capsys, "mutate", a2_file)
    assert code == 0
    assert Seed.from_json(json.loads(out)).same_pair(a2_seed())
    assert json.loads(out) == a2_seed().to_json()


def test_seed_check(capsys, a2_file):
    code, out, _ = run(capsys, "seed", "check", a2_file)
    assert code == 0 and json.loads(out)["D"] == [1, 1]


def test_exit_codes(capsys, a2_file, tmp_path):
    assert run(capsys, "injreach", a2_file, "--sigma", "1")[0] == 1
    assert run(capsys, "injreach", a2_file, "--sigma", "1,2")[0] == 0
    assert run(capsys, "mutate", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\"m\": 2,")
    code, _, err = run(capsys, "mutate", str(bad))
    assert code == 2 and "line 1" in err
    assert run(capsys, "mutate", a2_file, "--seq", "x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_run_reports(capsys, a2_file):
    code, out, _ = run(capsys, "run", a2_file, "--seq", "1,2,1,2,1")
    assert code == 0 and json.loads(out)["ok"]


def test_out_file_and_determinism(capsys, a2_file, tmp_path):
    paths = [tmp_path / f"r{n}.json" for n in range(2)]
    for p in paths:
        assert main(["--out", str(p), "mutate", a2_file, "--seq", "2,1,2", "--expand"]) == 0
    first, second = (p.read_bytes() for p in paths)
    assert first == second
    data = json.loads(first)
    assert json.loads(json.dumps(data, sort_keys=True, indent=2)) == data


def test_word_and_char(capsys, tmp_path):
    w = type_a_word()
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"word": w.written, "cartan": [list(r) for r in w.cartan]}))
    code, out, _ = run(capsys, "word", "build", str(path))
    assert code == 0
    json.loads(out)
    code, out, _ = run(capsys, "char", "kr", "--cartan", "2", "--i", "1", "--k", "1")
    assert code == 0
    assert [t["mono"] for t in json.loads(out)["terms"]] == [[[1, 0, 1]], [[1, 2, -1]]]
    args = ["char", "tsystem", "--cartan", "2,-1,0;-1,2,-1;0,-1,2", "--orientation", "2>1,2>3", "--i", "2", "--k", "3"]
    assert run(capsys, *args)[0] == 0
    assert run(capsys, *args[:-1], "1", "--window", "6")[0] == 2
