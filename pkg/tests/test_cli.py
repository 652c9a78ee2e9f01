import json
import subprocess
import sys

import pytest

from toric_nash.cli import run
from toric_nash.cone import Cone
from toric_nash.serialize import canonical_json, cone_from_dict, cone_to_dict
from toric_nash.fan import Fan


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def report(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def a2(tmp_path):
    return write(tmp_path, "an.json", {"lattice_rank": 2, "rays": [[1, 0], [1, 3]]})


def test_essential_divisors(a2, capsys):
    assert run(["essential-divisors", "--cone", a2]) == 0
    out = report(capsys)
    assert out["schema"] == "1"
    assert out["report"]["minimal_points"] == [[1, 1], [1, 2]]


def test_verify_consistent(a2, capsys):
    assert run(["verify", "--cone", a2, "--trials", "10", "--seed", "0"]) == 0
    assert report(capsys)["report"]["verdict"] == "consistent"


def test_qo(tmp_path, capsys):
    path = write(tmp_path, "branch.json", {"n": 2, "branches": [{"exponents": [["1/2", "1/2"]]}]})
    assert run(["qo", "--input", path]) == 0
    rep = report(capsys)["report"]
    assert rep["union"]["total"] == 1 and rep["branches"][0]["index"] == 2


def test_qo_unchecked_and_errors(tmp_path, capsys):
    path = write(tmp_path, "b.json", {"n": 2, "branches": [{"exponents": [["1/2", "1/2"], ["1/2", "1/2"]]}]})
    assert run(["qo", "--input", path]) == 2
    capsys.readouterr()
    assert run(["qo", "--input", path, "--unchecked"]) == 0
    assert report(capsys)["report"]["branches"][0]["lattice"]["index"] == 2


def test_other_commands(a2, capsys):
    assert run(["local-nash", "--cone", a2]) == 0
    assert len(report(capsys)["report"]["components"]) == 2
    assert run(["hilbert-basis", "--cone", a2]) == 0
    assert report(capsys)["report"]["hilbert_basis"] == [[1, 0], [1, 1], [1, 2], [1, 3]]
    assert run(["resolve", "--cone", a2]) == 0
    fan = Fan.from_dict(report(capsys)["report"]["fan"])
    assert fan.is_smooth()
    assert run(["arc-poset", "--cone", a2, "--points", "[[1,1],[1,2]]"]) == 0
    assert report(capsys)["report"]["covers"] == []
    assert run(["essential-divisors", "--cone", a2, "--face", "0", "--format", "text"]) == 0
    assert "case2" in capsys.readouterr().out


def test_exit_codes(tmp_path, a2, capsys, monkeypatch):
    bad = write(tmp_path, "bad.json", {"lattice_rank": 3, "rays": [[1, 0]]})
    assert run(["hilbert-basis", "--cone", bad]) == 2
    assert "rank mismatch" in capsys.readouterr().err
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(["hilbert-basis", "--cone", str(broken)]) == 2
    assert "malformed JSON" in capsys.readouterr().err
    assert run(["hilbert-basis", "--cone", str(tmp_path / "missing.json")]) == 2
    assert run(["essential-divisors", "--cone", a2, "--face", "x"]) == 2
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == 2
    big = write(tmp_path, "big.json", {"lattice_rank": 2, "rays": [[1, 0], [1, 500]]})
    monkeypatch.setenv("TORIC_NASH_CAP", "10")
    assert run(["hilbert-basis", "--cone", big]) == 4


def test_output_file_is_deterministic(a2, tmp_path):
    a, b = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run(["verify", "--cone", a2, "--seed", "0", "--output", str(a)]) == 0
    assert run(["verify", "--cone", a2, "--seed", "0", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_large_integers_are_strings():
    text = canonical_json({"x": 2**60, "y": 5})
    assert json.loads(text) == {"x": str(2**60), "y": 5}
    c = cone_from_dict({"lattice_rank": 2, "rays": [["1", 0], [0, "1"]]})
    assert c == Cone([(1, 0), (0, 1)])


def test_cone_round_trip():
    c = Cone([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])
    assert cone_from_dict(json.loads(canonical_json(cone_to_dict(c)))) == c


def test_module_entry_point(a2):
    out = subprocess.run([sys.executable, "-m", "toric_nash", "hilbert-basis", "--cone", a2, "--format", "text"],
                         capture_output=True, text=True, check=True)
    assert "4 Hilbert basis element(s)" in out.stdout
