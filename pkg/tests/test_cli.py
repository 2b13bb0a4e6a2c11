import json
import subprocess
import sys

import pytest
from hypothesis import given

from sflattice import LatticePolytope
from sflattice.cli import main, parse_polytope, polytope_document, read_polytope, write_polytope
from strategies import polytopes


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    docs = {
        "t2": {"name": "T2", "dim": 2, "points": [[0, 0], [1, 0], [0, 1]]},
        "reeve": {"name": "reeve", "dim": 3, "points": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]]},
        "point": {"dim": 2, "points": [[3, 4]]},
        "cube": {"dim": 3, "points": [[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)]},
        "bad_dim": {"dim": "two", "points": [[0, 0]]},
        "zero_dim": {"dim": 0, "points": [[0, 0]]},
        "ragged": {"dim": 2, "points": [[0, 0], [1, 0, 0]]},
        "floats": {"dim": 2, "points": [[0, 0], [0.5, 1]]},
        "extra": {"dim": 1, "points": [[0]], "scale": 2},
        "empty": {"dim": 1, "points": []},
    }
    out = {}
    for k, doc in docs.items():
        p = tmp_path / f"{k}.json"
        p.write_text(json.dumps(doc))
        out[k] = p
    (tmp_path / "garbage.json").write_text("{not json")
    out["garbage"] = tmp_path / "garbage.json"
    return out


def test_points(capsys, files):
    code, out, _ = run(capsys, "points", "--polytope", files["t2"], "--dilation", 2)
    assert code == 0
    assert out.splitlines() == ["0,0", "0,1", "0,2", "1,0", "1,1", "2,0"]
    code, out, _ = run(capsys, "points", "--polytope", files["point"], "--dilation", 5)
    assert out == "15,20\n"


def test_points_json(capsys, files):
    code, out, _ = run(capsys, "points", "--polytope", files["t2"], "--dilation", 1, "--json")
    assert json.loads(out) == {"dilation": 1, "count": 3, "points": [[0, 0], [0, 1], [1, 0]]}


@pytest.mark.parametrize("key, code, needle", [
    ("bad_dim", 2, "'dim'"),
    ("zero_dim", 2, "'dim'"),
    ("floats", 2, "points[1]"),
    ("extra", 2, "scale"),
    ("empty", 2, "nonempty"),
    ("garbage", 2, "invalid JSON"),
    ("ragged", 3, "points[1]"),
])
def test_bad_files(capsys, files, key, code, needle):
    got, _, err = run(capsys, "points", "--polytope", files[key], "--dilation", 1)
    assert got == code and needle in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "points", "--polytope", tmp_path / "nope.json", "--dilation", 1)
    assert code == 2


def test_bad_flags(capsys, files):
    assert run(capsys, "points", "--polytope", files["t2"], "--dilation", "x")[0] == 2
    assert run(capsys, "points", "--polytope", files["t2"], "--dilation", 0)[0] == 2
    assert run(capsys, "points", "--polytope", files["t2"])[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "decompose", "--polytope", files["t2"], "--dilation", 2, "--point", "a,b")[0] == 2
    assert run(capsys, "decompose", "--polytope", files["t2"], "--dilation", 2, "--point", "1,0",
               "--mode", "sideways")[0] == 2


def test_decompose(capsys, files):
    code, out, _ = run(capsys, "decompose", "--polytope", files["t2"], "--dilation", 3, "--point", "2,1", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["head"] == "0,1" and doc["parts"] == ["1,0", "1,0"]
    assert doc["head_dilation"] == 1 and doc["head_witness"] == {"mass": "1", "terms": {"0,1": "1"}}


def test_decompose_vertex(capsys, files):
    code, out, _ = run(capsys, "decompose", "--polytope", files["t2"], "--dilation", 1, "--point", "1,0", "--json")
    doc = json.loads(out)
    assert doc["head"] == "1,0" and doc["parts"] == []


def test_decompose_errors(capsys, files, tmp_path):
    assert run(capsys, "decompose", "--polytope", files["t2"], "--dilation", 1, "--point", "1,1")[0] == 4
    assert run(capsys, "decompose", "--polytope", files["t2"], "--dilation", 1, "--point", "1,1,1")[0] == 3
    out = tmp_path / "sharp.json"
    assert run(capsys, "example4", "--n", 4, "--a", "1,1,1", "--d", 4, "--out", out)[0] == 0
    code, _, err = run(capsys, "decompose", "--polytope", out, "--dilation", 2, "--point", "1,1,1,1")
    assert code == 4 and "point not in mK" in err


def test_verify(capsys, files):
    code, out, _ = run(capsys, "verify", "--polytope", files["reeve"], "--m-max", 4, "--json")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert [r["m"] for r in rows if r["identity"] == "head n-1"] == [2, 3, 4]
    assert all(r["holds"] for r in rows)
    assert any(r["identity"] == "empty simplex" for r in rows)


def test_check(capsys, files):
    assert run(capsys, "check", "solid", "--polytope", files["reeve"])[1] == "not solid; m=2; witness 1,1,1\n"
    assert run(capsys, "check", "solid", "--polytope", files["cube"])[1] == "solid\n"
    out = run(capsys, "check", "locally-solid", "--polytope", files["reeve"])[1]
    assert out == "not locally solid; vertex 0,0,0; hole 1,1,1; multiplier 2\n"
    assert run(capsys, "check", "empty", "--polytope", files["reeve"])[1] == "true\n"
    assert json.loads(run(capsys, "check", "faithful", "--polytope", files["reeve"], "--json")[1]) == {
        "faithful": False}
    assert run(capsys, "check", "weird", "--polytope", files["reeve"])[0] == 2


def test_triangulate(capsys, files):
    code, out, _ = run(capsys, "triangulate", "--polytope", files["cube"], "--json")
    doc = json.loads(out)
    assert code == 0 and doc["total_volume"] == doc["polytope_volume"] == 6


def test_example4(capsys, tmp_path):
    out = tmp_path / "sharp.json"
    code, text, _ = run(capsys, "example4", "--n", 4, "--a", "1,1,1", "--d", 4, "--out", out, "--json")
    doc = json.loads(text)
    assert code == 0 and doc["passed"] and doc["mass"] == "5/2"
    K = read_polytope(str(out))
    assert K.vertices.points == ((0, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 1, 4))
    code, _, err = run(capsys, "example4", "--n", 4, "--a", "1,1,2", "--d", 4, "--out", out)
    assert code == 2 and "sum(a)" in err


def test_atoms(capsys, files):
    code, out, _ = run(capsys, "atoms", "--polytope", files["reeve"], "--json")
    doc = json.loads(out)
    assert code == 0 and doc["atoms"] == ["0,1,0", "1,0,0", "1,1,1", "1,1,2"]
    assert run(capsys, "atoms", "--polytope", files["reeve"], "--point", "2,2,2")[1] == "not atom\n"
    assert run(capsys, "atoms", "--polytope", files["reeve"], "--vertex", "1,1,1")[0] == 2
    assert run(capsys, "atoms", "--polytope", files["reeve"], "--point=-1,0,0")[0] == 4


def test_probe(capsys, tmp_path):
    results = tmp_path / "results.ndjson"
    code, out, _ = run(capsys, "probe", "--question", 1, "--seed", 3, "--count", 8, "--out", results)
    assert code == 0 and out.splitlines()[-1] == "no candidates"
    lines = results.read_text().splitlines()
    assert all(json.loads(line)["question"] == 1 for line in lines)
    # Appends rather than overwrites.
    run(capsys, "probe", "--question", 1, "--seed", 3, "--count", 8, "--out", results)
    assert len(results.read_text().splitlines()) == 2 * len(lines)
    code, out, _ = run(capsys, "probe", "--question", 2, "--seed", 1, "--count", 6, "--dims", "5,5",
                       "--coords", "0,1", "--points", "6,8", "--json")
    assert code == 0 and json.loads(out)["candidates"] == []
    assert run(capsys, "probe", "--question", 3)[0] == 2
    assert run(capsys, "probe", "--question", 1, "--dims", "3")[0] == 2


@given(polytopes())
def test_file_round_trip(K):
    doc = json.loads(json.dumps(polytope_document(K)))
    assert parse_polytope(doc) == K


def test_write_read(tmp_path):
    K = LatticePolytope([(0, 0), (2, 1), (1, 3)], name="tri")
    write_polytope(K, str(tmp_path / "k.json"))
    L = read_polytope(str(tmp_path / "k.json"))
    assert L == K and L.name == "tri"


def test_console_script(files):
    out = subprocess.run([sys.executable, "-m", "sflattice.cli", "points", "--polytope", str(files["t2"]),
                          "--dilation", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "0,0\n0,1\n1,0\n"
