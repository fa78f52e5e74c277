import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from sandpile_ilp.cli import BadSpec, parse_family, run
from sandpile_ilp.graph import family, load_graph

DATA = Path(__file__).parent / "data"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_stabilize_c5_avalanche():
    code, out, _ = call("stabilize", "--family", "cycle:5", "--config", "1,2,1,0", "--trace")
    assert code == 0
    data = json.loads(out)
    assert data["vertices"] == ["v1", "v2", "v3", "v4"]
    assert data["stable"] == [1, 0, 1, 1]
    assert data["avalanche_size"] == 4
    assert len(data["trace"]) == 4


def test_stabilize_with_sense():
    _, out, _ = call("stabilize", "--family", "cycle:5", "--config", "1,2,1,0", "--sense", "max")
    assert json.loads(out)["ilp"] == {"sense": "max", "x": [2, 3, 2, 1], "result": [0, 0, 1, 0]}


def test_table1_golden():
    code, out, _ = call("table1", "--family", "cycle:5", "--format", "text")
    assert code == 0
    assert out == (DATA / "table1_c5.txt").read_text()


def test_order_identity_class():
    code, out, _ = call("order", "--family", "cycle:5", "--config", "0,0,0,0")
    assert code == 0 and json.loads(out)["order"] == 1


@pytest.mark.parametrize("argv, key, value", [
    (("identity", "--family", "cycle:5"), "identity", [1, 1, 1, 1]),
    (("recurrent", "--family", "cycle:5", "--config", "1,0,0,0"), "recurrent", [1, 1, 1, 0]),
    (("group", "--family", "cycle:5"), "invariant_factors", [5]),
    (("superstable", "--family", "cycle:5", "--config", "1,2,1,0"), "superstable", [0, 0, 1, 0]),
    (("energy", "--family", "cycle:3", "--config", "1,0"), "energy", "5/9"),
    (("verify-dual", "--family", "cycle:5"), "verdict", "certified"),
    (("cone-identity", "--family", "petersen"), "agree", True),
    (("identity", "--family", "cone:" + str(DATA / "petersen.json")), "identity", [3] * 10),
    (("identity", "--graph", str(DATA / "directed3.json")), "vertices", ["a", "b"]),
])
def test_subcommands(argv, key, value):
    code, out, _ = call(*argv)
    assert code == 0
    assert json.loads(out)[key] == value


def test_generators_text():
    code, out, _ = call("generators", "--family", "cycle:5", "--format", "text")
    assert code == 0
    assert "generators: vertex=v1 recurrent=(1,1,1,0) order=5" in out.splitlines()


@pytest.mark.parametrize("argv, code", [
    (("order", "--family", "cycle:5", "--config", "1,0"), 2),
    (("identity", "--family", "cycle:2"), 2),
    (("identity", "--family", "wheel:5"), 1),
    (("identity", "--family", "cycle:x"), 1),
    (("order", "--family", "cycle:5", "--config", "a,b"), 1),
    (("order", "--family", "cycle:5"), 1),
    (("identity", "--graph", "/nonexistent.json"), 1),
    (("identity",), 1),
    (("frobnicate", "--family", "cycle:5"), 1),
    (("identity", "--family", "cycle:5", "--graph", str(DATA / "directed3.json")), 1),
    (("cone-identity", "--family", "path:3"), 2),
])
def test_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code
    assert out == ""
    assert json.loads(err)["exit_code"] == code


def test_deterministic_output():
    a = call("generators", "--family", "cone:cycle:4")
    b = call("generators", "--family", "cone:cycle:4")
    assert a == b


def test_parse_family():
    assert parse_family("cycle:5") == family("cycle", 5)
    assert parse_family("complete:2").reduced_laplacian() == [[1]]
    assert parse_family("cone:" + str(DATA / "petersen.json")).n == 10
    with pytest.raises(BadSpec):
        parse_family("cycle:")


def test_dump_lp(tmp_path):
    path = tmp_path / "model.lp"
    code, _, _ = call("identity", "--family", "cycle:5", "--dump-lp", str(path))
    assert code == 0
    text = path.read_text()
    assert text.startswith("sense\nmax\n")
    from sandpile_ilp.lp import LinearProgram, branch_and_bound
    assert branch_and_bound(LinearProgram.load(text)).point == (2, 3, 3, 2)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sandpile_ilp.cli", "group", "--family", "cycle:5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["group_order"] == 5


def test_graph_file_round_trip(tmp_path):
    g = family("cycle", 5)
    p = tmp_path / "c5.json"
    p.write_text(g.to_json())
    assert load_graph(p) == g
    code, out, _ = call("identity", "--graph", str(p))
    assert json.loads(out)["identity"] == [1, 1, 1, 1]
