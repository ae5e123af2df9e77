import json

import pytest

from catsl2.cli import main
from catsl2.projectors import q2


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_tl_jw_json(capsys):
    code, out = run(capsys, "tl", "jw", "--n", "2")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 2
    assert {"matching": [2, 3, 0, 1],
            "series": [[0, 1]]} in data["terms"]
    assert data["window"] == 30


def test_determinism_byte_identical(capsys):
    _, out1 = run(capsys, "tl", "jw", "--n", "3")
    _, out2 = run(capsys, "tl", "jw", "--n", "3")
    assert out1 == out2


def test_proj_and_complex_roundtrip(tmp_path, capsys):
    code, out = run(capsys, "proj", "q2")
    assert code == 0
    path = tmp_path / "q2.json"
    path.write_text(out)
    code, out2 = run(capsys, "complex", "check", str(path))
    assert code == 0 and json.loads(out2)["ok"]
    code, out3 = run(capsys, "complex", "simplify", str(path))
    assert code == 0
    code, out4 = run(capsys, "tl", "euler", "--complex", str(path))
    assert code == 0
    data = json.loads(out4)
    assert any(t["matching"] == [2, 3, 0, 1] for t in data["terms"])


def test_complex_tensor_and_homology(tmp_path, capsys):
    _, out = run(capsys, "proj", "q2")
    a = tmp_path / "a.json"
    a.write_text(out)
    code, out2 = run(capsys, "complex", "tensor", str(a), str(a))
    assert code == 0
    t = json.loads(out2)
    assert t["n"] == 2


def test_proj_turnback(tmp_path, capsys):
    _, out = run(capsys, "proj", "q2")
    path = tmp_path / "q2.json"
    path.write_text(out)
    code, out2 = run(capsys, "proj", "turnback", str(path))
    assert code == 0
    assert json.loads(out2)["kills_turnbacks"]


def test_colored_homology_file(tmp_path, capsys):
    diagram = {"braid": {"strands": 2, "word": [1, 1, 1]},
               "closure": "trace", "colors": [1], "framings": [0],
               "marks": [1], "family": {"1": {"indices": []}}}
    path = tmp_path / "trefoil.json"
    path.write_text(json.dumps(diagram))
    code, out = run(capsys, "colored", "homology", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["exact"] is True
    assert data["marks"] == [1]
    assert {"h": -2, "q": 7, "rank": 0, "torsion": [2]} in data["groups"]
    # table format
    code, out2 = run(capsys, "--format", "table", "colored", "homology",
                     str(path))
    assert code == 0 and "torsion" in out2


def test_missing_file_is_usage_error(capsys):
    code, _ = run(capsys, "complex", "check", "/nonexistent/path.json")
    assert code == 2


def test_verify_single_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "end11")
    assert code == 0
    assert out.startswith("PASS")


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, _ = run(capsys, "--out", str(target), "proj", "q2")
    assert code == 0
    assert json.loads(target.read_text())["n"] == 2
