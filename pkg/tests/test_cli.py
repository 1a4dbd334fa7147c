import json

import numpy as np
import pytest

from simplicial_flows.cli import main
from simplicial_flows.io import read_matrix_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decompose_diamond(capsys):
    code, out, _ = run(capsys, "decompose", "--complex", "diamond", "--dim", "1")
    rep = json.loads(out)
    assert code == 0 and rep["conjugacy_type"] == "(3, 2, 5)"
    assert rep["version"] and rep["inputs"]["complex"]["sha256"]


def test_decompose_tetrahedron(capsys):
    _, out, _ = run(capsys, "decompose", "--complex", "tetrahedron", "--dim", "2")
    assert json.loads(out)["ranks"]["r_down"] == 3


def test_decompose_edgeless(tmp_path, capsys):
    f = tmp_path / "pts.json"
    f.write_text(json.dumps({"maximal_simplices": [[1], [2], [3]]}))
    _, out, _ = run(capsys, "decompose", "--complex", str(f), "--dim", "0")
    assert json.loads(out)["conjugacy_type"] == "(0, 0, 3)"


def test_bad_json_reports_position(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"simplices": [[1, 2],\n  oops]}')
    code, _, err = run(capsys, "decompose", "--complex", str(f), "--dim", "1")
    assert code == 2 and "bad.json:2:" in err


def test_realize_and_simulate(tmp_path, capsys):
    Minv = tmp_path / "minv.csv"
    np.savetxt(Minv, np.array([[-1, 0, -1, -1, 0], [1, -1, 0, 0, 0], [0, 1, 1, 0, -1],
                               [1, 1, -1, 0, 0], [0, 0, 1, -1, 1]]).T, delimiter=",")
    out = tmp_path / "ls"
    code, txt, _ = run(capsys, "realize", "--complex", "diamond", "--dim", "1", "--down", "lorenz",
                       "--up", "selkov", "--m-inv", str(Minv), "--out", str(out))
    assert code == 0 and json.loads(txt)["conjugacy_residual"] <= 1e-8
    assert np.allclose(read_matrix_csv(out / "M_inv.csv"), read_matrix_csv(Minv))
    sim = tmp_path / "sim"
    code, _, _ = run(capsys, "simulate", "--spec", str(out / "spec.json"), "--y0", "1,1,1,1,10",
                     "--h", "0.01", "--T", "1", "--transform", "--out", str(sim))
    assert code == 0
    lines = (sim / "trajectory.csv").read_text().splitlines()
    assert lines[0].split(",")[:2] == ["t", "x_1"] and len(lines) == 102
    assert (sim / "transformed.csv").exists() and (sim / "metadata.json").exists()


def test_realize_rank_mismatch(capsys):
    code, _, err = run(capsys, "realize", "--complex", "diamond", "--dim", "1", "--down", "selkov")
    assert code == 2 and "requires 3" in err


def test_simulate_blow_up(tmp_path, capsys):
    spec = {"kind": "coupled", "complex": {"maximal_simplices": [[1, 2]]}, "d": 0,
            "internal": {"expr": "x**2"}}
    f = tmp_path / "spec.json"
    f.write_text(json.dumps(spec))
    code, _, err = run(capsys, "simulate", "--spec", str(f), "--x0", "1,1", "--h", "0.01", "--T", "5",
                       "--out", str(tmp_path / "o"))
    assert code == 3 and "last valid time" in err


def test_symmetries(tmp_path, capsys):
    code, out, _ = run(capsys, "symmetries", "--complex", "diamond")
    assert code == 0 and json.loads(out)["order"] == 4
    _, out, _ = run(capsys, "symmetries", "--complex", "tetrahedron")
    assert json.loads(out)["order"] == 24


def test_colorings(tmp_path, capsys):
    code, out, _ = run(capsys, "colorings", "--complex", "diamond", "--dim", "2",
                       "--direction", "down", "--oracle")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 4 and rep["oracle_disagreements"] == []
    part = tmp_path / "p.json"
    part.write_text(json.dumps([[[1, 2]], [[2, 3], [1, 3], [1, 4], [3, 4]]]))
    _, out, _ = run(capsys, "colorings", "--complex", "diamond", "--dim", "2",
                    "--direction", "down", "--partition", str(part))
    assert json.loads(out)["count"] == 2


def test_colorings_guard(capsys):
    code, _, err = run(capsys, "colorings", "--complex", "tetrahedron", "--dim", "1",
                       "--direction", "up", "--max-simplices", "4")
    assert code == 4 and "guard" in err


def test_deterministic_outputs(tmp_path, capsys):
    for k in (1, 2):
        run(capsys, "realize", "--complex", "tetrahedron", "--dim", "2", "--down", "guckenheimer_holmes",
            "--out", str(tmp_path / f"r{k}"))
        run(capsys, "simulate", "--spec", str(tmp_path / "r1" / "spec.json"), "--y0", "0.5,0.5,0.5,0.3333",
            "--h", "0.01", "--T", "2", "--transform", "--out", str(tmp_path / f"s{k}"))
    for name in ("r{}/spec.json", "r{}/M.csv", "s{}/trajectory.csv", "s{}/transformed.csv", "s{}/metadata.json"):
        assert (tmp_path / name.format(1)).read_bytes() == (tmp_path / name.format(2)).read_bytes()


@pytest.mark.slow
def test_verify_all(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-all", "--out", str(tmp_path))
    assert code == 0
