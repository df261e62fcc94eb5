import json

import pytest

from conftest import FIXTURES
from rips_hierarchy import io
from rips_hierarchy.cli import main
from rips_hierarchy.errors import InputError, SubcloudError
from rips_hierarchy.hierarchy import branch_points, build_gamma

LINE3 = str(FIXTURES / "line3.csv")
Y4 = str(FIXTURES / "y4.csv")
X2 = str(FIXTURES / "x2.json")
SINGLE = str(FIXTURES / "single.csv")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_readers(tmp_path):
    assert io.read_cloud(Y4).points.ravel().tolist() == [0, 0.1, 1, 1.1]
    assert io.read_cloud(X2).points.ravel().tolist() == [0, 1]
    single = io.read_cloud(SINGLE, labels=True)
    assert single.label(0) == "a" and single.points.tolist() == [[5, 5]]
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n")
    with pytest.raises(InputError):
        io.read_cloud(bad)
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(InputError):
        io.read_cloud(broken)
    with pytest.raises(InputError):
        io.read_cloud(tmp_path / "missing.csv")


def test_read_subset(tmp_path):
    sup = io.read_cloud(Y4)
    assert io.read_subset("0, 2", sup).index == (0, 2)
    assert io.read_subset(X2, sup).index == (0, 2)
    idx = tmp_path / "idx.json"
    idx.write_text('{"indices": [1, 3]}')
    assert io.read_subset(str(idx), sup).index == (1, 3)
    with pytest.raises(SubcloudError):
        io.read_subset(LINE3, sup)
    with pytest.raises(InputError):
        io.read_subset("a,b", sup)


def test_newick_and_dot(line3):
    bp = branch_points(build_gamma(line3, 0))
    assert io.newick(bp) == "((0:1.0,1:1.0):1.0,2:2.0);\n"
    dot = io.branch_dot(bp)
    assert dot.count("shape=box") == 3 and dot.count("shape=diamond") == 2
    assert "shape=diamond" in io.gamma_dot(bp.tree, bp)


def test_distances_command(capsys):
    code, out, _ = run(capsys, "distances", "--input", LINE3, "--k", "3")
    data = json.loads(out)
    assert code == 0
    assert data["phase_changes"] == [0, 1, 2, 3]
    assert data["core_distances"] == [None, None, None]


def test_complex_command(capsys):
    code, out, _ = run(capsys, "complex", "--input", LINE3, "--scale", "2", "--k", "1")
    assert code == 0 and json.loads(out)["simplices"] == {"1": [[0, 1], [1, 2]], "2": []}
    code, out, _ = run(capsys, "complex", "--input", LINE3, "--scale-index", "1", "--betti-dim", "1")
    assert json.loads(out) == {"scale": 1.0, "k": 0, "betti": [2, 0]}
    code, _, err = run(capsys, "complex", "--input", LINE3, "--scale-index", "9")
    assert code == 2 and "scale-index" in err


def test_hierarchy_command(capsys):
    code, out, _ = run(capsys, "hierarchy", "--input", LINE3, "--k", "0")
    data = json.loads(out)
    assert code == 0
    assert data["scales"] == [0, 1, 2, 3]
    assert data["layers"] == [[[0], [1], [2]], [[0, 1], [2]], [[0, 1, 2]], [[0, 1, 2]]]
    assert [(b["scale"], b["component"], b["kind"]) for b in data["branch_points"]] == [
        (0, 0, "birth"), (0, 1, "birth"), (0, 2, "birth"), (1, 0, "merge"), (2, 0, "merge")
    ]
    assert data["branch_points"][2]["parent"] == [2, 0]
    code, out, _ = run(capsys, "hierarchy", "--input", LINE3, "--format", "newick")
    assert out == "((0:1.0,1:1.0):1.0,2:2.0);\n"


def test_branchpoints_command(capsys):
    code, out, _ = run(capsys, "branchpoints", "--input", LINE3, "--k", "1")
    assert code == 0
    assert json.loads(out)["branch_points"] == [
        {"scale": 1.0, "component": 0, "kind": "birth", "members": [0, 1], "parent": None}
    ]
    code, out, err = run(capsys, "branchpoints", "--input", SINGLE, "--labels", "--k", "1")
    assert code == 2 and out == "" and "hierarchy empty" in err


def test_certify_command(capsys):
    code, out, _ = run(capsys, "certify", "--input", Y4, "--subset", X2, "--k", "0",
                       "--scale-index", "1", "--auto-r")
    data = json.loads(out)
    assert code == 0
    assert data["density"] == {"radius": 0.1, "k": 0, "exact": True, "witness": {"y": [1], "x": [0]}}
    assert data["certificate"]["verdict"] is True
    assert data["certificate"]["s"] == 0.1
    (eq,) = data["equivalence"]
    assert eq["certified"] and eq["betti_x"] == eq["betti_y"] == [2, 0]


def test_certify_density_failure(capsys):
    code, out, _ = run(capsys, "certify", "--input", Y4, "--subset", "0,2", "--scale", "0.1", "--r", "0.05")
    assert code == 1 and "error" in json.loads(out)


def test_certify_exact_flag(capsys, caplog):
    code, _, err = run(capsys, "certify", "--input", Y4, "--subset", "0,2", "--k", "1",
                       "--scale", "1", "--auto-r", "--budget", "1", "--exact")
    assert code == 2 and "budget" in err
    code, out, _ = run(capsys, "certify", "--input", Y4, "--subset", "0,2", "--k", "1",
                       "--scale", "1", "--auto-r", "--budget", "1")
    assert code == 0 and json.loads(out)["density"]["exact"] is False
    assert "greedy upper bound" in caplog.text


def test_compare_command(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "compare", "--input", Y4, "--subset", "0,2", "--k", "1",
                       "--auto-r", "--output", str(target))
    data = json.loads(target.read_text())
    assert code == 0 and out == ""
    assert set(data) == {"density", "r", "i_star", "theta_star", "homotopy", "eq1xx"}
    assert data["homotopy"]["verdict"] and data["eq1xx"]["verdict"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["certify", "--input", Y4, "--scale", "1", "--r", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["complex", "--input", Y4, "--scale", "-1"])
    capsys.readouterr()
