import json

import numpy as np
import pytest

from motherbody import cli, gallery
from motherbody.quaddiff import TrajectoryGraph

LINEAR = {"monomials": [{"i": 1, "j": 1, "re": 1, "im": 0}, {"i": 0, "j": 0, "re": -1, "im": 0}]}
SQUARED = {"monomials": [{"i": 2, "j": 2, "re": 1, "im": 0}, {"i": 1, "j": 1, "re": -2, "im": 0},
                         {"i": 0, "j": 0, "re": 1, "im": 0}]}
ARCSINE = {"monomials": [{"i": 2, "j": 2, "re": 1, "im": 0}, {"i": 2, "j": 0, "re": -1, "im": 0},
                         {"i": 0, "j": 0, "re": -1, "im": 0}]}
SEMICIRCLE = {"P": {"coeffs": [[1, 0]]}, "Q": {"coeffs": [[0, 0], [-1, 0]]}, "R": {"coeffs": [[1, 0]]}}


def _file(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def _run(capsys, argv):
    status = cli.main(argv)
    return status, capsys.readouterr().out


def test_analyze_linear(tmp_path, capsys):
    status, out = _run(capsys, ["analyze", _file(tmp_path, "lin.json", LINEAR)])
    assert status == 0
    doc = json.loads(out)
    assert doc["report"]["necessary_holds"] and doc["report"]["sufficient_holds"]
    assert doc["balanced"] and doc["config"]["subcommand"] == "analyze"


def test_rejection_exits_2(tmp_path, capsys):
    status, out = _run(capsys, ["expand", _file(tmp_path, "sq.json", SQUARED)])
    assert status == 2
    assert json.loads(out)["error"] == "SufficientConditionFails"


@pytest.mark.parametrize("content", ["{not json", json.dumps({"P": {"coeffs": "x"}})])
def test_malformed_input_exits_1(tmp_path, capsys, content):
    status, out = _run(capsys, ["measures", _file(tmp_path, "bad.json", content)])
    assert status == 1
    assert "error" in json.loads(out)


def test_missing_file_and_bad_counts(tmp_path, capsys):
    status, out = _run(capsys, ["analyze", str(tmp_path / "absent.json")])
    assert status == 1 and json.loads(out)["error"]
    status, out = _run(capsys, ["expand", _file(tmp_path, "lin.json", LINEAR), "--terms", "0"])
    assert status == 1 and json.loads(out)["error"] == "SchemaError"


def test_expand_writes_output_file(tmp_path, capsys):
    dest = tmp_path / "series.json"
    status, out = _run(capsys, ["expand", _file(tmp_path, "a.json", ARCSINE), "--terms", "7",
                                "-o", str(dest)])
    assert status == 0 and out == ""
    doc = json.loads(dest.read_text())
    assert doc["config"]["terms"] == 7


def test_repeat_runs_are_byte_identical(tmp_path, capsys):
    src = _file(tmp_path, "semi.json", SEMICIRCLE)
    first = _run(capsys, ["measures", src, "--jobs", "1"])[1]
    second = _run(capsys, ["measures", src, "--jobs", "1"])[1]
    assert first == second


def test_eigen_root_cloud(tmp_path, capsys):
    csv = tmp_path / "roots.csv"
    hist = tmp_path / "hist.json"
    status, out = _run(capsys, ["eigen", _file(tmp_path, "a.json", ARCSINE), "--degree-max", "40",
                                "--emit-roots", str(csv), "--emit-histogram", str(hist),
                                "--check-symbol"])
    assert status == 0
    rows = np.loadtxt(csv, delimiter=",", ndmin=2)
    assert rows.shape == (40, 2)
    assert np.all(np.abs(rows[:, 1]) < 1e-9) and np.all(np.abs(rows[:, 0]) <= 1 + 1e-12)
    doc = json.loads(out)
    assert abs(doc["root_mass"] - 1) < 1e-12 and doc["symbol_residual"]["value"] < 0.1
    json.loads(hist.read_text())


def test_measures_semicircle_then_verify(tmp_path, capsys):
    src = _file(tmp_path, "semi.json", SEMICIRCLE)
    status, out = _run(capsys, ["measures", "--triple", src, "--jobs", "1"])
    assert status == 0
    cands = json.loads(out)["candidates"]
    assert len(cands) == 1
    assert cands[0]["positive"] and abs(cands[0]["mass"] - 1) < 1e-9
    mj = _file(tmp_path, "measures.json", out)
    status, out = _run(capsys, ["verify", "--measure-json", mj, "--equation-json", src,
                                "--samples", "40"])
    assert status == 0
    assert json.loads(out)["max_abs_error"] <= 1e-4


def test_measures_on_abstract_graph(tmp_path, capsys):
    for make, admits in ((gallery.circle_chain, True), (gallery.cut_cycle, False)):
        g = _file(tmp_path, "g.json", make().to_json())
        status, out = _run(capsys, ["measures", "--graph-json", g])
        assert status == 0 and json.loads(out)["admits"] is admits


def test_quad_and_strebel(tmp_path, capsys):
    P, Q, R = gallery.arcsine_triple()
    src = _file(tmp_path, "arc.json", {"P": P.to_json(), "Q": Q.to_json(), "R": R.to_json()})
    gjson, svg = tmp_path / "g.json", tmp_path / "g.svg"
    semi = _file(tmp_path, "semi.json", SEMICIRCLE)
    status, out = _run(capsys, ["quad", semi, "--emit-graph", str(gjson), "--emit-svg", str(svg)])
    assert status == 0 and json.loads(out)["graph"]["euler"]
    assert TrajectoryGraph.from_json(json.loads(gjson.read_text())).E == 1
    assert svg.read_text().lstrip().startswith("<svg")
    status, out = _run(capsys, ["strebel", src])
    assert status == 0 and json.loads(out)["strebel"] is True


def test_plot_svg(tmp_path, capsys):
    status, out = _run(capsys, ["plot", "--triple", _file(tmp_path, "semi.json", SEMICIRCLE)])
    assert status == 0 and out.lstrip().startswith("<svg") and "</svg>" in out
    csv = _file(tmp_path, "r.csv", "0.5,0.0\n-0.5,0.25\n")
    status, out = _run(capsys, ["plot", "--roots-csv", csv])
    assert status == 0 and out.count("<circle") >= 2
