import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from maxloc import reports
from maxloc.cli import main
from maxloc.second_degree import cyclic_subcharacter


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


CHI01 = {"group": "Z4", "support": [0, 1], "phases": ["0/1", "0/1"], "mag_sq": "1/2"}


@pytest.mark.parametrize("group, count", [("Z4", 7), ("Z2xZ2", 15), ("Z1", 1), ("Z6", 12)])
def test_atlas_counts(capsys, group, count):
    code, out, _ = run(capsys, "atlas", group)
    data = json.loads(out)
    assert code == 0 and data["count"] == count and len(data["triples"]) == count
    assert all(t["measure"] == "1" and t["maximal"] for t in data["triples"])
    if "x" not in group:
        assert data["divisor_sum"] == count and data["divisor_sum_check"]


def test_atlas_is_byte_stable(capsys):
    _, a, _ = run(capsys, "atlas", "--group", "Z2xZ4")
    _, b, _ = run(capsys, "atlas", "Z2xZ4")
    assert a == b


@pytest.mark.parametrize(
    "argv, code",
    [
        (["atlas", "Q4"], 2),
        (["atlas", "Z100"], 3),
        (["atlas", "Z100", "--max-order", "128"], 2),
        (["atlas", "Z4", "--tol", "-1"], 2),
        (["atlas"], 2),
        (["atlas", "Z4", "--group", "Z6"], 2),
        (["basis", "Z4"], 2),
        (["basis", "Z4", "--b", "3", "--p", "0"], 2),
        (["basis", "Z2xZ2", "--b", "2", "--p", "0"], 2),
        (["basis", "Z4", "--index", "99"], 2),
        (["basis", "Z4", "--index", "0", "--b", "2", "--p", "1"], 2),
    ],
)
def test_usage_and_bound_errors(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code and out == "" and "error" in err


def test_large_group_needs_acknowledgement(capsys):
    code, out, _ = run(capsys, "atlas", "Z67", "--max-order", "100", "--allow-large")
    assert code == 0 and json.loads(out)["count"] == 68


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_basis_h21(capsys):
    code, out, _ = run(capsys, "basis", "Z4", "--b", "2", "--p", "1")
    data = json.loads(out)
    assert code == 0 and data["orthonormal_basis"]
    assert len(data["lattice"]) == 4 and data["gram_max_offdiag"] <= 1e-12 and data["rank"] == 4
    assert data["support_measure"] == "1"
    assert data["window"]["phases"] == ["0/1", "3/4"] and data["window"]["mag_sq"] == "1/2"


def test_basis_delta(capsys):
    code, out, _ = run(capsys, "basis", "Z4", "--b", "1", "--p", "0")
    data = json.loads(out)
    assert code == 0 and data["window"]["support"] == [[0]]
    assert sorted(x for x, xi in data["lattice"]) == [[0], [1], [2], [3]]


def test_basis_by_index(capsys):
    code, out, _ = run(capsys, "basis", "Z6", "--index", "0")
    _, atlas, _ = run(capsys, "atlas", "Z6")
    data = json.loads(out)
    assert code == 0 and data["triple"] == json.loads(atlas)["triples"][0]


def test_classify(capsys, tmp_path):
    h = cyclic_subcharacter(8, 4, 1, normalized=True).window()
    code, out, _ = run(capsys, "classify", "--window", write(tmp_path, "h.json", reports.window_to_json(h)))
    data = json.loads(out)
    assert code == 0 and data["kind"] == "Optimizer" and data["residual"] <= 1e-9
    code, out, _ = run(capsys, "classify", "Z4", "--window", write(tmp_path, "c.json", CHI01))
    data = json.loads(out)
    assert code == 1 and data["kind"] == "NotOptimizer" and data["support_measure"] == "11/4"
    zero = {"group": "Z4", "values": [[0, 0]] * 4}
    code, out, err = run(capsys, "classify", "--window", write(tmp_path, "z.json", zero))
    assert code == 2 and "zero" in err
    code, _, _ = run(capsys, "classify", "Z6", "--window", write(tmp_path, "c2.json", CHI01))
    assert code == 2
    code, _, _ = run(capsys, "classify", "--window", str(tmp_path / "missing.json"))
    assert code == 2


def test_classify_floating_window(capsys, tmp_path):
    h = cyclic_subcharacter(6, 3, 2, xi=1, normalized=True).window()
    v = (h.values * np.exp(0.3j)).tolist()
    obj = {"group": "Z6", "values": [[z.real, z.imag] for z in v]}
    code, out, _ = run(capsys, "classify", "--window", write(tmp_path, "f.json", obj))
    assert code == 0 and json.loads(out)["kind"] == "Optimizer"


def test_lieb_rows(capsys, tmp_path):
    h = write(tmp_path, "h.json", reports.window_to_json(cyclic_subcharacter(4, 2, 1, normalized=True).window()))
    c = write(tmp_path, "c.json", CHI01)
    code, out, _ = run(capsys, "lieb", "--f", h, "--g", h, "--p-list", "0.5,1,2,4")
    rows = json.loads(out)["rows"]
    assert code == 0 and all(r["equality"] for r in rows)
    code, out, _ = run(capsys, "lieb", "--f", c, "--g", c, "--p-list", "1,2,4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["equality"] for r in rows] == ["false", "true", "false"]
    assert float(rows[0]["norm"]) > 1 and float(rows[2]["margin"]) > 0
    code, _, _ = run(capsys, "lieb", "--f", h, "--g", h, "--p-list", "0")
    assert code == 2


@pytest.mark.parametrize("argv", [["verify", "Z6", "--samples", "200"], ["verify", "Z8", "--seed", "7"], ["verify", "Z1"]])
def test_verify(capsys, argv):
    code, out, _ = run(capsys, *argv)
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert all(s["passed"] is not False for s in data["suites"].values())


def test_out_file(capsys, tmp_path):
    target = tmp_path / "atlas.json"
    code, out, _ = run(capsys, "atlas", "Z3", "--out", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["count"] == 4


def test_module_entry_point():
    a = subprocess.run([sys.executable, "-m", "maxloc", "atlas", "Z4"], capture_output=True, text=True)
    b = subprocess.run([sys.executable, "-m", "maxloc", "atlas", "Z4"], capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout and json.loads(a.stdout)["count"] == 7


@pytest.mark.parametrize(
    "obj",
    [
        CHI01,
        {"group": "Z2xZ2", "support": [[0, 0], [1, 1]], "phases": ["1/4", "0/1"], "mag": "1/2"},
        {"group": "Z3", "support": [[0], [2]], "phases": ["0", "1/3"], "mags": ["1", "2"], "scale_sq": "1/5"},
    ],
)
def test_window_json_round_trip(obj):
    f = reports.window_from_json(obj)
    assert f.is_exact
    g = reports.window_from_json(json.loads(json.dumps(reports.window_to_json(f))))
    assert g.is_exact and g.exact == f.exact
    dense = reports.window_from_json({"group": obj["group"], "values": reports.window_to_json(f)["values"]})
    assert np.allclose(dense.values, f.values)


def test_window_json_values():
    f = reports.window_from_json(CHI01)
    assert f.norm_sq() == 1
    assert np.allclose(f.values, [2**-0.5, 2**-0.5, 0, 0])
    with pytest.raises(ValueError):
        reports.window_from_json({"group": "Z4", "support": [0, 0], "phases": ["0", "0"]})


def test_rationals_render_as_strings():
    assert reports.rational(Fraction(11, 4)) == "11/4"
    assert reports.rational(1) == "1"
