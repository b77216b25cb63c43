import json
import subprocess
import sys

import pytest

from ghembed.cli import main
from ghembed.metric import read_space, scale, two_point, write_space


@pytest.fixture
def files(tmp_path):
    write_space(two_point(1.5), tmp_path / "a.json")
    write_space(two_point(0.5), tmp_path / "b.json")
    (tmp_path / "path.json").write_text(json.dumps({"labels": ["x", "y", "z"], "matrix": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}))
    (tmp_path / "bad.json").write_text(json.dumps({"labels": ["x", "y", "z"], "matrix": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}))
    (tmp_path / "nan.json").write_text('{"labels": ["a", "b"], "matrix": [[0, NaN], [NaN, 0]]}')
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(files, capsys):
    code, out, _ = run(capsys, "validate", files / "path.json")
    assert code == 0 and "3 points" in out
    code, _, err = run(capsys, "validate", files / "bad.json")
    assert code == 2 and "TriangleViolation(0,2,1, slack=3)" in err
    code, _, err = run(capsys, "validate", files / "nan.json")
    assert code == 2
    code, _, _ = run(capsys, "validate", files / "missing.json")
    assert code == 2


def test_diam_and_scale(files, capsys):
    assert run(capsys, "diam", files / "a.json")[1].strip() == "3"
    code, out, _ = run(capsys, "scale", files / "path.json", "0.5")
    assert code == 0
    assert json.loads(out)["matrix"][0] == [0.0, 0.5, 1.0]
    assert run(capsys, "scale", files / "path.json", "-1")[0] == 2


def test_gh_methods(files, capsys):
    code, out, _ = run(capsys, "gh", files / "a.json", files / "b.json")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "gh", files / "path.json", files / "b.json", "--method", "bruteforce", "--json")
    doc = json.loads(out)
    assert doc["method"] == "oracle" and doc["value"] == pytest.approx(0.5) and doc["optimal"]
    code, out, _ = run(capsys, "gh", files / "a.json", files / "b.json", "--method", "bounds")
    assert out.split() == ["1", "1"]


def test_gh_budget_exit(tmp_path, capsys):
    from ghembed.experiments import gen_random_metric, make_rng

    rng = make_rng(1)
    write_space(gen_random_metric(7, 1.0, rng), tmp_path / "x.json")
    write_space(gen_random_metric(7, 1.0, rng), tmp_path / "y.json")
    code, out, _ = run(capsys, "gh", tmp_path / "x.json", tmp_path / "y.json", "--budget", "1")
    assert code == 3 and "budget exhausted" in out


def test_twelve_significant_digits(files, capsys):
    write_space(two_point(1 / 3), files / "t.json")
    out = run(capsys, "diam", files / "t.json")[1].strip()
    assert out == "0.666666666667"


def test_bead(files, capsys):
    write_space(scale(two_point(), 0.4), files / "b1.json")
    write_space(two_point(0.2), files / "b2.json")
    (files / "manifest.json").write_text(json.dumps({"r": [1, 0.5], "blocks": ["b1.json", "b2.json"]}))
    code, out, _ = run(capsys, "bead", files / "manifest.json")
    doc = json.loads(out)
    assert code == 0
    assert doc["sidecar"]["c"] == 1.5
    assert doc["sidecar"]["block_of"] == [0, 1, 1, 2, 2, 3, 4]
    code, _, _ = run(capsys, "bead", files / "manifest.json", "-o", files / "bead.json")
    assert code == 0
    B = read_space(files / "bead.json")
    side = json.loads((files / "bead.sidecar.json").read_text())
    assert side["diameter"] == max(map(max, B.dist.tolist()))
    (files / "big.json").write_text(json.dumps({"r": [0.1], "blocks": ["a.json"]}))
    assert run(capsys, "bead", files / "big.json")[0] == 2


def test_embed_box_and_distance(files, capsys):
    (files / "box.json").write_text(json.dumps({"r": [1, 0.5], "x": [1, 0.25], "y": [0.5, 0.25]}))
    code, out, _ = run(capsys, "box-distance", files / "box.json")
    assert code == 0 and out.strip() == "0.5"
    code, out, _ = run(capsys, "embed-box", files / "box.json")
    doc = json.loads(out)
    assert len(doc["space"]["labels"]) == 7
    assert doc["sidecar"]["diameter"] == pytest.approx(72 * 1.5 - 6)
    (files / "out.json").write_text(json.dumps({"r": [1], "x": [2]}))
    assert run(capsys, "embed-box", files / "out.json")[0] == 2


def test_check_theorem(capsys):
    code, out, _ = run(capsys, "check-theorem", "--seed", "3", "--trials", "4")
    assert code == 0
    assert out.count("ok") == 4 and "0 failures; 0 incomplete" in out
    code, out, _ = run(capsys, "check-theorem", "--seed", "3", "--trials", "2", "--r", "1,0.3,0.1", "--json")
    doc = json.loads(out)
    assert doc["config"]["radii"] == [1, 0.3, 0.1]
    assert run(capsys, "check-theorem", "--trials", "0")[0] == 2


def test_check_axioms(capsys):
    code, out, _ = run(capsys, "check-axioms", "--seed", "1", "--pool-size", "5")
    assert code == 0 and out.strip().endswith("PASS")


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "ghembed", "diam", str(files / "b.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
