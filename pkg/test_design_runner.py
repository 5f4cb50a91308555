"""Command-line runs through design_runner.main"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import design_runner
from src.exceptions import RankMismatch


def _run(capsys, *argv):
    code = design_runner.main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def icosahedron_file(tmp_path, capsys):
    path = tmp_path / "icosahedron.json"
    assert design_runner.main(["catalog", "icosahedron", "-o", str(path)]) == 0
    capsys.readouterr()
    return path


def test_catalog_to_stdout(capsys):
    code, out = _run(capsys, "catalog", "polygon-6")
    assert code == 0
    data = json.loads(out)
    assert data["name"] == "polygon-6"
    assert data["geometry"] == {"rank": 2, "degree": 1}
    assert data["gram"][0][3] == "0"


def test_analyze_json(capsys, icosahedron_file):
    code, out = _run(capsys, "analyze", str(icosahedron_file), "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["report"] == "analysis"
    assert report["tight"] is True
    assert report["strength"] == 5
    assert report["source"] == "points"
    assert report["radicand"] == 5
    assert [a["pairs"] for a in report["angles"]] == [6, 30, 30]
    assert report["angles"][2]["value"] == {"a": "1/2", "b": "1/10"}
    assert report["scheme"] is None


def test_scheme_json(capsys, icosahedron_file):
    code, out = _run(capsys, "scheme", str(icosahedron_file), "--format", "json")
    assert code == 0
    scheme = json.loads(out)["scheme"]
    assert [r["elimination"] for r in scheme["ranks"]] == [1, 3, 5, 3]
    assert scheme["construction"] == "repaired_ls"
    assert scheme["naive_top_idempotent"] is False
    assert scheme["verdict"]["collision_pairs"] == [[1, 3]]
    assert scheme["verdict"]["certified_rational"] is False


def test_scheme_text(capsys, icosahedron_file):
    code, out = _run(capsys, "scheme", str(icosahedron_file))
    assert code == 0
    assert "ASSOCIATION SCHEME" in out
    assert "Sum of ranks: 12" in out


def test_json_output_is_deterministic(capsys, icosahedron_file):
    _, first = _run(capsys, "scheme", str(icosahedron_file), "--format", "json")
    _, second = _run(capsys, "scheme", str(icosahedron_file), "--format", "json")
    assert first == second


def test_report_to_file(capsys, tmp_path, icosahedron_file):
    target = tmp_path / "out" / "report.json"
    code, out = _run(capsys, "analyze", str(icosahedron_file), "--format", "json", "-o", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["cardinality"] == 12


def test_ranks(capsys):
    code, out = _run(capsys, "ranks", "--rank", "2", "--degree", "2", "--s", "3", "--eps", "1", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["ranks"] == ["1", "3", "5", "3"]
    assert report["collisions"] == [[1, 3]]
    assert report["cardinality"] == "12"

    code, out = _run(capsys, "ranks", "--rank", "3", "--degree", "8", "--s", "2", "--eps", "1")
    assert code == 0
    assert "CLOSED-FORM RANKS" in out
    assert "216/5" in out


def test_scan(capsys):
    code, out = _run(capsys, "scan", "--degrees", "1,2", "--max-rank", "6", "--max-s", "6", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["parameters"]["degrees"] == [1, 2]
    assert report["summary"]["matches_theorem"] is True
    assert [2, 2, 3, 1] in report["summary"]["exceptions_found"]

    code, out = _run(capsys, "scan", "--degrees", "1,2", "--max-rank", "4", "--max-s", "4", "--no-octonion-plane")
    assert code == 0
    assert "Exceptions by geometry:" in out


def test_e8_round_trip(capsys, tmp_path):
    path = tmp_path / "e8.json"
    assert design_runner.main(["catalog", "e8", "-o", str(path)]) == 0
    code, out = _run(capsys, "analyze", str(path), "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["cardinality"] == 240
    assert report["strength"] == 7
    assert [a["value"] for a in report["angles"]] == ["0", "1/4", "1/2", "3/4"]


def test_input_errors_exit_1(capsys, tmp_path):
    assert design_runner.main(["analyze", str(tmp_path / "missing.json")]) == 1
    assert design_runner.main(["catalog", "polygon-7"]) == 1

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert design_runner.main(["analyze", str(broken)]) == 1

    frame = tmp_path / "frame.json"
    frame.write_text(json.dumps({
        "geometry": {"rank": 2, "degree": 2},
        "points": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
    }))
    assert design_runner.main(["analyze", str(frame)]) == 0
    assert design_runner.main(["scheme", str(frame)]) == 1
    err = capsys.readouterr().err
    assert "NotTight" in err


def test_invariant_failure_exit_2(capsys, monkeypatch, icosahedron_file):
    def broken(design):
        raise RankMismatch("L_1: closed form 3, trace 3, elimination 4")

    monkeypatch.setattr(design_runner, "analyze_design", broken)
    assert design_runner.main(["analyze", str(icosahedron_file)]) == 2
    assert "RankMismatch" in capsys.readouterr().err


def test_analysis_text_prints_polynomials(capsys, tmp_path):
    path = tmp_path / "hexagon.json"
    assert design_runner.main(["catalog", "polygon-6", "-o", str(path)]) == 0
    code, out = _run(capsys, "analyze", str(path))
    assert code == 0
    assert "Annihilator:     32*x^3 - 32*x^2 + 6*x\n" in out
    assert "Tight target:    32*x^3 - 32*x^2 + 6*x\n" in out

def test_analysis_text_uses_the_radicand(capsys, tmp_path):
    path = tmp_path / "pentagon.json"
    assert design_runner.main(["catalog", "polygon-5", "-o", str(path)]) == 0
    code, out = _run(capsys, "analyze", str(path))
    assert code == 0
    assert "3/8-1/8√5" in out
    assert "3/8+1/8√5" in out
    assert "√m" not in out


def test_tight_angles_with_wrong_pair_pattern(capsys, tmp_path):
    near, far = {"a": "3/8", "b": "1/8"}, {"a": "3/8", "b": "-1/8"}
    gram = [["1" if i == j else far for j in range(5)] for i in range(5)]
    for i in range(4):
        gram[i][i + 1] = gram[i + 1][i] = near
    path = tmp_path / "path.json"
    path.write_text(json.dumps({"geometry": {"rank": 2, "degree": 1}, "radicand": 5, "gram": gram}))

    code, out = _run(capsys, "analyze", str(path), "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["tight"] is True
    assert report["strength"] == 0
    assert report["strength_matches"] is False
    assert report["cardinality_matches"] is True

    code, out = _run(capsys, "analyze", str(path))
    assert "matches False" in out

    assert design_runner.main(["scheme", str(path)]) == 1
    assert "NotTight" in capsys.readouterr().err


def test_bad_radicand_exit_1(capsys, tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps({
        "geometry": {"rank": 2, "degree": 1},
        "radicand": 4,
        "gram": [["1", "1/2"], ["1/2", "1"]],
    }))
    assert design_runner.main(["analyze", str(path)]) == 1
    assert "square-free" in capsys.readouterr().err


def test_report_file_is_utf8_under_ascii_locale(tmp_path):
    target = tmp_path / "ranks.txt"
    root = Path(design_runner.__file__).resolve().parent
    env = dict(os.environ, LC_ALL="C", PYTHONUTF8="0", PYTHONCOERCECLOCALE="0")
    env.pop("PYTHONIOENCODING", None)
    result = subprocess.run(
        [sys.executable, "design_runner.py", "ranks", "--rank", "4", "--degree", "2",
         "--s", "2", "--eps", "1", "-o", str(target)],
        cwd=root, env=env, capture_output=True,
    )
    assert result.returncode == 0, result.stderr.decode("utf-8", "replace")
    assert "ℂP^3" in target.read_text(encoding="utf-8")
