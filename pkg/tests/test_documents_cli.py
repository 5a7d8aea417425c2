import json
import random
import shutil
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toric_mmp import gallery
from toric_mmp.cli import main
from toric_mmp.documents import (
    FanDocument,
    document_from_dict,
    load_document,
    parse_document,
    replay_trace,
    serialize_document,
    serialize_trace,
)
from toric_mmp.errors import ParseError, ValidationError
from toric_mmp.fan import Fan
from toric_mmp.foliation import FoliationForm
from toric_mmp.mmp import run_mmp
from toric_mmp.sampling import mmp_instance, random_boundary, random_form

from _cases import FLOP_FORM, X1


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(p)


P2_DOC = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2], [0, 2]]}


def test_round_trip_is_canonical():
    doc = document_from_dict({**P2_DOC, "cones": [[1, 0], [2, 1], [2, 0]], "lambda": {"rational": ["2/4", -1]}})
    text = serialize_document(doc)
    again = parse_document(text)
    assert serialize_document(again) == text
    data = json.loads(text)
    assert data["cones"] == [[0, 1], [0, 2], [1, 2]]
    assert data["lambda"] == {"rational": ["1/2", "-1"], "tau": ["0", "0"]}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_property(seed):
    rng = random.Random(seed)
    _, fan, _ = mmp_instance(rng)
    lam = random_form(rng, fan.dim)
    delta = {i: d for i, d in enumerate(random_boundary(rng, fan)) if d}
    doc = FanDocument(fan, lam, delta, name=f"case {seed}")
    back = parse_document(serialize_document(doc))
    assert back.fan == fan and back.fan.rays == fan.rays
    assert back.form.rat == lam.rat and back.form.tau == lam.tau
    assert back.boundary == delta and back.name == doc.name


@pytest.mark.parametrize(
    "data, where",
    [
        ({**P2_DOC, "rays": [[1, 0], [0, "x"], [-1, -1]]}, "rays[1][1]"),
        ({**P2_DOC, "cones": [[0, 1], [1, 5]]}, "cones[1][1]"),
        ({**P2_DOC, "lambda": {"rational": ["1/0", 1]}}, "lambda.rational[0]"),
        ({**P2_DOC, "lambda": {"rational": [1]}}, "lambda.rational"),
        ({**P2_DOC, "boundary": {"7": 1}}, "boundary[7]"),
        ({"dim": 2, "rays": []}, "cones"),
        ({**P2_DOC, "colour": "red"}, "$"),
    ],
)
def test_parse_errors_name_the_field(data, where):
    with pytest.raises(ParseError) as info:
        document_from_dict(data)
    assert where in str(info.value)


def test_json_syntax_error_has_line_and_column(tmp_path):
    path = _write(tmp_path, "bad.json", '{\n  "dim": 2,\n  "rays": [[1, 0],\n}')
    with pytest.raises(ParseError) as info:
        load_document(path)
    assert "bad.json:4:" in str(info.value)


def test_non_primitive_ray_is_a_validation_error(tmp_path):
    path = _write(tmp_path, "np.json", {"dim": 2, "rays": [[2, 4], [0, 1]], "cones": [[0, 1]]})
    with pytest.raises(ValidationError) as info:
        load_document(path)
    assert "NonPrimitiveRay" in str(info.value)
    assert main(["analyze", path]) == 2


def test_analyze(capsys):
    assert main(["analyze", "gallery:p2"]) == 0
    assert "complete smooth, rank 1, 3 walls" in capsys.readouterr().out
    assert main(["analyze", "gallery:f1"]) == 0
    assert "complete smooth, rank 2, 4 walls" in capsys.readouterr().out


def test_analyze_json(capsys):
    assert main(["analyze", "gallery:p1cubed", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["picard_rank"] == 3 and len(data["walls"]) == 12


def test_foliation_check(capsys):
    assert main(["foliation-check", "gallery:c2-radial"]) == 0
    assert "dicritical with witness (1, 1)" in capsys.readouterr().out
    assert main(["foliation-check", "gallery:c2-irrational"]) == 0
    assert "non-dicritical: yes" in capsys.readouterr().out
    assert main(["foliation-check", "gallery:p2-pencil"]) == 0
    out = capsys.readouterr().out
    assert "= -1" in out and "pullback rank 1" in out


def test_foliation_check_needs_lambda(capsys):
    assert main(["foliation-check", "gallery:p2"]) == 2


def test_run_mmp_commands(tmp_path, capsys):
    out = tmp_path / "trace.json"
    assert main(["run-mmp", "gallery:paper-flop", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "1 flip" in text and "certified: yes" in text and "= 1" in text
    trace = json.loads(out.read_text())
    assert [s["contraction"]["type"] for s in trace["steps"]] == ["flip"]
    assert replay_trace(out.read_text())

    assert main(["run-mmp", "gallery:f1-pencil"]) == 0
    assert "outcome: fibre_space after 1 step (0 divisorial" in capsys.readouterr().out
    assert main(["run-mmp", "gallery:p2-trivial"]) == 0
    assert "outcome: nef_model after 0 steps" in capsys.readouterr().out


def test_step_cap_exit_code(tmp_path, capsys):
    out = tmp_path / "partial.json"
    assert main(["run-mmp", "gallery:paper-flop", "--step-cap", "0", "--out", str(out)]) == 4
    assert json.loads(out.read_text())["steps"] == []


def test_non_convex_support_exit_code(tmp_path):
    path = _write(
        tmp_path,
        "l.json",
        {
            "dim": 2,
            "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
            "cones": [[0, 1], [1, 2], [2, 3]],
            "lambda": {"rational": [1, 1]},
        },
    )
    assert main(["run-mmp", path]) == 2


def test_theorem_violation_exit_code(monkeypatch):
    from toric_mmp import cli
    from toric_mmp.errors import TheoremViolation

    def boom(*a, **k):
        raise TheoremViolation("forced", {"detail": 1})

    monkeypatch.setattr(cli, "run_mmp", boom)
    assert main(["run-mmp", "gallery:paper-flop"]) == 3


def test_oracle_command(tmp_path, capsys):
    pts = _write(tmp_path, "pts.txt", "(1,1)\n# comment\n1 0\n[-1, 1]\n")
    assert main(["oracle", "gallery:c2-radial", "--points", pts]) == 0
    out = capsys.readouterr().out
    assert "(1, 1): formula -1, oracle -1, equal" in out
    assert "(1, 0): existing ray" in out
    assert "(-1, 1): skipped" in out
    assert main(["oracle", "gallery:paper-flop", "--random", "20", "--seed", "3", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["mismatches"] == 0


def test_oracle_bad_points_file(tmp_path):
    pts = _write(tmp_path, "pts.txt", "1 x\n")
    assert main(["oracle", "gallery:c2-radial", "--points", pts]) == 2


def test_missing_inputs():
    assert main(["analyze", "gallery:nope"]) == 2
    assert main(["analyze", "/nonexistent/file.json"]) == 2
    assert main([]) == 2


def test_replay_detects_tampering():
    text = serialize_trace(run_mmp(X1, FLOP_FORM))
    assert replay_trace(text)
    assert '"kf_degree": "-1"' in text
    assert not replay_trace(text.replace('"kf_degree": "-1"', '"kf_degree": "-2"'))


def test_replay_determinism_on_random_runs():
    rng = random.Random(51)
    for k in range(5):
        _, fan, lam = mmp_instance(rng)
        a = serialize_trace(run_mmp(fan, lam, "random", seed=k))
        b = serialize_trace(run_mmp(fan, lam, "random", seed=k))
        assert a == b and replay_trace(a)


def test_gallery_override(tmp_path, monkeypatch, capsys):
    shutil.copy(gallery.resolve("gallery:p2"), tmp_path / "mine.json")
    monkeypatch.setenv(gallery.ENV_VAR, str(tmp_path))
    assert gallery.gallery_names() == ["mine"]
    assert main(["analyze", "gallery:mine"]) == 0
    assert "rank 1" in capsys.readouterr().out
    assert main(["--check-gallery"]) == 1
    assert "missing golden" in capsys.readouterr().out
    gallery.write_goldens()
    assert main(["--check-gallery"]) == 0


def test_gallery_drift_is_reported(tmp_path, monkeypatch, capsys):
    for suffix in (".json", ".expected.json"):
        shutil.copy(gallery.gallery_dir() / f"f1{suffix}", tmp_path / f"f1{suffix}")
    golden = tmp_path / "f1.expected.json"
    data = json.loads(golden.read_text())
    data["analysis"]["relative_rank"] = 99
    golden.write_text(json.dumps(data))
    monkeypatch.setenv(gallery.ENV_VAR, str(tmp_path))
    assert main(["--check-gallery"]) == 1
    assert "differs in analysis" in capsys.readouterr().out


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "toric-mmp 0.1.0" in capsys.readouterr().out
