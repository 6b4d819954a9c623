"""The command-line surface: documents, exit codes, output shapes."""

import json
import subprocess
import sys

import pytest

from kmnfree import emit_structure, gamma, isomorphic_over, parse_structure
from kmnfree.cli import DocumentError, dispatch, fixture_text

from conftest import build, quadrangle_structure


def run(capsys, *argv):
    code = dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# ---------------------------------------------------------------------------
# document format


def test_round_trip_is_byte_exact(quadrangle):
    text = emit_structure(quadrangle)
    again = emit_structure(parse_structure(text))
    assert again == text
    assert text.endswith("\n")


def test_round_trip_preserves_structure():
    s = build(2, 3, points=("p", "q"), lines=("u",),
              incidences=[("p", "u")])
    t = parse_structure(emit_structure(s))
    assert t.params == s.params
    assert isomorphic_over(s, t, {e: t.by_name(s.name(e))
                                  for e in s.elements()})


def test_parse_rejections():
    cases = [
        ("{", "malformed document"),
        ("[]", "top level must be an object"),
        ('{"m": 2, "n": 2}', "missing 'points'"),
        ('{"m": 2, "n": 2, "points": [], "lines": [], "incidences": [],'
         ' "extra": 1}', "unknown document keys"),
        ('{"m": "x", "n": 2, "points": [], "lines": [], "incidences": []}',
         "m and n must be integers"),
        ('{"m": 2, "n": 2, "points": ["p", "p"], "lines": [],'
         ' "incidences": []}', "duplicate name: p"),
        ('{"m": 2, "n": 2, "points": ["p"], "lines": [],'
         ' "incidences": [["p"]]}', "bad incidence entry"),
        ('{"m": 2, "n": 2, "points": ["p"], "lines": [],'
         ' "incidences": [["p", "nope"]]}', "unknown name: nope"),
        ('{"m": 2, "n": 2, "points": ["p"], "lines": ["z"],'
         ' "incidences": [["z", "p"]]}', "z is not a point"),
    ]
    for text, needle in cases:
        with pytest.raises(DocumentError) as exc:
            parse_structure(text)
        assert needle in str(exc.value), text


def test_dot_output(quadrangle):
    s = build(2, 2, points=("p", "q"), lines=('l"1',),
              incidences=[("p", 'l"1')])
    dot = emit_structure(s, fmt="dot")
    assert dot.startswith("graph incidence {")
    assert '"p" -- "l\\"1";' in dot
    assert dot.count("--") == 1


def test_fixture_matches_generator():
    s = parse_structure(fixture_text("gamma_empty.json"))
    g = gamma("").structure
    assert isomorphic_over(g, s, {e: s.by_name(g.name(e))
                                  for e in g.elements()})
    assert emit_structure(s) == fixture_text("gamma_empty.json")


# ---------------------------------------------------------------------------
# exit code 0: decided queries


def test_check_command(capsys, tmp_path):
    f = tmp_path / "q.json"
    f.write_text(emit_structure(quadrangle_structure()))
    code, doc, err = run_json(capsys, "check", str(f))
    assert code == 0
    assert doc["free"] is True and doc["complete"] is False
    assert doc["completeness_failure"]["kind"] == "points"
    assert "free, not complete" in err


def test_check_classifies_nonfree(capsys, tmp_path):
    grid = build(2, 2, points=("p", "q"), lines=("u", "v"),
                 incidences=[(p, l) for p in "pq" for l in "uv"],
                 guard=False)
    f = tmp_path / "grid.json"
    f.write_text(emit_structure(grid))
    code, doc, err = run_json(capsys, "check", str(f))
    assert code == 0
    assert doc["free"] is False
    assert sorted(doc["freeness_witness"]["points"]) == ["p", "q"]


def test_complete_command(capsys, tmp_path):
    f = tmp_path / "q.json"
    f.write_text(emit_structure(quadrangle_structure()))
    code, doc, err = run_json(capsys, "complete", str(f), "--stages", "2")
    assert code == 0
    assert len(doc["points"]) + len(doc["lines"]) == 13
    # fresh elements carry stage and spawner annotations
    prov = doc["provenance"]
    assert all(entry["stage"] in (1, 2) for entry in prov.values())
    spawners = next(iter(prov.values()))["spawner"]
    assert isinstance(spawners, list)


def test_glue_rejection_is_decided(capsys, tmp_path):
    names = {}
    for key, pts in [("xa", ("d", "a")), ("xb", ("b",)), ("xc", ("d", "c")),
                     ("xab", ("d", "a", "b")), ("xac", ("d", "a", "c")),
                     ("xbc", ("d", "b", "c"))]:
        f = tmp_path / f"{key}.json"
        f.write_text(emit_structure(build(2, 2, points=pts)))
        names[key] = str(f)
    code, doc, err = run_json(
        capsys, "glue", "--d", "d",
        *[arg for key in names for arg in (f"--{key}", names[key])])
    assert code == 0
    assert doc["ok"] is False
    assert doc["hypothesis"] == "base:D<=X_b"


def test_indep_dependent_is_decided(capsys, tmp_path):
    f = tmp_path / "bm.json"
    code, out, err = run(capsys, "bm", "--m", "2", "--n", "2")
    assert code == 0
    f.write_text(out)
    code, doc, err = run_json(capsys, "indep", str(f), "--rel", "i",
                              "--a", "a1,a2", "--b", "b", "--c", "c1")
    assert code == 0
    assert doc["status"] == "dependent"
    assert doc["witness"] == ["b", "z"]


def test_separate_command(capsys):
    code, doc, err = run_json(capsys, "separate", "--eta", "0")
    assert code == 0
    assert doc["separates"] is True


def test_gamma_command(capsys):
    code, doc, err = run_json(capsys, "gamma", "--eta", "01")
    assert code == 0
    assert len(doc["points"]) == 19
    assert len(doc["lines"]) == 18


def test_sequence_command(capsys, tmp_path):
    f = tmp_path / "amb.json"
    f.write_text(emit_structure(build(2, 2, points=("b0",), lines=("c1",))))
    code, doc, err = run_json(capsys, "sequence", str(f),
                              "--b", "b0,c1", "--length", "3")
    assert code == 0
    assert doc["tuples"] == [["b0", "c1"], ["b0'", "c1'"], ["b0''", "c1''"]]


def test_pattern_command(capsys):
    code, doc, err = run_json(capsys, "pattern", "--instances", "1")
    assert code == 0
    assert doc["status"] == "consistent"
    code, doc, err = run_json(capsys, "pattern", "--instances", "3")
    assert code == 0
    assert doc["status"] == "inconsistent"


def test_plane_found(capsys):
    code, doc, err = run_json(capsys, "plane", "--order", "2")
    assert code == 0
    assert len(doc["points"]) == 7 and len(doc["lines"]) == 7


def test_embed_with_order(capsys, tmp_path):
    f = tmp_path / "q.json"
    f.write_text(emit_structure(quadrangle_structure()))
    code, doc, err = run_json(capsys, "embed", str(f), "--order", "2")
    assert code == 0
    assert doc["status"] == "found"
    assert set(doc["mapping"]) == {"p1", "p2", "p3", "p4"}


def test_stdin_dash(capsys, tmp_path, monkeypatch):
    import io
    text = emit_structure(quadrangle_structure())
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code, doc, err = run_json(capsys, "check", "-")
    assert code == 0
    assert doc["free"] is True


# ---------------------------------------------------------------------------
# exit code 1: malformed input


def test_usage_errors(capsys, tmp_path):
    code, doc, err = run_json(capsys)
    assert code == 1 and "subcommand" in doc["error"]

    code, doc, err = run_json(capsys, "closure")
    assert code == 1  # missing required flags

    f = tmp_path / "bad.json"
    f.write_text("{nope")
    code, doc, err = run_json(capsys, "check", str(f))
    assert code == 1
    assert "malformed document" in doc["error"]

    code, doc, err = run_json(capsys, "check", str(tmp_path / "absent.json"))
    assert code == 1

    code, doc, err = run_json(capsys, "bm", "--m", "1")
    assert code == 1
    assert "m, n >= 2" in doc["error"]


def test_unknown_set_name(capsys, tmp_path):
    f = tmp_path / "q.json"
    f.write_text(emit_structure(quadrangle_structure()))
    code, doc, err = run_json(capsys, "closure", str(f), "--set", "p1,zz")
    assert code == 1
    assert "zz" in doc["error"]


# ---------------------------------------------------------------------------
# exit code 2: undecided


def test_unconverged_closure_exits_2(capsys, tmp_path, quad_run):
    # closure of the four seeds inside the big stage-5 ambient keeps
    # growing past any 3-stage prefix
    f = tmp_path / "big.json"
    f.write_text(emit_structure(quad_run.final.structure))
    code, doc, err = run_json(capsys, "closure", str(f),
                              "--set", "p1,p2,p3,p4", "--stages", "3")
    assert code == 2
    assert doc["converged"] is False
    assert doc["sizes"] == [4, 10, 13, 16]


def test_plane_budget_exits_2(capsys):
    code, doc, err = run_json(capsys, "plane", "--order", "6",
                              "--budget", "500")
    assert code == 2
    assert doc["status"] == "unknown"


def test_budget_error_exits_2(capsys, tmp_path):
    f = tmp_path / "q.json"
    f.write_text(emit_structure(quadrangle_structure()))
    code, doc, err = run_json(capsys, "complete", str(f),
                              "--stages", "6", "--elements", "100")
    assert code == 2
    assert doc["status"] == "unknown"


# ---------------------------------------------------------------------------
# the installed entry point


def test_console_script_round_trip(tmp_path):
    out = subprocess.run(
        ["kmnfree", "gamma", "--eta", ""],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout == fixture_text("gamma_empty.json")
    assert out.returncode == 0
