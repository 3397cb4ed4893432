import json

import pytest

import afx.stanley
from afx.cli import main
from afx.polytope import box, cube, polytope_to_json, segment


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    C1, C2 = cube(4), box((0, 0, 0, 0), (1, 1, 0, 0))
    M, N = segment((0, 0, 0, 0), (1, 0, 0, 0)), segment((0, 0, 0, 0), (0, 1, 0, 0))
    bodies = {"bodies": [json.loads(polytope_to_json(C1)), json.loads(polytope_to_json(C2))]}
    return {
        "cube": write("cube.json", polytope_to_json(cube(3))),
        "exdeg": write("exdeg.json", json.dumps(bodies)),
        "f": write("f.json", json.dumps({"plus": json.loads(polytope_to_json(M)),
                                          "minus": json.loads(polytope_to_json(N))})),
        "axes": [write(f"e{i}.json", polytope_to_json(segment((0, 0, 0), e)))
                 for i, e in enumerate([(1, 0, 0), (0, 1, 0), (0, 0, 1)])],
        "chain": write("chain3.poset", "y1 *x y2\ny1 < x\nx < y2\n"),
        "badjson": write("bad.json", '{"dim": 3,\n "vertices": [[0, 0 0]]}'),
        "badposet": write("bad.poset", "a *x\na < q\n"),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.splitlines(), err


def test_mixedvol_cube(capsys, files):
    code, out, _ = run(capsys, "mixedvol", files["cube"], files["cube"], files["cube"])
    assert code == 0 and out == ["1"]


def test_mixedvol_json_and_decimal(capsys, files):
    code, out, _ = run(capsys, "--json", "mixedvol", files["cube"], files["cube"], files["cube"])
    assert json.loads(out[0]) == {"mixed_volume": {"q": "1", "g": "1"}}
    code, out, _ = run(capsys, "--decimal", "mixedvol", files["cube"], files["cube"], files["cube"])
    assert out == ["1"]
    code, out, _ = run(capsys, "--decimal", "mixedvol", *files["axes"])
    assert out[0].startswith("1/6") and "inexact" in out[0]


def test_stanley_chain(capsys, files):
    code, out, _ = run(capsys, "stanley", files["chain"])
    assert code == 0
    assert out[0] == "N = [0, 1, 0]; trivial zeros at i=1,3"


def test_extremal_worked_example(capsys, files):
    code, out, _ = run(capsys, "extremal", files["exdeg"])
    assert code == 0
    assert out[0] == "class=critical, dim X = 5 = 4 (linear) + 1 (D_1)"


def test_extremal_with_test_function(capsys, files):
    code, out, _ = run(capsys, "extremal", files["exdeg"], "--test", files["f"])
    assert code == 0 and out[0] == "extremal: yes"


def test_classify_and_areameasure(capsys, files):
    code, out, _ = run(capsys, "classify", files["exdeg"])
    assert code == 0 and out[0] == "class=critical"
    code, out, _ = run(capsys, "--json", "areameasure", files["cube"], files["cube"])
    assert code == 0 and len(json.loads(out[0])["atoms"]) == 6


def test_output_is_deterministic(capsys, files):
    first = run(capsys, "extremal", files["exdeg"], "--seed", "3")
    assert run(capsys, "extremal", files["exdeg"], "--seed", "3") == first


def test_malformed_json_exits_1_with_location(capsys, files):
    code, _, err = run(capsys, "mixedvol", files["badjson"])
    assert code == 1
    assert err.startswith("error: line 2, col")


def test_malformed_poset_exits_1_with_location(capsys, files):
    code, _, err = run(capsys, "stanley", files["badposet"])
    assert code == 1
    assert "line 2, col 4" in err


def test_wrong_arity_exits_1(capsys, files):
    code, _, _ = run(capsys, "mixedvol", files["cube"])
    assert code == 1


def test_invariant_violation_exits_2(capsys, files, monkeypatch):
    # a sequence reported as not log-concave can only be a bug
    monkeypatch.setattr(afx.stanley.RankSequence, "log_concave", lambda self: False)
    code, _, err = run(capsys, "stanley", files["chain"])
    assert code == 2 and "invariant violation" in err
