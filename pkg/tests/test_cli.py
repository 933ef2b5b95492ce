import io
import json
from pathlib import Path

import pytest

from bialgebroid.cli import run
from bialgebroid.structfile import SchemaError, load, load_text

ROOT = Path(__file__).resolve().parent.parent
STRUCTURES = ROOT / "structures"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def emit(tmp_path, name):
    path = tmp_path / f"{name}.json"
    code, _, _ = call("emit-example", name, "-o", path)
    assert code == 0
    return path


@pytest.mark.parametrize("name, suite", [
    ("heisenberg", "yb"),
    ("su2_u2", "yb"),
    ("gl2", "yb"),
    ("contact_r3", "jacobi"),
    ("contact_r3", "glb"),
])
def test_emitted_examples_roundtrip(tmp_path, name, suite):
    code, out, err = call("verify", suite, emit(tmp_path, name), "--format", "json")
    assert code == 0, out + err
    assert json.loads(out)["passed"]


def test_emitted_files_match_shipped_structures(tmp_path):
    for name in ("heisenberg", "su2_u2", "gl2", "contact_r3"):
        assert json.loads(emit(tmp_path, name).read_text()) == json.loads((STRUCTURES / f"{name}.json").read_text())


def test_emit_heisenberg_content():
    code, out, _ = call("emit-example", "heisenberg")
    doc = json.loads(out)
    assert code == 0
    assert doc["kind"] == "yb_data"
    assert doc["bracket"] == [{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}]
    assert doc["bivector"] == [{"indices": [1, 2], "coeff": "1"}]
    assert doc["vector"] == ["0", "0", "-1"]


def test_emit_gl2_bivector():
    doc = json.loads(call("emit-example", "gl2")[1])
    assert doc["bivector"] == [{"indices": [1, 3], "coeff": "1"}, {"indices": [1, 4], "coeff": "1"},
                               {"indices": [3, 4], "coeff": "-1/2"}]


def test_emit_unknown_name():
    assert call("emit-example", "nope")[0] == 2


def test_verify_glb_contact_report():
    code, out, _ = call("verify", "glb", STRUCTURES / "contact_r3.json", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    status = {c["check_id"]: c["status"] for c in rep["checks"]}
    for cid in ("cond_4_1", "cond_4_3", "cond_4_4", "duality", "induced_jacobi_roundtrip"):
        assert status[cid] == "pass"


def test_verify_yb_heisenberg():
    code, out, _ = call("verify", "yb", STRUCTURES / "heisenberg.json")
    assert code == 0
    assert "FAIL" not in out


def test_verify_yb_su2_skips_center_reduction():
    code, out, _ = call("verify", "yb", STRUCTURES / "su2_u2.json", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert any(c["status"] == "skipped" for c in rep["checks"])


def test_verify_jacobi_broken_witness():
    code, out, _ = call("verify", "jacobi", STRUCTURES / "broken.json", "--format", "json")
    rep = json.loads(out)
    assert code == 1
    first = rep["checks"][0]
    assert first["check_id"] == "lambda_lambda"
    assert first["witness"] == {"indices": [1, 2, 3], "coeff": "-2"}


def test_json_report_is_deterministic():
    args = ("verify", "glb", STRUCTURES / "contact_r3.json", "--format", "json")
    assert call(*args)[1] == call(*args)[1]
    assert "elapsed" not in call(*args)[1]


def test_checks_filter():
    code, out, _ = call("verify", "jacobi", STRUCTURES / "broken.json", "--format", "json",
                        "--checks", "e_lambda,routes_agree")
    rep = json.loads(out)
    assert code == 0
    assert [c["check_id"] for c in rep["checks"]] == ["e_lambda", "routes_agree"]


def test_checks_filter_unknown_id_is_skipped():
    code, out, _ = call("verify", "jacobi", STRUCTURES / "contact_r3.json", "--format", "json",
                        "--checks", "nope")
    rep = json.loads(out)
    assert code == 0
    assert rep["checks"] == [{"check_id": "nope", "status": "skipped", "witness": "no such check in this suite"}]


def test_missing_file():
    code, _, err = call("verify", "jacobi", STRUCTURES / "does_not_exist.json")
    assert code == 2
    assert "cannot read file" in err


def test_wrong_kind_for_suite():
    code, _, err = call("verify", "yb", STRUCTURES / "contact_r3.json")
    assert code == 2
    assert err.startswith("input error")


def test_bad_arguments():
    assert call("verify", "nosuchsuite", "x.json")[0] == 2
    assert call()[0] == 2


@pytest.mark.parametrize("doc, path", [
    ({"kind": "lie_algebra", "rank": 3, "bracket": [{"i": 1, "j": 2, "coeffs": ["0", "0", "x"]}]},
     "$.bracket[0].coeffs[2]"),
    ({"kind": "lie_algebra", "rank": 2, "colour": 1}, "$.colour"),
    ({"kind": "widget"}, "$.kind"),
    ({"kind": "jacobi", "ring": {"vars": ["x", "y"]}, "bivector": [{"indices": [1, 3], "coeff": "1"}]},
     "$.bivector[0].indices[1]"),
    ({"kind": "jacobi", "ring": {"vars": ["x", "y"]}, "bivector": [{"indices": [1, 2], "coeff": "x +"}]},
     "$.bivector[0].coeff"),
    ({"kind": "glb_pair", "ring": {"vars": []}, "rank": 1, "anchor": [[]], "bracket": []}, "$.dual"),
    ({"kind": "lie_algebra", "rank": -1}, "$.rank"),
])
def test_schema_errors_are_located(doc, path):
    with pytest.raises(SchemaError) as err:
        load(doc)
    assert err.value.path == path


def test_schema_error_through_cli(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"kind": "lie_algebra", "rank": 3,
                             "bracket": [{"i": 1, "j": 2, "coeffs": ["0", "0", "x"]}]}))
    code, _, err = call("verify", "algebroid", f)
    assert code == 2
    assert "$.bracket[0].coeffs[2]" in err


def test_invalid_json_located():
    with pytest.raises(SchemaError) as err:
        load_text('{"kind": ')
    assert err.value.path.startswith("line 1")


def test_triangular_and_poissonize_commands():
    code, out, _ = call("triangular", STRUCTURES / "contact_r3.json", "--format", "json")
    assert code == 0, out
    code, out, _ = call("poissonize", STRUCTURES / "contact_r3.json", "--format", "json")
    assert code == 0, out
    code, out, _ = call("bialgebroidize", STRUCTURES / "contact_r3.json", "--format", "json")
    assert code == 0, out
    assert json.loads(out)["passed"]


def test_verify_algebroid_lie_algebra(tmp_path):
    f = tmp_path / "su2.json"
    f.write_text(json.dumps({"kind": "lie_algebra", "rank": 3, "bracket": [
        {"i": 1, "j": 2, "coeffs": ["0", "0", "-1"]},
        {"i": 1, "j": 3, "coeffs": ["0", "1", "0"]},
        {"i": 2, "j": 3, "coeffs": ["-1", "0", "0"]}]}))
    assert call("verify", "algebroid", f)[0] == 0
    f.write_text(json.dumps({"kind": "lie_algebra", "rank": 3, "bracket": [
        {"i": 1, "j": 2, "coeffs": ["1", "0", "-1"]},
        {"i": 1, "j": 3, "coeffs": ["0", "1", "0"]},
        {"i": 2, "j": 3, "coeffs": ["-1", "0", "0"]}]}))
    code, out, _ = call("verify", "algebroid", f, "--format", "json")
    assert code == 1
    assert json.loads(out)["checks"][0]["status"] == "fail"
