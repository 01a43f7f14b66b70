"""CLI behaviour: exit codes, output formats, piping between subcommands."""

import io
import json

import pytest

from latcert import exactlin as xl
from latcert.cli import main
from latcert.forms import e8_form, unit_form
from latcert.realize import verify_certificate


def invoke(capsys, monkeypatch, args, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gram_doc(form):
    return json.dumps(form.to_json_dict())


def test_snf_closed_form_matrix(capsys, monkeypatch):
    # ones-plus-identity in rank 3 has invariant factors 1, 1, 4
    m = [[2 if i == j else 1 for j in range(3)] for i in range(3)]
    code, out, _ = invoke(capsys, monkeypatch, ["snf", "-"], json.dumps({"matrix": m}))
    assert code == 0
    assert out.strip() == "diag(1,1,4)"


def test_snf_json_transforms_verify(capsys, monkeypatch):
    m = [[2, 1], [1, 2]]
    code, out, _ = invoke(capsys, monkeypatch, ["snf", "-", "--format", "json"],
                          json.dumps(m))
    assert code == 0
    doc = json.loads(out)
    d = [[doc["diagonal"][i] if i == j else 0 for j in range(2)] for i in range(2)]
    assert xl.mat_eq(xl.mat_mul(doc["u"], xl.mat_mul(m, doc["v"])), d)


def test_roots_e8_norm_two(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch, ["roots", "-", "--norm", "2"],
                          gram_doc(e8_form()))
    assert code == 0
    assert out.strip() == "240"


def test_roots_json_format(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch,
                          ["roots", "-", "--norm", "4", "--format", "json"],
                          gram_doc(unit_form(2)))
    assert code == 0
    assert json.loads(out) == {"norm": 4, "count": 4}


def test_fingerprint_unit_form(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch,
                          ["fingerprint", "-", "--format", "json"],
                          gram_doc(unit_form(3)))
    assert code == 0
    assert json.loads(out) == {"counts": {"1": 6, "2": 12, "3": 8}, "min_norm": 1}


def test_bare_matrix_accepted_as_form(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch, ["roots", "-"],
                          json.dumps([[2, 1], [1, 2]]))
    assert code == 0
    assert out.strip() == "6"


def test_neighbors_counts(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch,
                          ["neighbors", "-", "--format", "json"],
                          gram_doc(unit_form(8)))
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 2
    assert all(n["parity"] == "even" for n in doc["neighbors"])

    code, out, _ = invoke(capsys, monkeypatch,
                          ["neighbors", "-", "--format", "json"],
                          gram_doc(unit_form(9)))
    assert json.loads(out)["count"] == 0


def test_exterior_output_feeds_linking(capsys, monkeypatch):
    code, ext_out, _ = invoke(capsys, monkeypatch,
                              ["exterior", "-", "--format", "json"],
                              gram_doc(unit_form(3)))
    assert code == 0
    code, out, _ = invoke(capsys, monkeypatch, ["linking", "-", "--format", "json"],
                          ext_out)
    assert code == 0
    doc = json.loads(out)
    assert doc["factors"] == [4]
    assert sum(c for _, c in doc["value_multiset"]) == 4


def test_pullback_round_trip(capsys, monkeypatch):
    doc = {"module": [0, 1, 2],
           "plus": {"gram": [[0, 1], [1, 0]]},
           "minus": {"gram": [[2, 0, 0], [0, 2, 1], [0, 1, 4]]}}
    code, out, _ = invoke(capsys, monkeypatch,
                          ["pullback", "-", "--format", "json"], json.dumps(doc))
    assert code == 0
    herm = json.loads(out)
    assert herm["module"] == [0, 1, 2]
    assert len(herm["gram"]) == 3


def test_isometry_both_verdicts_exit_zero(capsys, monkeypatch):
    doc = {"source": {"gram": [[2, 1], [1, 2]]}, "target": {"gram": [[2, -1], [-1, 2]]}}
    code, out, _ = invoke(capsys, monkeypatch, ["isometry", "-", "--format", "json"],
                          json.dumps(doc))
    assert code == 0
    res = json.loads(out)
    assert res["isometric"] is True
    m = res["matrix"]
    assert abs(xl.det(m)) == 1

    doc = {"source": {"gram": [[2]]}, "target": {"gram": [[4]]}}
    code, out, _ = invoke(capsys, monkeypatch, ["isometry", "-", "--format", "json"],
                          json.dumps(doc))
    assert code == 0
    assert json.loads(out) == {"isometric": False, "matrix": None}


def test_certify_unit_nine_not_knotted(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch, ["certify", "-"], gram_doc(unit_form(9)))
    assert code == 0
    assert "knotted: false" in out
    assert "status: realized" in out


def test_certify_json_reverifies(capsys, monkeypatch):
    code, out, _ = invoke(capsys, monkeypatch,
                          ["certify", "-", "--format", "json", "--seed", "1",
                           "--budget", "50"],
                          gram_doc(unit_form(2)))
    assert code == 0
    assert verify_certificate(json.loads(out))


def test_reads_from_file(tmp_path, capsys, monkeypatch):
    path = tmp_path / "form.json"
    path.write_text(gram_doc(unit_form(2)))
    code, out, _ = invoke(capsys, monkeypatch, ["roots", str(path)])
    assert code == 0
    assert out.strip() == "4"


def test_json_output_is_deterministic(capsys, monkeypatch):
    args = ["linking", "-", "--format", "json"]
    doc = json.dumps({"gram": [[2, 1], [1, 2]]})
    _, first, _ = invoke(capsys, monkeypatch, args, doc)
    _, second, _ = invoke(capsys, monkeypatch, args, doc)
    assert first == second


def test_domain_error_gives_payload_and_exit_one(capsys, monkeypatch):
    # linking rejects odd diagonals with a typed error
    code, out, err = invoke(capsys, monkeypatch, ["linking", "-"],
                            json.dumps({"gram": [[1, 0], [0, 1]]}))
    assert code == 1
    assert out == ""
    payload = json.loads(err)
    assert payload["error"] == "NotEven"
    assert payload["message"]


def test_malformed_json_exit_one(capsys, monkeypatch):
    code, _, err = invoke(capsys, monkeypatch, ["roots", "-"], "not json")
    assert code == 1
    assert json.loads(err)["error"] == "JSONDecodeError"


def test_missing_file_exit_one(capsys, monkeypatch):
    code, _, err = invoke(capsys, monkeypatch, ["roots", "/nonexistent/x.json"])
    assert code == 1
    assert "error" in json.loads(err)


def test_pullback_rank_mismatch_exit_one(capsys, monkeypatch):
    doc = {"module": [0, 1, 2], "plus": {"gram": [[0, 1], [1, 0]]},
           "minus": {"gram": [[2, 0], [0, 4]]}}
    code, _, err = invoke(capsys, monkeypatch, ["pullback", "-"], json.dumps(doc))
    assert code == 1
    assert json.loads(err)["error"] == "ValueError"


def test_usage_errors_exit_two(capsys, monkeypatch):
    assert invoke(capsys, monkeypatch, [])[0] == 2
    assert invoke(capsys, monkeypatch, ["nosuch", "-"])[0] == 2
    assert invoke(capsys, monkeypatch, ["roots", "-", "--norm", "-3"])[0] == 2


def test_thread_env_var_tolerated(capsys, monkeypatch):
    monkeypatch.setenv("LATCERT_THREADS", "garbage")
    code, out, _ = invoke(capsys, monkeypatch, ["roots", "-", "--norm", "1"],
                          gram_doc(unit_form(1)))
    assert code == 0
    assert out.strip() == "2"
