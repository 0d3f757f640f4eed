from __future__ import annotations

import csv
import io
import json

import pytest

from embednum.main import EXIT_CONTRADICTION, EXIT_INVALID, EXIT_OK, run
from embednum.utils.output import OutputRecord


def invoke(*argv: str):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue().rstrip("\n")


def invoke_json(*argv: str):
    code, text = invoke(*argv, "--format", "json")
    assert code == EXIT_OK
    return json.loads(text)


class TestBoundQueries:
    def test_poincare_sphere(self):
        code, text = invoke("brieskorn", "2", "3", "5")
        assert code == EXIT_OK
        assert text.splitlines()[0] == "Sigma(2,3,5): exact 8 (Unconditional)"

    def test_poincare_sphere_json(self):
        record = OutputRecord.from_dict(invoke_json("brieskorn", "5", "3", "2"))
        assert record.manifold == "Sigma(2,3,5)"
        assert record.exact and record.lower == 8
        assert record.citations

    @pytest.mark.parametrize("r", ["7", "19", "31"])
    def test_d_zero_family(self, r):
        record = OutputRecord.from_dict(invoke_json("brieskorn", "2", "3", r, "--d-zero"))
        assert record.exact and record.lower == 10

    def test_d_zero_trace(self):
        code, text = invoke("brieskorn", "2", "3", "7", "--d-zero", "--trace")
        assert code == EXIT_OK
        assert "m=8: infeasible" in text
        assert "m=9: infeasible" in text
        assert "U = E8, V = -E8" in text
        assert "-E8 ⊕ H" in text

    def test_sign_pattern_brieskorn(self):
        code, text = invoke("brieskorn", "3", "5", "7")
        assert code == EXIT_OK
        lines = text.splitlines()
        assert lines[0] == "Sigma(3,5,7): exact 2 (Unconditional)"
        assert any("Fintushel-Stern" in line for line in lines)

    def test_lens(self):
        code, text = invoke("lens", "3", "1")
        assert code == EXIT_OK
        assert text.startswith("L(3,1): exact 2 (Unconditional)")

    def test_lens_normalizes_q(self):
        record = OutputRecord.from_dict(invoke_json("lens", "7", "8"))
        assert record.manifold == "L(7,1)"
        assert record.lower == record.upper == 6

    def test_lens_with_plumbing_spin_structure(self):
        records = [OutputRecord.from_dict(r) for r in invoke_json("lens", "12", "11")]
        assert [r.manifold for r in records] == ["L(12,11)", "L_12 (plumbing spin structure)"]
        assert records[0].exact and records[0].lower == 1
        assert records[1].exact and records[1].lower == 11

    def test_lens_table(self):
        records = invoke_json("lens-table", "--max", "12")
        assert [r["manifold"] for r in records] == [f"L_{n}" for n in range(2, 13)]
        assert [r["lower"] for r in records] == list(range(1, 12))
        assert all(r["exact"] for r in records)

    def test_lens_trace_in_json(self):
        data = invoke_json("lens", "3", "1", "--trace")
        assert data["trace"]
        assert OutputRecord.from_dict(data).trace == data["trace"]

    def test_surgery(self):
        assert invoke("surgery", "2", "1")[1].startswith("S^3_{2/1}(K): exact 1")
        assert invoke("surgery", "3", "1")[1].startswith("S^3_{3/1}(K): >= 2")

    def test_dbc(self):
        code, text = invoke("dbc", "--genus", "1", "--unknotting", "1")
        assert code == EXIT_OK
        assert text.startswith("Sigma(K), g=1, u=1: [0, 2]")

    def test_csv_record(self):
        code, text = invoke("lens", "5", "2", "--format", "csv")
        assert code == EXIT_OK
        header, row = csv.reader(io.StringIO(text))
        assert header == ["manifold", "lower", "upper", "exact", "assumption", "citations"]
        assert row[:5] == ["L(5,2)", "2", "2", "True", "Unconditional"]
        assert row[5]


class TestSplittings:
    @pytest.mark.parametrize("n", ["1", "2", "3", "4"])
    def test_yn(self, n):
        code, text = invoke("split", "yn", n, "--assume-11-8")
        assert code == EXIT_OK
        assert text.splitlines()[0] == f"Y_{n}: exact {6 * int(n)} (Assumes11_8)"

    def test_zn(self):
        code, text = invoke("split", "zn", "1", "--assume-11-8")
        assert code == EXIT_OK
        assert text.splitlines()[0] == "Z_1: exact 24 (Assumes11_8)"

    def test_large_zn(self):
        code, text = invoke("split", "zn", "40", "--assume-11-8")
        assert code == EXIT_OK
        assert text.splitlines()[0] == "Z_40: exact 960 (Assumes11_8)"

    def test_trace_lists_checks(self):
        code, text = invoke("split", "yn", "1", "--assume-11-8", "--trace")
        assert code == EXIT_OK
        assert "check: |det(U)| = 7 = 7^n" in text
        assert "closed-form lower from the rank 38 definite filling: 6" in text


class TestTables:
    def test_figure1_csv(self):
        code, text = invoke("table", "figure1", "--format", "csv")
        assert code == EXIT_OK
        assert text.splitlines() == ["3,5,7,9,11,13,15,17,19", "2,4,6,8,10,10,8,6,4"]

    def test_small_ln_json(self):
        data = invoke_json("table", "small-ln")
        assert data["table"] == "small_ln"
        assert [c["value"] for c in data["cells"]] == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11,
                                                       10, 9, 8, 7, 6, 5, 4]

    def test_figure1_text(self):
        code, text = invoke("table", "figure1")
        assert code == EXIT_OK
        header, values = text.splitlines()[:2]
        assert header.split() == ["n", "3", "5", "7", "9", "11", "13", "15", "17", "19"]
        assert values.split() == ["eps", "2", "4", "6", "8", "10", "10", "8", "6", "4"]

    def test_limit(self):
        data = invoke_json("limit")
        assert data["lower"] == "1/9"
        assert data["upper"] == "5/19"
        assert data["upper_attained_at"] == 19
        assert data["upper_assumption"] == "CitedConstruction"


class TestForms:
    def test_form_file(self, tmp_path):
        path = tmp_path / "h.json"
        path.write_text(json.dumps({"n": 2, "rows": [[0, 1], [1, 0]]}), encoding="utf-8")
        data = invoke_json("form", "--file", str(path))
        assert data == {"n": 2, "rank": 2, "signature": 0, "determinant": -1, "even": True,
                        "unimodular": True, "definiteness": "indefinite"}

    def test_malformed_form_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{ nope", encoding="utf-8")
        code, _ = invoke("form", "--file", str(path))
        assert code == EXIT_INVALID
        assert "malformed" in capsys.readouterr().err

    def test_asymmetric_form_file(self, tmp_path, capsys):
        path = tmp_path / "asym.json"
        path.write_text(json.dumps({"n": 2, "rows": [[0, 1], [2, 0]]}), encoding="utf-8")
        assert invoke("form", "--file", str(path))[0] == EXIT_INVALID
        assert "not symmetric" in capsys.readouterr().err


class TestExitCodes:
    def test_unknown_subcommand(self):
        assert invoke("frobnicate")[0] == EXIT_INVALID

    def test_no_subcommand(self, capsys):
        assert invoke()[0] == EXIT_INVALID
        assert "usage" in capsys.readouterr().err

    def test_version(self):
        assert invoke("--version")[0] == EXIT_OK

    @pytest.mark.parametrize("argv", [
        ("lens", "4", "2"),
        ("surgery", "2", "0"),
        ("brieskorn", "2", "4", "5"),
        ("split", "yn", "0"),
        ("dbc", "--genus", "-1", "--unknotting", "0"),
    ])
    def test_invalid_input(self, argv):
        assert invoke(*argv)[0] == EXIT_INVALID

    def test_missing_facts_file(self, tmp_path):
        assert invoke("limit", "--facts", str(tmp_path / "none.json"))[0] == EXIT_INVALID

    def test_poisoned_registry(self, tmp_path, capsys):
        path = tmp_path / "facts.json"
        poison = {"index": 5, "direction": "upper", "value": 2,
                  "assumption": "CitedConstruction", "citation": "bogus"}
        path.write_text(json.dumps([poison]), encoding="utf-8")
        code, _ = invoke("lens-table", "--max", "8", "--facts", str(path))
        assert code == EXIT_CONTRADICTION
        assert "contradiction at L_5" in capsys.readouterr().err

    def test_malformed_registry(self, tmp_path):
        path = tmp_path / "facts.json"
        path.write_text(json.dumps([{"index": 5}]), encoding="utf-8")
        assert invoke("limit", "--facts", str(path))[0] == EXIT_INVALID

    def test_inconsistent_claim_is_invalid(self, capsys):
        code, _ = invoke("brieskorn", "2", "3", "5", "--d-zero")
        assert code == EXIT_INVALID
        assert "no feasible splitting found with m <= 8" in capsys.readouterr().err
