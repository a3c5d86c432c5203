"""
CLI テスト

サブコマンドの終了コード・証明書の形・エラー時の位置情報を検証します。
main() を直接呼び、標準出力の証明書を capsys で受け取ります。
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import schurlab.cli
from schurlab.cli import main
from schurlab.config import DIFFSET_MAX_V, TOOL_NAME, TOOL_VERSION

REPO_ROOT = Path(__file__).resolve().parents[1]


def run_cli(capsys, *argv):
    """CLIを実行して (終了コード, 証明書) を返すヘルパー"""
    code = main(list(argv))
    out = capsys.readouterr().out
    try:
        document = json.loads(out)
    except json.JSONDecodeError:
        print(f"\n{'=' * 60}")
        print(f"[TEST FAILURE] stdout is not a JSON certificate: {argv}")
        print(f"[STDOUT] {out[:500]}")
        print(f"{'=' * 60}\n")
        raise
    return code, document


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


class TestVerifyZn:
    """verify-zn / classify-zn"""

    @pytest.mark.smoke
    def test_trivial_z7_passes(self, capsys, tmp_path):
        path = write_json(tmp_path, "z7.json", {"n": 7, "classes": [[0], [1, 2, 3, 4, 5, 6]]})
        code, doc = run_cli(capsys, "verify-zn", "--file", path)
        assert code == 0
        assert doc["tool"] == TOOL_NAME and doc["version"] == TOOL_VERSION
        assert doc["command"] == "verify-zn"
        assert doc["verdict"] == "pass"
        constants = doc["result"]["structure_constants"]["constants"]
        assert {"C": 1, "D": 1, "E": 1, "lambda": 5} in constants

    def test_missing_identity_block(self, capsys, tmp_path):
        path = write_json(tmp_path, "bad.json", {"n": 7, "classes": [[1, 2, 3, 4, 5, 6]]})
        code, doc = run_cli(capsys, "verify-zn", "--file", path)
        assert code == 1
        assert doc["verdict"] == "fail"
        assert doc["result"]["error"] == "axiom_violation"
        assert doc["result"]["detail"]["axiom"] == "i"
        assert doc["result"]["detail"]["witness"]["block"] is None

    def test_product_axiom_witness(self, capsys, tmp_path):
        path = write_json(tmp_path, "bad.json", {"n": 7, "classes": [[0], [1, 6], [2, 3, 4, 5]]})
        code, doc = run_cli(capsys, "verify-zn", "--file", path)
        assert code == 1
        witness = doc["result"]["detail"]["witness"]
        assert doc["result"]["detail"]["axiom"] == "iii"
        assert witness["coefficients"] == [1, 0]

    def test_overlapping_blocks_are_input_errors(self, capsys, tmp_path):
        path = write_json(tmp_path, "bad.json", {"n": 4, "classes": [[0], [1, 2], [2, 3]]})
        code, doc = run_cli(capsys, "verify-zn", "--file", path)
        assert code == 2
        assert doc["verdict"] == "error"
        assert doc["result"]["error"] == "partition_structure"

    def test_malformed_json_reports_position(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"n": 7,\n"classes": }', encoding="utf-8")
        code, doc = run_cli(capsys, "verify-zn", "--file", str(path))
        assert code == 2
        detail = doc["result"]["detail"]
        assert (detail["line"], detail["column"]) == (2, 12)

    def test_schema_mismatch(self, capsys, tmp_path):
        path = write_json(tmp_path, "bad.json", {"n": 0, "classes": "nope"})
        code, doc = run_cli(capsys, "verify-zn", "--file", path)
        assert code == 2
        assert doc["result"]["error"] == "invalid_input"
        assert doc["result"]["detail"]["errors"]

    def test_missing_file(self, capsys, tmp_path):
        code, doc = run_cli(capsys, "verify-zn", "--file", str(tmp_path / "none.json"))
        assert code == 2
        assert doc["result"]["error"] == "invalid_input"

    def test_classify_wedge(self, capsys, tmp_path):
        path = write_json(tmp_path, "z6.json", {"n": 6, "classes": [[0], [3], [1, 2, 4, 5]]})
        code, doc = run_cli(capsys, "classify-zn", "--file", path)
        assert code == 0
        assert doc["result"]["traditional"]["kind"] == "wedge"


class TestEnumerationCommands:
    """enum-zn / orbit / diffsets / diffpart"""

    def test_enum_with_classification(self, capsys):
        code, doc = run_cli(capsys, "enum-zn", "--n", "6", "--classify")
        assert code == 0
        assert doc["result"]["count"] == 7
        assert all(r["traditional"]["kind"] != "non-traditional" for r in doc["result"]["rings"])

    def test_enum_methods_agree(self, capsys):
        _, brute = run_cli(capsys, "enum-zn", "--n", "8")
        _, refined = run_cli(capsys, "enum-zn", "--n", "8", "--method", "refinement")
        assert brute["result"] == refined["result"]

    def test_enum_budget(self, capsys):
        code, doc = run_cli(capsys, "enum-zn", "--n", "9", "--max-n", "8")
        assert code == 2
        assert doc["result"]["error"] == "budget_exceeded"

    def test_orbit(self, capsys):
        code, doc = run_cli(
            capsys,
            "orbit",
            "--n", "3",
            "--generators", '[{"eps": -1, "m": -1, "i": 0}]',
            "--element", "2,1",
        )
        assert code == 0
        assert doc["result"]["orbit"] == [[-2, 2], [2, 1]]
        assert doc["result"]["subgroup"]["order"] == 2

    def test_orbit_bad_element(self, capsys):
        code, _ = run_cli(capsys, "orbit", "--n", "3", "--generators", "[]", "--element", "x")
        assert code == 2

    def test_diffsets(self, capsys):
        code, doc = run_cli(capsys, "diffsets", "--v", "7", "--k", "3")
        assert code == 0
        assert doc["result"]["count"] == 14

    @pytest.mark.smoke
    def test_diffpart_non_trivial_only(self, capsys):
        code, doc = run_cli(capsys, "diffpart", "--v", "11", "--non-trivial-only")
        assert code == 0
        assert doc["result"]["partitions"] == []
        assert doc["result"]["admissible_sizes"] == [0, 1, 5, 6, 10, 11]

    @pytest.mark.parametrize("v", ["61", "2521"])
    def test_diffpart_far_over_budget(self, capsys, v):
        """サイズ多重集合を数える前に予算で止まること"""
        code, doc = run_cli(capsys, "diffpart", "--v", v)
        assert code == 2
        assert doc["result"]["error"] == "budget_exceeded"
        assert doc["result"]["detail"]["max_v"] == DIFFSET_MAX_V


class TestOracleVerify:
    def test_symmetric_oracle(self, capsys, tmp_path):
        path = write_json(tmp_path, "sym.json", {"n": 3, "family": "symmetric"})
        code, doc = run_cli(capsys, "oracle-verify", "--file", path, "--window", "3")
        assert code == 0
        assert doc["result"]["window"] == 3

    def test_incompatible_wedge(self, capsys, tmp_path):
        spec = {
            "n": 3,
            "family": "wedge",
            "s": 2,
            "outer": "discrete",
            "inner": {"n": 3, "family": "symmetric"},
        }
        path = write_json(tmp_path, "wedge.json", spec)
        code, doc = run_cli(capsys, "oracle-verify", "--file", path, "--window", "3")
        assert code == 2
        assert doc["result"]["error"] == "wedge_compatibility"


@pytest.mark.integration
class TestLabCommand:
    """lab サブコマンド"""

    def test_list(self, capsys):
        code, doc = run_cli(capsys, "lab", "--list")
        assert code == 0
        assert len(doc["result"]["checks"]) == 11

    def test_single_check(self, capsys):
        code, doc = run_cli(capsys, "lab", "--check", "size-lemma", "--n", "5")
        assert code == 0
        report = doc["result"]["reports"][0]
        assert report["verdict"] == "pass"
        assert "elapsed_ms" not in report

    def test_inapplicable_exits_zero(self, capsys, tmp_path):
        spec = {"n": 3, "family": "finite-lift", "classes": [[0], [1, 2]]}
        path = write_json(tmp_path, "lift.json", spec)
        code, doc = run_cli(
            capsys, "lab", "--check", "frobenius-primitivity", "--file", path, "--window", "3"
        )
        assert code == 0
        assert doc["result"]["reports"][0]["verdict"] == "inapplicable"

    def test_unused_flag_rejected(self, capsys):
        code, doc = run_cli(capsys, "lab", "--check", "size-lemma", "--p", "3")
        assert code == 2
        assert "n" in doc["result"]["detail"]["accepted"]

    def test_mode_required(self, capsys):
        code, doc = run_cli(capsys, "lab")
        assert code == 2
        assert doc["result"]["suggestions"]


class TestOutputContract:
    """出力の決定性・表形式・使い方の誤り"""

    @pytest.mark.smoke
    def test_byte_identical_runs(self, capsys):
        argv = ["enum-zn", "--n", "8", "--classify"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        second = capsys.readouterr().out
        assert first == second

    def test_table_format(self, capsys):
        code = main(["--format", "table", "diffsets", "--v", "7", "--k", "3"])
        out = capsys.readouterr().out
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "diffsets: pass"
        assert lines[1].split() == ["v", "D", "k", "lambda", "n"]
        assert len(lines) == 3 + 14

    def test_usage_error(self, capsys):
        code, doc = run_cli(capsys, "enum-zn")
        assert code == 2
        assert doc["verdict"] == "error"
        assert doc["command"] is None

    def test_unknown_check_is_usage_error(self, capsys):
        code, _ = run_cli(capsys, "lab", "--check", "no-such-check")
        assert code == 2

    def test_no_subcommand(self, capsys):
        code, doc = run_cli(capsys)
        assert code == 2
        assert doc["result"]["error"] == "invalid_input"

    def test_jobs_must_be_positive(self, capsys):
        code, _ = run_cli(capsys, "--jobs", "0", "lab", "--list")
        assert code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert TOOL_VERSION in capsys.readouterr().out

    def test_unexpected_exception_becomes_certificate(self, capsys, monkeypatch):
        """想定外の例外も internal_error の証明書（終了コード 2）になる"""

        def broken(args):
            raise RuntimeError("boom")

        monkeypatch.setitem(schurlab.cli.COMMANDS, "diffsets", broken)
        code, doc = run_cli(capsys, "diffsets", "--v", "7")
        assert code == 2
        assert doc["verdict"] == "error"
        assert doc["result"]["error"] == "internal_error"

    @pytest.mark.integration
    def test_bad_env_keeps_stdout_clean(self, tmp_path):
        """不正な環境変数の警告が証明書の前に混ざらないこと"""
        path = write_json(tmp_path, "z7.json", {"n": 7, "classes": [[0], [1, 2, 3, 4, 5, 6]]})
        env = {**os.environ, "SCHURLAB_WINDOW": "abc"}
        completed = subprocess.run(
            [sys.executable, "-m", "schurlab", "verify-zn", "--file", path],
            capture_output=True,
            text=True,
            encoding="utf-8",
            env=env,
            cwd=REPO_ROOT,
        )
        assert completed.returncode == 0
        assert json.loads(completed.stdout)["verdict"] == "pass"
        assert "SCHURLAB_WINDOW" in completed.stderr
