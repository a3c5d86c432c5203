"""
設定・例外テスト

環境変数による予算の上書きと、エラー証明書の detail 構築を検証します。
"""

from unittest.mock import patch

import pytest

import schurlab.errors
from schurlab.certificates import build_error_certificate, canonical_json, render_table, to_plain
from schurlab.config import _int_env
from schurlab.errors import (
    AxiomViolation,
    BudgetExceededError,
    InputError,
    SchurLabError,
    build_error_detail,
)


class TestIntEnv:
    """整数の環境変数の読み込み"""

    def test_unset_uses_default(self):
        with patch.dict("os.environ", {}, clear=True):
            assert _int_env("SCHURLAB_WINDOW", 6) == 6

    def test_override(self):
        with patch.dict("os.environ", {"SCHURLAB_WINDOW": " 9 "}):
            assert _int_env("SCHURLAB_WINDOW", 6) == 9

    @pytest.mark.parametrize("raw", ["abc", "", "1.5"])
    def test_invalid_falls_back(self, raw):
        with patch.dict("os.environ", {"SCHURLAB_ENUM_MAX_N": raw}):
            assert _int_env("SCHURLAB_ENUM_MAX_N", 12, minimum=2) == 12

    def test_below_minimum_falls_back(self):
        with patch.dict("os.environ", {"SCHURLAB_JOBS": "0"}):
            assert _int_env("SCHURLAB_JOBS", 1, minimum=1) == 1

    def test_warning_goes_to_stderr(self, capsys):
        """警告は標準エラーへ出し、標準出力は証明書のために空けておく"""
        with patch.dict("os.environ", {"SCHURLAB_WINDOW": "abc", "SCHURLAB_JOBS": "0"}):
            _int_env("SCHURLAB_WINDOW", 6)
            _int_env("SCHURLAB_JOBS", 1, minimum=1)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "SCHURLAB_WINDOW is not an integer" in captured.err
        assert "SCHURLAB_JOBS=0 is below 1" in captured.err


class TestErrors:
    """例外階層と detail"""

    def test_exit_codes(self):
        assert InputError("x").exit_code == 2
        assert BudgetExceededError("x").exit_code == 2
        assert AxiomViolation("ii", "x", {"block": [1]}).exit_code == 1
        assert issubclass(BudgetExceededError, InputError)

    def test_axiom_violation_detail(self):
        err = AxiomViolation("iii", "not constant", {"coefficients": [1, 0]})
        assert err.detail == {"axiom": "iii", "witness": {"coefficients": [1, 0]}}
        assert str(err) == "not constant"

    def test_detail_without_debug(self, monkeypatch):
        monkeypatch.setattr(schurlab.errors, "DEBUG_MODE", False)
        err = InputError("raw message", n=0)
        detail = build_error_detail("invalid_input", err, "safe message", ["check n"])
        assert detail == {
            "error": "invalid_input",
            "message": "safe message",
            "detail": {"n": 0},
            "suggestions": ["check n"],
        }

    def test_detail_with_debug(self, monkeypatch):
        monkeypatch.setattr(schurlab.errors, "DEBUG_MODE", True)
        detail = build_error_detail("internal_error", ValueError("boom"), "unexpected failure")
        assert detail["message"] == "boom"
        assert detail["type"] == "ValueError"
        assert "detail" not in detail


class TestCertificates:
    """証明書の直列化"""

    def test_error_certificate_verdicts(self):
        fail = build_error_certificate("verify-zn", {}, AxiomViolation("i", "x", {"block": None}))
        error = build_error_certificate("verify-zn", {}, InputError("x"))
        assert fail["verdict"] == "fail"
        assert error["verdict"] == "error"

    def test_suggestions_from_available(self):
        doc = build_error_certificate("lab", {}, SchurLabError("x", available=["a", "b"]))
        assert doc["result"]["suggestions"] == ["try one of: a, b"]

    def test_to_plain(self):
        from fractions import Fraction

        assert to_plain({1: Fraction(1, 2), "s": {3, 1}, "t": (Fraction(4),)}) == {
            "1": "1/2",
            "s": [1, 3],
            "t": [4],
        }

    def test_canonical_json_sorts_keys(self):
        assert canonical_json({"b": 1, "a": "λ"}) == '{\n  "a": "λ",\n  "b": 1\n}'

    def test_render_table(self):
        table = render_table([{"n": 4, "classes": [[0], [1, 3], [2]]}])
        assert table.splitlines() == [
            "n  " + "classes".ljust(15),
            "-  " + "-" * 15,
            "4  [[0],[1,3],[2]]",
        ]
        assert render_table([]) == "(no rows)"
