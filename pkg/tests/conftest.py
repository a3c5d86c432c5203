"""
pytest設定ファイル

テスト用の共通フィクスチャを定義します。
"""

import io
import random
import sys

# Windows cp932対策: stdout/stderrをUTF-8に強制（Mac/Linuxではスキップ）
# NOTE: ロガーが絵文字を出力するため、schurlab の import 前に実行が必要
for _stream_name in ("stdout", "stderr"):
    _stream = getattr(sys, _stream_name)
    if (
        hasattr(_stream, "encoding")
        and _stream.encoding
        and _stream.encoding.lower() != "utf-8"
    ):
        setattr(
            sys,
            _stream_name,
            io.TextIOWrapper(
                _stream.buffer, encoding="utf-8", errors="replace", line_buffering=True
            ),
        )

import pytest  # noqa: E402

from schurlab.automorphisms import closure, inversion, rho, sigma  # noqa: E402
from schurlab.errors import SchurLabError  # noqa: E402
from schurlab.group_algebra import GroupContext  # noqa: E402
from schurlab.oracles import make_automorphic  # noqa: E402


def pytest_configure(config):
    """カスタムマーカーの登録"""
    config.addinivalue_line(
        "markers", "smoke: 最重要テスト（健全性チェック、CI高速実行用）"
    )
    config.addinivalue_line(
        "markers", "regression: リグレッション検知テスト（全機能カバレッジ）"
    )
    config.addinivalue_line(
        "markers", "integration: 統合テスト（CLI・ラボ実行器の連携）"
    )
    config.addinivalue_line("markers", "slow: 重い網羅テスト（census p=11 など）")


@pytest.fixture
def rng():
    """再現可能な乱数（シード固定）"""
    return random.Random(20240611)


@pytest.fixture
def ctx5():
    return GroupContext(5)


@pytest.fixture
def ctx3():
    return GroupContext(3)


@pytest.fixture
def full_affine_oracle():
    """
    Z×Z_p 上の F[G]^<ρ, σ_r, *> を返すファクトリ

    使用例:
        o = full_affine_oracle(5)
    """

    def factory(p: int, r: int = 2):
        ctx = GroupContext(p)
        return make_automorphic(closure([rho(ctx), sigma(ctx, r), inversion(ctx)]))

    return factory


def assert_axiom_violation(exc_info, axiom: str):
    """
    AxiomViolation の公理番号を検証し、失敗時に反例を出力するヘルパー

    使用例:
        with pytest.raises(AxiomViolation) as exc_info:
            verify_partition(p)
        assert_axiom_violation(exc_info, "ii")
    """
    err = exc_info.value
    if err.axiom != axiom:
        print(f"\n{'=' * 60}")
        print(f"[TEST FAILURE] Expected axiom ({axiom}), got ({err.axiom})")
        print(f"[MESSAGE] {err.message}")
        print(f"[WITNESS] {err.witness}")
        print(f"{'=' * 60}\n")
    assert err.axiom == axiom, f"Expected axiom ({axiom}), got ({err.axiom})"
    assert err.witness, "AxiomViolation must carry a witness"


def assert_report_verdict(report, expected: str = "pass"):
    """
    LabReport の判定を検証し、失敗時に最初の反例を出力するヘルパー
    """
    if report.verdict != expected:
        print(f"\n{'=' * 60}")
        print(f"[TEST FAILURE] {report.check}: expected {expected}, got {report.verdict}")
        print(f"[PARAMETERS] {report.parameters}")
        for witness in report.witnesses[:3]:
            print(f"[WITNESS] {str(witness)[:500]}")
        print(f"[NOTES] {report.notes}")
        print(f"{'=' * 60}\n")
    assert report.verdict == expected, (
        f"{report.check}: expected {expected}, got {report.verdict}"
    )


# --- エラー詳細出力フック ---


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """
    テスト失敗時に詳細なエラー情報を出力するフック

    SchurLabError の場合は detail（反例・パラメータ）も表示します。
    """
    outcome = yield
    rep = outcome.get_result()

    if rep.when == "call" and rep.failed:
        if call.excinfo:
            exc_type = call.excinfo.type.__name__
            exc_value = str(call.excinfo.value)

            print(f"\n{'=' * 60}")
            print(f"[DEBUG] Test FAILED: {item.name}")
            print(f"[DEBUG] Exception Type: {exc_type}")
            print(f"[DEBUG] Exception Message: {exc_value[:500]}")

            if isinstance(call.excinfo.value, SchurLabError):
                print(f"[DEBUG] Detail: {str(call.excinfo.value.detail)[:800]}")

            if exc_type in (
                "ImportError",
                "ModuleNotFoundError",
                "AttributeError",
                "NameError",
            ):
                print("[DEBUG] ⚠️  Import/Module関連エラー検出!")
                print("[DEBUG] import文と関数名を確認してください")
            print(f"{'=' * 60}\n")
