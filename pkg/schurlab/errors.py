"""
例外定義 (Error Hierarchy)

ツール全体で使う例外クラスと、エラー詳細 (detail) 辞書の構築関数です。

- InputError: 入力が不正（CLI終了コード 2）
- AxiomViolation: Schur 環の公理違反を反例つきで報告（CLI終了コード 1）

detail はJSONに直列化できる値だけを持ち、そのまま証明書に埋め込まれます。
"""

from typing import Any, Dict, List, Optional

from schurlab.config import DEBUG_MODE


class SchurLabError(Exception):
    """全例外の基底クラス。detail に証拠（witness）などを保持します。"""

    error_key = "schurlab_error"
    exit_code = 2

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = detail


# --- 入力エラー (Rejected Input) ---


class InputError(SchurLabError):
    """前提条件を満たさない入力"""

    error_key = "invalid_input"
    exit_code = 2


class ContextMismatchError(InputError):
    """異なる GroupContext (n) の値を混ぜた演算"""

    error_key = "context_mismatch"


class PartitionStructureError(InputError):
    """分割が交わる・範囲外・空ブロックなど構造的に不正"""

    error_key = "partition_structure"


class WedgeCompatibilityError(InputError):
    """ウェッジ積の整合条件 T_{H/K} = φ(S) が成り立たない"""

    error_key = "wedge_compatibility"


class BudgetExceededError(InputError):
    """探索予算（n や v の上限）を超えた要求"""

    error_key = "budget_exceeded"


# --- 公理違反 (Counterexamples) ---


class AxiomViolation(SchurLabError):
    """
    Schur 環の公理違反

    axiom は "i" / "ii" / "iii" / "membership" / "consistency" のいずれか。
    detail["witness"] に反例（クラス、要素、係数）を格納します。
    """

    error_key = "axiom_violation"
    exit_code = 1

    def __init__(self, axiom: str, message: str, witness: Dict[str, Any]):
        super().__init__(message, axiom=axiom, witness=witness)
        self.axiom = axiom
        self.witness = witness


def build_error_detail(
    error_key: str,
    exception: Exception,
    fallback_message: str,
    suggestions: Optional[List[str]] = None,
) -> dict:
    """
    エラー証明書用のdetail辞書を構築する。

    DEBUG_MODE有効時は例外の詳細情報を含め、
    無効時はフォールバックメッセージを返す。
    SchurLabError の detail（反例など）は常に含めます。
    """
    detail: Dict[str, Any] = {"error": error_key}
    if DEBUG_MODE:
        detail["message"] = str(exception)
        detail["type"] = type(exception).__name__
    else:
        detail["message"] = fallback_message
    if isinstance(exception, SchurLabError) and exception.detail:
        detail["detail"] = exception.detail
    if suggestions:
        detail["suggestions"] = suggestions
    return detail
