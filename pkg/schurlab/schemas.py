"""
Pydanticモデル定義 (Input Specs / Report Schemas)

CLIが読み込むJSON入力（分割・オラクル仕様）と、ラボのレポート構造を定義し、
型チェックと検証エラーの位置情報を提供します。
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

OracleFamily = Literal[
    "discrete", "symmetric", "automorphic", "wedge", "finite-lift", "transformed"
]
OuterFlavor = Literal["discrete", "symmetric"]
Verdict = Literal["pass", "fail", "inapplicable"]


class AutomorphismSpec(BaseModel):
    """アフィン自己同型 z ↦ a^i z^eps, a ↦ a^m"""

    eps: Literal[1, -1] = 1  # 自由部分の向き
    m: int = 1  # a の像の指数（n と互いに素）
    i: int = 0  # z の像に付く a の指数


class PartitionSpec(BaseModel):
    """Z_n の分割 (verify-zn / classify-zn の入力)"""

    n: int = Field(ge=1)  # 法
    classes: List[List[int]]  # ブロックの一覧（剰余の列）


class OracleSpec(BaseModel):
    """
    Z×Z_n 上の Schur 環の族の記述 (oracle-verify の入力)

    wedge と transformed は inner に入れ子の仕様を持ちます。
    """

    n: int = Field(ge=1)  # 捩れ部分の位数
    family: OracleFamily  # 族のタグ
    generators: Optional[List[AutomorphismSpec]] = None  # automorphic: 部分群の生成元
    s: Optional[int] = None  # wedge: 自由指数（内側は Z^(s)×Z_n）
    outer: Optional[OuterFlavor] = None  # wedge / finite-lift: 外側の環 F[Z] か F[Z]^±
    inner: Optional["OracleSpec"] = None  # wedge: 内側の環 / transformed: 変換元
    classes: Optional[List[List[int]]] = None  # finite-lift: 捩れ部分の分割
    tau: Optional[AutomorphismSpec] = None  # transformed: 作用させる自己同型


OracleSpec.model_rebuild()


class LabReport(BaseModel):
    """
    ラボの検査結果

    verdict が pass のとき witnesses は空です。elapsed_ms は標準エラーの
    ログ用で、証明書 (JSON) には含めません。
    """

    check: str  # 検査名 (例: "size-lemma")
    parameters: Dict[str, Any]  # 再現用パラメータ (n, p, window, bound など)
    verdict: Verdict  # pass / fail / inapplicable
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)  # 反例
    details: Dict[str, Any] = Field(default_factory=dict)  # 集計・表
    notes: List[str] = Field(default_factory=list)  # 前提や空虚な真の注記
    elapsed_ms: float = Field(default=0.0, exclude=True)  # 計測時間（出力対象外）
