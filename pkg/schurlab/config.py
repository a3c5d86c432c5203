"""
Application Configuration
ツール全体の設定と環境変数を管理します。
列挙・探索の上限値（予算）、既定ウィンドウ幅、並列ジョブ数、
および証明書に埋め込むツールのバージョン情報を集約しています。
"""

import os
import sys
from typing import Tuple

# 環境変数の読み込み (Load environment variables)
# .envファイルが存在する場合、そこから環境変数をロードします。
# CIやローカル実験で上限値を切り替える用途を想定しています。
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    """
    整数の環境変数を読み込む

    未設定・不正値・下限未満の場合は警告を出してデフォルト値を返します。
    警告は標準エラーへ（標準出力は証明書専用）。
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        print(f"⚠️  WARNING: {name} is not an integer ({raw!r}); using {default}", file=sys.stderr)
        return default
    if value < minimum:
        print(f"⚠️  WARNING: {name}={value} is below {minimum}; using {default}", file=sys.stderr)
        return default
    return value


# --- ツール情報 (Tool Identity) ---
# 証明書 (certificate) に埋め込まれ、出力の再現性確認に使われます。
TOOL_NAME = "schurlab"
TOOL_VERSION = "0.1.0"

# --- デバッグモード設定 (Debug Mode) ---
# ログレベルをDEBUGにし、エラー詳細に例外の型とメッセージを含めます。
DEBUG_MODE = os.getenv("DEBUG_MODE", "false").lower() == "true"

# --- 探索予算 (Search Budgets) ---
# Z_n 上の Schur 環の総当たり列挙の上限
ENUM_MAX_N = _int_env("SCHURLAB_ENUM_MAX_N", 12, minimum=2)

# 細分化（構成的）列挙器の上限。総当たりとの照合に使います。
REFINEMENT_MAX_N = _int_env("SCHURLAB_REFINEMENT_MAX_N", 10, minimum=2)

# 差集合の列挙上限 (v ≤ 31)
DIFFSET_MAX_V = _int_env("SCHURLAB_DIFFSET_MAX_V", 31, minimum=1)

# --- ウィンドウ・並列設定 (Window / Jobs) ---
# 無限群 Z×Z_n 上の検証で使う |t| の既定上限
DEFAULT_WINDOW = _int_env("SCHURLAB_WINDOW", 6)

# ラボのジョブ並列数（1 なら逐次実行）
DEFAULT_JOBS = _int_env("SCHURLAB_JOBS", 1, minimum=1)

# --- センサス設定 (Census) ---
# 族の網羅生成をサポートする素数
CENSUS_PRIMES: Tuple[int, ...] = (3, 5, 7, 11)

# 自由指数の既定上限
DEFAULT_FREE_BOUND = _int_env("SCHURLAB_FREE_BOUND", 4, minimum=1)
