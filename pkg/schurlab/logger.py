"""
ロギングインフラ

全モジュールで使用する統一ロガーを提供します。
DEBUG_MODEに応じてログレベルを自動調整します。

[出力先について]
標準出力 (stdout) は証明書 (certificate) ドキュメント専用です。
CLIの出力をパイプで他ツールに渡せるよう、ログと計測時間はすべて
標準エラー (stderr) に出力します。
"""

import logging
import sys

from schurlab.config import DEBUG_MODE

LOG_FORMAT = "[%(asctime)s] %(levelname)-8s [%(name)s] %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


def setup_logger(name: str) -> logging.Logger:
    """
    モジュール別ロガーのセットアップ

    Args:
        name: ロガー名（通常は__name__）

    Returns:
        設定済みLogger
    """
    logger = logging.getLogger(name)

    # ログレベル設定
    logger.setLevel(logging.DEBUG if DEBUG_MODE else logging.INFO)

    # 既存ハンドラーがあればスキップ（重複防止）
    if logger.handlers:
        return logger

    # StreamHandler作成（stdoutは証明書専用なのでstderrへ）
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logging.DEBUG if DEBUG_MODE else logging.INFO)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT))

    logger.addHandler(handler)
    logger.propagate = False  # ルートロガーへの伝播を防止（重複出力防止）
    return logger
