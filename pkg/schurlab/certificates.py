"""
証明書の出力 (Certificates & Rendering)

CLI の結果を1つの JSON 文書（証明書）にまとめます。
同じ入力からはバイト単位で同じ出力になるよう、キーを整列して直列化します。
"""

import json
from dataclasses import is_dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

from schurlab.config import TOOL_NAME, TOOL_VERSION
from schurlab.errors import SchurLabError, build_error_detail

PASS = "pass"
FAIL = "fail"
ERROR = "error"


def to_plain(value: Any) -> Any:
    """to_record / model_dump / タプル / Fraction を JSON に載る値へ変換する"""
    if isinstance(value, BaseModel):
        return to_plain(value.model_dump())
    if hasattr(value, "to_record"):
        return to_plain(value.to_record())
    if isinstance(value, dict):
        return {str(to_plain(k)) if not isinstance(k, str) else k: to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_plain(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if is_dataclass(value):
        raise TypeError(f"{type(value).__name__} has no to_record()")
    return value


def canonical_json(document: Any) -> str:
    return json.dumps(to_plain(document), sort_keys=True, indent=2, ensure_ascii=False)


def build_certificate(
    command: str, parameters: Dict[str, Any], verdict: str, result: Any
) -> Dict[str, Any]:
    return {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "parameters": to_plain(parameters),
        "verdict": verdict,
        "result": to_plain(result),
    }


def build_error_certificate(
    command: str, parameters: Dict[str, Any], exception: Exception
) -> Dict[str, Any]:
    """例外を verdict=error（公理違反なら fail）の証明書にする"""
    if isinstance(exception, SchurLabError):
        key = exception.error_key
        fallback = exception.message
    else:
        key = "internal_error"
        fallback = "unexpected failure"
    suggestions = None
    available = getattr(exception, "detail", {}).get("available")
    if available:
        suggestions = [f"try one of: {', '.join(available)}"]
    detail = build_error_detail(key, exception, fallback, suggestions)
    verdict = FAIL if getattr(exception, "exit_code", 2) == 1 else ERROR
    return build_certificate(command, parameters, verdict, detail)


# --- 表形式 (Table Rendering) ---


def render_table(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    """行の辞書を固定幅の表にする（--format table 用）"""
    if not rows:
        return "(no rows)"
    columns = columns or list(rows[0].keys())
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    lines = [
        "  ".join(c.ljust(w) for c, w in zip(columns, widths)),
        "  ".join("-" * w for w in widths),
    ]
    lines.extend("  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells)
    return "\n".join(lines)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    plain = to_plain(value)
    if isinstance(plain, (list, dict)):
        return json.dumps(plain, ensure_ascii=False, separators=(",", ":"), sort_keys=True)
    return str(plain)
