"""
構造定数テーブル (Structure Constants)

C̄D̄ = Σ λ_{CDE} Ē の係数 λ を保持するテーブルと、
テーブルだけで確認できる補題（サイズ補題・互いに素な積の補題）の検査関数です。

有限分割（Z_n、クラスIDは最小剰余の int）と
オラクル（Z×Z_n、クラスIDは最小元の GroupElement）の両方で共用します。
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Callable, Dict, Hashable, List, Optional, Tuple

Key = Hashable
Lookup = Callable[[Key, Key, Key], int]


def _plain(value: Any) -> Any:
    """証明書用にクラスIDをJSON値へ変換"""
    to_record = getattr(value, "to_record", None)
    return to_record() if to_record else value


@dataclass
class StructureConstants:
    """λ_{CDE} の表。0 の係数は保存しません。"""

    window: Optional[int] = None
    classes: Dict[Key, Tuple[Any, ...]] = field(default_factory=dict)
    star: Dict[Key, Key] = field(default_factory=dict)
    triples: Dict[Tuple[Key, Key, Key], int] = field(default_factory=dict)

    def add_class(self, key: Key, members: Tuple[Any, ...], star_key: Key) -> None:
        self.classes.setdefault(key, members)
        self.star.setdefault(key, star_key)

    def size(self, key: Key) -> int:
        members = self.classes.get(key)
        if members is None:
            members = self.classes[self.star[key]]
        return len(members)

    def lam(self, c: Key, d: Key, e: Key) -> int:
        return self.triples.get((c, d, e), 0)

    def pairs(self) -> Dict[Tuple[Key, Key], List[Tuple[Key, int]]]:
        """(C, D) ごとの分解 [(E, λ), ...]"""
        grouped: Dict[Tuple[Key, Key], List[Tuple[Key, int]]] = {}
        for (c, d, e), value in sorted(self.triples.items()):
            grouped.setdefault((c, d), []).append((e, value))
        return grouped

    def to_record(self) -> Dict[str, Any]:
        return {
            "window": self.window,
            "classes": [
                {
                    "id": _plain(key),
                    "size": len(members),
                    "members": [_plain(m) for m in members],
                }
                for key, members in sorted(self.classes.items())
            ],
            "constants": [
                {"C": _plain(c), "D": _plain(d), "E": _plain(e), "lambda": value}
                for (c, d, e), value in sorted(self.triples.items())
            ],
        }


# --- 補題検査 (Lemma Checks) ---


def size_lemma_violations(
    table: StructureConstants, lookup: Optional[Lookup] = None
) -> List[Dict[str, Any]]:
    """
    λ_{CDE}|E| = λ_{DE*C*}|C| = λ_{E*CD*}|D| を全記録トリプルで確認する

    lookup はテーブル外のトリプル（窓の外のクラスを含む積）を求める関数。
    省略時はテーブル自身を引きます。
    """
    lookup = lookup or table.lam
    violations = []
    for (c, d, e), lam in sorted(table.triples.items()):
        c_star, d_star, e_star = table.star[c], table.star[d], table.star[e]
        mu = lookup(d, e_star, c_star)
        nu = lookup(e_star, c, d_star)
        products = (
            lam * table.size(e),
            mu * table.size(c),
            nu * table.size(d),
        )
        if len(set(products)) != 1:
            violations.append(
                {
                    "C": _plain(c),
                    "D": _plain(d),
                    "E": _plain(e),
                    "lambda": lam,
                    "mu": mu,
                    "nu": nu,
                    "products": list(products),
                }
            )
    return violations


def coprime_product_check(
    table: StructureConstants, identity_key: Key
) -> Tuple[int, List[Dict[str, Any]]]:
    """
    gcd(|C|,|D|)=1 の対で C̄D̄ がただ1つのクラスの倍になるかを確認する

    単位元クラスを含む対は除外します。戻り値は (検査した対の数, 違反リスト)。
    """
    checked = 0
    violations = []
    for (c, d), decomposition in table.pairs().items():
        if identity_key in (c, d):
            continue
        if gcd(table.size(c), table.size(d)) != 1:
            continue
        checked += 1
        if len(decomposition) != 1:
            violations.append(
                {
                    "C": _plain(c),
                    "D": _plain(d),
                    "classes": [_plain(e) for e, _ in decomposition],
                }
            )
    return checked, violations
