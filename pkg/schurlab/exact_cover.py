"""
完全被覆探索 (Exact Cover Search)

全体集合をブロック族から選んだ互いに素なブロックでちょうど覆う組み合わせを、
すべて決定的な順序で列挙します（Algorithm X の素朴な実装）。
"""

from collections import defaultdict
from typing import (
    AbstractSet,
    Collection,
    FrozenSet,
    Hashable,
    Iterator,
    List,
    Optional,
    Tuple,
)

Chunk = FrozenSet[Hashable]


class ExactCoverSolver:
    """
    membership（元 → その元を含むブロック）を引きながら探索する

    分岐は「まだ覆われていない最小の元」について行い、候補ブロックは
    ソート順に試します。各被覆はちょうど1回、正規順序で出てきます。
    """

    def __init__(self, universe: Collection[Hashable], subsets: AbstractSet[Chunk]):
        self.elements = frozenset(universe)
        self.subsets = frozenset(s for s in subsets if s and s <= self.elements)
        self.membership = defaultdict(list)
        for subset in self.subsets:
            for element in subset:
                self.membership[element].append(tuple(sorted(subset)))
        for element in self.membership:
            self.membership[element].sort()
        self.failed = not all(self.membership[e] for e in self.elements)
        self.nodes = 0

    def solutions(self, limit: Optional[int] = None) -> Iterator[List[Tuple[Hashable, ...]]]:
        """被覆を1つずつ返す（ブロックは最小元の昇順）"""
        if self.failed:
            return
        found = 0
        for cover in self._search(set(), []):
            yield sorted(cover)
            found += 1
            if limit is not None and found >= limit:
                return

    def _search(self, covered: set, selected: list) -> Iterator[list]:
        self.nodes += 1
        if len(covered) == len(self.elements):
            yield list(selected)
            return
        pivot = min(self.elements - covered)
        for block in self.membership[pivot]:
            if covered.isdisjoint(block):
                covered.update(block)
                selected.append(block)
                yield from self._search(covered, selected)
                selected.pop()
                covered.difference_update(block)

    def solve(self) -> Optional[List[Tuple[Hashable, ...]]]:
        return next(self.solutions(limit=1), None)

    def count(self) -> int:
        return sum(1 for _ in self.solutions())
