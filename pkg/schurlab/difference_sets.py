"""
差集合と差分割 (Difference Sets / Difference Partitions over Z_v)

差集合 D ⊆ Z_v（D̄D̄* = n·1 + λ·Z̄_v）の判定・列挙と、
すべてのブロックが差集合である分割（差分割）の完全被覆探索を提供します。

「自明な差集合」は |D| ≤ 1 または |D| ≥ v−1 と定めます。
差分割が自明 ⇔ 自明な差集合を含む、またはブロックがちょうど2個。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import igcd, isprime

from schurlab.config import DIFFSET_MAX_V
from schurlab.errors import BudgetExceededError, InputError
from schurlab.exact_cover import ExactCoverSolver
from schurlab.group_algebra import GroupContext, GroupElement, convolve, simple, star
from schurlab.logger import setup_logger

logger = setup_logger(__name__)

ALL = "all"
NON_TRIVIAL_ONLY = "non-trivial-only"
TRIVIAL = "trivial"
NON_TRIVIAL = "non-trivial"


@dataclass(frozen=True)
class DifferenceSetCertificate:
    """k(k−1) = λ(v−1)、n = k − λ"""

    v: int
    D: Tuple[int, ...]
    k: int
    lam: int
    n_param: int

    def to_record(self) -> Dict[str, Any]:
        return {
            "v": self.v,
            "D": list(self.D),
            "k": self.k,
            "lambda": self.lam,
            "n": self.n_param,
        }


@dataclass(frozen=True)
class DifferencePartition:
    v: int
    blocks: Tuple[Tuple[int, ...], ...]
    certificates: Tuple[DifferenceSetCertificate, ...]
    triviality: str

    def to_record(self) -> Dict[str, Any]:
        return {
            "v": self.v,
            "blocks": [list(b) for b in self.blocks],
            "lambdas": [c.lam for c in self.certificates],
            "triviality": self.triviality,
        }


@dataclass
class DifferencePartitionSearch:
    """
    差分割探索の結果

    partitions が空のときは、許容サイズ・サイズ多重集合・ブロック族の大きさを
    そのまま非存在の証明書として出力します。
    """

    v: int
    mode: str
    admissible_sizes: List[int]
    size_multisets: List[Tuple[int, ...]]
    library_size: int = 0
    cover_count: int = 0
    search_nodes: int = 0
    short_circuited: bool = False
    partitions: List[DifferencePartition] = field(default_factory=list)

    def to_record(self) -> Dict[str, Any]:
        return {
            "v": self.v,
            "mode": self.mode,
            "admissible_sizes": self.admissible_sizes,
            "size_multisets": [list(m) for m in self.size_multisets],
            "library_size": self.library_size,
            "cover_count": self.cover_count,
            "search_nodes": self.search_nodes,
            "short_circuited": self.short_circuited,
            "partitions": [p.to_record() for p in self.partitions],
        }


# --- 判定 (Detection) ---


def _residues(D: Iterable[int], v: int) -> Tuple[int, ...]:
    if v < 1:
        raise InputError(f"modulus must be positive, got {v}", v=v)
    members = sorted({int(x) % v for x in D})
    if not members:
        raise InputError("difference set candidate is empty", v=v)
    return tuple(members)


def _difference_counts(A: Sequence[int], B: Sequence[int], v: int) -> List[int]:
    """Ā·B̄* の各剰余の係数（群環の積で計算）"""
    ctx = GroupContext(v)
    a = simple(ctx.subset(GroupElement(0, x) for x in A))
    b = simple(ctx.subset(GroupElement(0, x) for x in B))
    product = convolve(a, star(b))
    return [int(product.coefficient(GroupElement(0, j))) for j in range(v)]


def is_difference_set(D: Iterable[int], v: int) -> Optional[DifferenceSetCertificate]:
    """
    非単位元の重複度がすべて等しければ証明書を返す

    Raises:
        InputError: D が空
    """
    members = _residues(D, v)
    counts = _difference_counts(members, members, v)
    off_identity = set(counts[1:])
    if len(off_identity) > 1:
        return None
    k = len(members)
    lam = off_identity.pop() if off_identity else 0
    return DifferenceSetCertificate(v=v, D=members, k=k, lam=lam, n_param=k - lam)


def cross_difference_constant(A: Iterable[int], B: Iterable[int], v: int) -> Optional[int]:
    """Ā·B̄* が Z_v∖{0} 上で一定ならその値"""
    values = set(_difference_counts(_residues(A, v), _residues(B, v), v)[1:])
    if len(values) > 1:
        return None
    return values.pop() if values else 0


def paley_set(p: int) -> Tuple[int, ...]:
    """p ≡ 3 (mod 4) の平方剰余（Paley 差集合）"""
    if not isprime(p) or p % 4 != 3:
        raise InputError(f"Paley sets need a prime p ≡ 3 mod 4, got {p}", p=p)
    return tuple(sorted({(x * x) % p for x in range(1, p)}))


# --- 列挙 (Enumeration) ---


def admissible_sizes(v: int) -> List[int]:
    """k(k−1) ≡ 0 (mod v−1) を満たす 0 ≤ k ≤ v"""
    if v < 1:
        raise InputError(f"modulus must be positive, got {v}", v=v)
    if v == 1:
        return [0, 1]
    return [k for k in range(v + 1) if (k * (k - 1)) % (v - 1) == 0]


def size_multisets(v: int, sizes: Sequence[int], min_parts: int = 1) -> List[Tuple[int, ...]]:
    """sizes から重複を許して選んだ和が v の非減少列（部品数 ≥ min_parts）"""
    parts = sorted({s for s in sizes if s > 0})
    found: List[Tuple[int, ...]] = []

    def extend(start: int, remaining: int, chosen: List[int]) -> None:
        if remaining == 0:
            if len(chosen) >= min_parts:
                found.append(tuple(chosen))
            return
        for idx in range(start, len(parts)):
            s = parts[idx]
            if s > remaining:
                break
            chosen.append(s)
            extend(idx, remaining - s, chosen)
            chosen.pop()

    extend(0, v, [])
    return found


def _units(v: int) -> List[int]:
    return [u for u in range(1, v) if igcd(u, v) == 1]


def _normalized_sets(v: int, k: int, lam: int) -> List[Tuple[int, ...]]:
    """
    k 元差集合のアフィン同値類の代表を探す（λ ≥ 1）

    単元ステップの等差列のうち最長のもの（長さ r）を {0, …, r−1} に写した形だけを探索します。
    代表は r と −1 を含まず、どの単元ステップでも長さ r を超える等差列を持ちません。
    差の出現回数が λ を超える枝と、除外済みの元を避けた候補対が λ 未満になった枝を刈ります。
    """
    steps = [u for u in _units(v) if u <= v - u]
    found: List[Tuple[int, ...]] = []
    # 差 1 が λ 回現れるので r ≥ 2、{0, …, r−1} 自体の差 1 は r−1 ≤ λ 回
    for run in range(2, min(k, lam + 1) + 1):
        found.extend(_search_run(v, k, lam, run, steps))
    return found


def _search_run(v: int, k: int, lam: int, run: int, steps: Sequence[int]) -> List[Tuple[int, ...]]:
    inside = [False] * v
    excluded = [False] * v
    counts = [0] * v
    possible = [v] * v
    members: List[int] = []
    found: List[Tuple[int, ...]] = []

    def longest_progression(x: int) -> int:
        best = 1
        for u in steps:
            length = 1
            y = (x + u) % v
            while inside[y] and length <= run:
                length += 1
                y = (y + u) % v
            y = (x - u) % v
            while inside[y] and length <= run:
                length += 1
                y = (y - u) % v
            best = max(best, length)
        return best

    def include(x: int) -> bool:
        ok = True
        for y in members:
            for d in ((x - y) % v, (y - x) % v):
                counts[d] += 1
                if counts[d] > lam:
                    ok = False
        inside[x] = True
        members.append(x)
        return ok and longest_progression(x) <= run

    def drop(x: int) -> None:
        members.pop()
        inside[x] = False
        for y in members:
            counts[(x - y) % v] -= 1
            counts[(y - x) % v] -= 1

    def adjust_possible(x: int, sign: int) -> bool:
        # 順序対 (a, a+d) のうち両端とも除外されていないものの数
        ok = True
        for d in range(1, v):
            lost = (not excluded[(x + d) % v]) + (not excluded[(x - d) % v])
            possible[d] -= sign * lost
            if possible[d] < lam:
                ok = False
        return ok

    def exclude(x: int) -> bool:
        ok = adjust_possible(x, 1)
        excluded[x] = True
        return ok

    def restore(x: int) -> None:
        excluded[x] = False
        adjust_possible(x, -1)

    for x in range(run):
        if not include(x):
            return found
    ok_run = exclude(run)
    ok_last = exclude(v - 1)
    if not (ok_run and ok_last):
        return found
    order = list(range(run + 1, v - 1))

    def extend(idx: int) -> None:
        need = k - len(members)
        if need == 0:
            if all(counts[d] == lam for d in range(1, v)):
                found.append(tuple(members))
            return
        if need > len(order) - idx:
            return
        x = order[idx]
        if include(x):
            extend(idx + 1)
        drop(x)
        if exclude(x):
            extend(idx + 1)
        restore(x)

    extend(0)
    logger.debug("🔍 Z_%d k=%d run=%d: %d representatives", v, k, run, len(found))
    return found


def _affine_images(D: Sequence[int], v: int) -> Iterable[Tuple[int, ...]]:
    for u in _units(v):
        for g in range(v):
            yield tuple(sorted((u * x + g) % v for x in D))


def _small_side(v: int, k: int) -> set:
    """k ≤ v/2 の差集合すべて（代表のアフィン像を集める）"""
    if k == 1:
        return {(x,) for x in range(v)}
    lam = k * (k - 1) // (v - 1)
    return {image for D in _normalized_sets(v, k, lam) for image in _affine_images(D, v)}


def enumerate_difference_sets(
    v: int, sizes: Optional[Iterable[int]] = None, max_v: int = DIFFSET_MAX_V
) -> List[DifferenceSetCertificate]:
    """
    Z_v の差集合をすべて列挙する（k の昇順、同じ k では辞書式順）

    sizes を渡すとその k だけを調べます。k > v/2 は補集合から求めます。
    """
    if v < 1:
        raise InputError(f"modulus must be positive, got {v}", v=v)
    if v > max_v:
        raise BudgetExceededError(
            f"v={v} exceeds the difference-set budget {max_v}", v=v, max_v=max_v
        )
    wanted = set(admissible_sizes(v))
    if sizes is not None:
        wanted &= set(sizes)
    wanted.discard(0)

    results: Dict[Tuple[int, ...], DifferenceSetCertificate] = {}
    by_small: Dict[int, set] = {}
    for k in sorted(wanted):
        if k == v:
            found = {tuple(range(v))}
        else:
            small = min(k, v - k)
            if small not in by_small:
                by_small[small] = _small_side(v, small)
            base = by_small[small]
            if small == k:
                found = base
            else:
                found = {tuple(x for x in range(v) if x not in set(D)) for D in base}
        for D in found:
            cert = is_difference_set(D, v)
            if cert is None:
                raise InputError("search produced a non-difference set", D=list(D), v=v)
            results[D] = cert
        logger.debug("🔍 Z_%d: %d difference sets of size %d", v, len(found), k)
    return sorted(results.values(), key=lambda c: (c.k, c.D))


# --- 差分割 (Difference Partitions) ---


def classify_triviality(dp: DifferencePartition) -> str:
    v = dp.v
    if len(dp.blocks) == 2:
        return TRIVIAL
    if any(len(b) <= 1 or len(b) >= v - 1 for b in dp.blocks):
        return TRIVIAL
    return NON_TRIVIAL


def make_difference_partition(v: int, blocks: Iterable[Iterable[int]]) -> DifferencePartition:
    """
    ブロックが Z_v を分割し、すべて差集合であることを確認して証明書を付ける

    Raises:
        InputError: 分割になっていない、または差集合でないブロック
    """
    normalized = sorted(_residues(b, v) for b in blocks)
    seen: set = set()
    for block in normalized:
        if seen.intersection(block):
            raise InputError("blocks overlap", v=v, block=list(block))
        seen.update(block)
    if len(seen) != v:
        raise InputError(
            "blocks do not cover Z_v", v=v, missing=sorted(set(range(v)) - seen)
        )
    certificates = []
    for block in normalized:
        cert = is_difference_set(block, v)
        if cert is None:
            raise InputError("block is not a difference set", v=v, block=list(block))
        certificates.append(cert)
    dp = DifferencePartition(v, tuple(normalized), tuple(certificates), TRIVIAL)
    return DifferencePartition(v, dp.blocks, dp.certificates, classify_triviality(dp))


def find_difference_partitions(
    v: int, mode: str = ALL, max_v: int = DIFFSET_MAX_V
) -> DifferencePartitionSearch:
    """
    差集合のブロック族から Z_v の完全被覆を探す

    non-trivial-only では 2 ≤ k ≤ v−2 のブロックだけを使い、3ブロック以上を要求します。
    その条件で和が v になるサイズ多重集合がなければ、探索せずに打ち切ります。
    """
    if mode not in (ALL, NON_TRIVIAL_ONLY):
        raise InputError(f"unknown search mode {mode!r}", mode=mode)
    if v > max_v:
        raise BudgetExceededError(
            f"v={v} exceeds the difference-set budget {max_v}", v=v, max_v=max_v
        )
    sizes = admissible_sizes(v)
    if mode == NON_TRIVIAL_ONLY:
        usable = [k for k in sizes if 2 <= k <= v - 2]
        multisets = size_multisets(v, usable, min_parts=3)
    else:
        usable = [k for k in sizes if k >= 1]
        multisets = size_multisets(v, usable)
    search = DifferencePartitionSearch(
        v=v, mode=mode, admissible_sizes=sizes, size_multisets=multisets
    )
    if not multisets:
        search.short_circuited = True
        logger.info("✅ Z_%d: no admissible size multiset, search skipped", v)
        return search

    library = enumerate_difference_sets(v, usable, max_v=max_v)
    search.library_size = len(library)
    solver = ExactCoverSolver(range(v), {frozenset(c.D) for c in library})
    for cover in solver.solutions():
        search.cover_count += 1
        dp = make_difference_partition(v, cover)
        if mode == NON_TRIVIAL_ONLY and dp.triviality != NON_TRIVIAL:
            continue
        search.partitions.append(dp)
    search.search_nodes = solver.nodes
    search.partitions.sort(key=lambda dp: dp.blocks)
    logger.info(
        "✅ Z_%d (%s): %d covers, %d partitions kept",
        v, mode, search.cover_count, len(search.partitions),
    )
    return search
