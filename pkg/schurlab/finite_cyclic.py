"""
有限巡回群上の Schur 環 (Schur Rings over Z_n)

Z_n の分割を明示的に持つ FinitePartition に対して、
公理 (i)–(iii) の検証、n ≤ 12 の総当たり列挙、細分化による構成的列挙、
伝統的な4形式（自明・自己同型・直積・ウェッジ積）への分類と構成を提供します。
"""

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import divisors

from schurlab.config import ENUM_MAX_N, REFINEMENT_MAX_N
from schurlab.errors import (
    AxiomViolation,
    BudgetExceededError,
    InputError,
    PartitionStructureError,
    WedgeCompatibilityError,
)
from schurlab.logger import setup_logger
from schurlab.structure import StructureConstants

logger = setup_logger(__name__)

Block = Tuple[int, ...]


# --- 分割 (Partitions of Z_n) ---


@dataclass(frozen=True)
class FinitePartition:
    """
    Z_n の分割

    ブロック内は昇順、ブロック同士は最小元の昇順に正規化されます。
    構造（交わらない・全体を覆う・空でない）だけを生成時に検査し、
    公理 (i)–(iii) は verify_partition が検査します。
    """

    n: int
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise PartitionStructureError(f"modulus must be positive, got {n!r}")
        normalized = []
        seen: Dict[int, Block] = {}
        for raw in self.blocks:
            block = tuple(sorted(int(x) for x in raw))
            if not block:
                raise PartitionStructureError("empty block", n=n)
            if len(set(block)) != len(block):
                raise PartitionStructureError(
                    "repeated residue inside a block", n=n, block=list(block)
                )
            for x in block:
                if not 0 <= x < n:
                    raise PartitionStructureError(
                        f"residue {x} out of range for Z_{n}", n=n, block=list(block)
                    )
                if x in seen:
                    raise PartitionStructureError(
                        f"residue {x} appears in two blocks",
                        n=n,
                        blocks=[list(seen[x]), list(block)],
                    )
                seen[x] = block
            normalized.append(block)
        missing = [x for x in range(n) if x not in seen]
        if missing:
            raise PartitionStructureError(
                "blocks do not cover Z_n", n=n, missing=missing
            )
        object.__setattr__(self, "blocks", tuple(sorted(normalized)))

    @classmethod
    def from_classes(cls, n: int, classes: Iterable[Iterable[int]]) -> "FinitePartition":
        return cls(n, tuple(tuple(c) for c in classes))

    @cached_property
    def _index(self) -> Dict[int, int]:
        return {x: idx for idx, block in enumerate(self.blocks) for x in block}

    def block_of(self, x: int) -> Block:
        return self.blocks[self._index[x % self.n]]

    def block_index(self, x: int) -> int:
        return self._index[x % self.n]

    def star_block(self, block: Sequence[int]) -> Block:
        return tuple(sorted((-x) % self.n for x in block))

    def __len__(self) -> int:
        return len(self.blocks)

    def to_record(self) -> Dict[str, Any]:
        return {"n": self.n, "classes": [list(b) for b in self.blocks]}


@dataclass(frozen=True)
class TraditionalTag:
    """伝統的形式の分類結果。witness から分割を再構成できます。"""

    kind: str
    witness: Dict[str, Any] = field(default_factory=dict)

    def to_record(self) -> Dict[str, Any]:
        return {"kind": self.kind, "witness": self.witness}


def identity_block_witness(n: int, classes: Iterable[Iterable[int]]) -> Optional[Dict[str, Any]]:
    """公理 (i): {0} がブロックであること。違反時は反例を返します。"""
    for raw in classes:
        block = sorted(int(x) % n for x in raw)
        if 0 in block:
            if block == [0]:
                return None
            return {"block": block, "reason": "identity shares its block"}
    return {"block": None, "reason": "identity is not covered"}


# --- 検証 (Verification) ---


def verify_partition(p: FinitePartition) -> StructureConstants:
    """
    公理 (i)–(iii) を検証し、全ブロック組の λ 表を返す

    Raises:
        AxiomViolation: 公理違反（反例つき）
    """
    n = p.n
    witness = identity_block_witness(n, p.blocks)
    if witness is not None:
        raise AxiomViolation("i", "{0} is not a block", witness)

    block_set = set(p.blocks)
    for block in p.blocks:
        inverse = p.star_block(block)
        if inverse not in block_set:
            raise AxiomViolation(
                "ii",
                f"inverse of block {list(block)} is not a block",
                {"block": list(block), "star": list(inverse)},
            )

    table = StructureConstants()
    for block in p.blocks:
        table.add_class(block[0], block, p.star_block(block)[0])

    for ci, C in enumerate(p.blocks):
        for D in p.blocks[ci:]:
            counts = [0] * n
            for c in C:
                for d in D:
                    counts[(c + d) % n] += 1
            for E in p.blocks:
                first = counts[E[0]]
                for e in E[1:]:
                    if counts[e] != first:
                        raise AxiomViolation(
                            "iii",
                            "product coefficient is not constant on a block",
                            {
                                "C": list(C),
                                "D": list(D),
                                "E": list(E),
                                "elements": [E[0], e],
                                "coefficients": [first, counts[e]],
                            },
                        )
                if first:
                    table.triples[(C[0], D[0], E[0])] = first
                    table.triples[(D[0], C[0], E[0])] = first
    return table


def is_schur_partition(p: FinitePartition) -> bool:
    try:
        verify_partition(p)
    except AxiomViolation:
        return False
    return True


# --- 基本構成 (Basic Constructions) ---


def trivial_partition(n: int) -> FinitePartition:
    """{0}, Z_n∖{0}"""
    if n == 1:
        return FinitePartition(1, ((0,),))
    return FinitePartition(n, ((0,), tuple(range(1, n))))


def discrete_partition(n: int) -> FinitePartition:
    return FinitePartition(n, tuple((x,) for x in range(n)))


def unit_subgroup(n: int, gens: Sequence[int]) -> Tuple[int, ...]:
    """単数 gens が生成する乗法部分群"""
    for g in gens:
        if gcd(g, n) != 1:
            raise InputError(f"{g} is not a unit modulo {n}", n=n, generator=g)
    seen = {1 % n}
    frontier = [1 % n]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x * g) % n
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return tuple(sorted(seen))


def automorphic_partition(n: int, gens: Sequence[int]) -> FinitePartition:
    """乗法部分群 ⟨gens⟩ の Z_n 上の軌道"""
    group = unit_subgroup(n, gens)
    blocks = []
    assigned = set()
    for x in range(n):
        if x in assigned:
            continue
        orbit = tuple(sorted({(u * x) % n for u in group}))
        assigned.update(orbit)
        blocks.append(orbit)
    return FinitePartition(n, tuple(blocks))


def direct_product_partition(p1: FinitePartition, p2: FinitePartition) -> FinitePartition:
    """中国剰余定理 Z_{n1 n2} ≅ Z_{n1}×Z_{n2} による直積"""
    n1, n2 = p1.n, p2.n
    if gcd(n1, n2) != 1:
        raise InputError(
            f"factors must be coprime, got {n1} and {n2}", n1=n1, n2=n2
        )
    n = n1 * n2
    grouped: Dict[Tuple[int, int], List[int]] = {}
    for x in range(n):
        grouped.setdefault((p1.block_index(x), p2.block_index(x)), []).append(x)
    return FinitePartition(n, tuple(tuple(b) for b in grouped.values()))


def _subgroup(n: int, order: int) -> Tuple[int, ...]:
    """位数 order の部分群（n/order の倍数）"""
    step = n // order
    return tuple(range(0, n, step))


def _is_union_of_blocks(p: FinitePartition, members: Iterable[int]) -> bool:
    members = set(members)
    return all(set(b) <= members or members.isdisjoint(b) for b in p.blocks)


def quotient_partition(p: FinitePartition, k_order: int) -> FinitePartition:
    """S-部分群 K（位数 k_order）による商 φ(S)。G/K は Z_{n/k_order} と同一視します。"""
    n = p.n
    if k_order < 1 or n % k_order:
        raise InputError(f"{k_order} does not divide {n}", n=n, k_order=k_order)
    if not _is_union_of_blocks(p, _subgroup(n, k_order)):
        raise WedgeCompatibilityError(
            f"subgroup of order {k_order} is not an S-subgroup", n=n, k_order=k_order
        )
    m = n // k_order
    images = {tuple(sorted({x % m for x in b})) for b in p.blocks}
    return FinitePartition(m, tuple(images))


def restrict_partition(p: FinitePartition, h_order: int) -> FinitePartition:
    """S-部分群 H（位数 h_order）への制限。H は x ↦ x/(n/h_order) で Z_{h_order} と同一視。"""
    n = p.n
    if h_order < 1 or n % h_order:
        raise InputError(f"{h_order} does not divide {n}", n=n, h_order=h_order)
    step = n // h_order
    H = set(_subgroup(n, h_order))
    if not _is_union_of_blocks(p, H):
        raise WedgeCompatibilityError(
            f"subgroup of order {h_order} is not an S-subgroup", n=n, h_order=h_order
        )
    return FinitePartition(
        h_order, tuple(tuple(x // step for x in b) for b in p.blocks if b[0] in H)
    )


def wedge_partition(
    inner: FinitePartition, quotient: FinitePartition, k_order: int, h_order: int
) -> FinitePartition:
    """
    ウェッジ積 S∧T（鎖 1 < K ≤ H < Z_n、|K|=k_order, |H|=h_order）

    inner は H ≅ Z_{|H|} 上、quotient は G/K ≅ Z_{n/|K|} 上の分割です。
    整合条件 T_{H/K} = φ(S) が成り立たなければ WedgeCompatibilityError。
    """
    n = quotient.n * k_order
    if inner.n != h_order:
        raise WedgeCompatibilityError(
            f"inner partition lives on Z_{inner.n}, expected Z_{h_order}",
            inner_n=inner.n,
            h_order=h_order,
        )
    if not (1 < k_order <= h_order < n) or h_order % k_order or n % h_order:
        raise WedgeCompatibilityError(
            "chain must satisfy 1 < K ≤ H < G with K ≤ H ≤ Z_n",
            n=n,
            k_order=k_order,
            h_order=h_order,
        )

    # K は inner の S-部分群
    k_in_h = _subgroup(h_order, k_order)
    if not _is_union_of_blocks(inner, k_in_h):
        raise WedgeCompatibilityError(
            "K is not an S-subgroup of the inner ring",
            k_order=k_order,
            K=list(k_in_h),
        )

    m = n // k_order
    lift = n // h_order
    h_over_k = set(_subgroup(m, h_order // k_order))
    if not _is_union_of_blocks(quotient, h_over_k):
        raise WedgeCompatibilityError(
            "H/K is not an S-subgroup of the quotient ring",
            H_over_K=sorted(h_over_k),
        )

    images = {tuple(sorted({(x * lift) % m for x in b})) for b in inner.blocks}
    restricted = {b for b in quotient.blocks if b[0] in h_over_k}
    for image in sorted(images - restricted):
        raise WedgeCompatibilityError(
            "image of an inner block is not a quotient block",
            block=list(image),
        )
    for block in sorted(restricted - images):
        raise WedgeCompatibilityError(
            "quotient block inside H/K is not an image of the inner ring",
            block=list(block),
        )

    blocks = [tuple(x * lift for x in b) for b in inner.blocks]
    for D in quotient.blocks:
        if D[0] in h_over_k:
            continue
        members = set(D)
        blocks.append(tuple(y for y in range(n) if y % m in members))
    result = FinitePartition(n, tuple(blocks))
    verify_partition(result)
    return result


# --- 総当たり列挙 (Brute-force Enumeration) ---


def _multipliers(n: int, use_multipliers: bool) -> List[int]:
    """ブロック写像の整合を要求する単数。逆元 (−1) は常に含みます。"""
    if use_multipliers:
        return [u for u in range(2, n) if gcd(u, n) == 1]
    return [n - 1] if n > 2 else []


def _candidate_partitions(n: int, use_multipliers: bool) -> Iterator[List[List[int]]]:
    """
    {0} を固定した集合分割を制限成長列の順に生成する

    各単数 u について「ブロックの u 倍はブロック」を部分割り当ての段階で
    検査し、矛盾した枝を刈ります。
    """
    mults = _multipliers(n, use_multipliers)
    inverse = {u: pow(u, -1, n) for u in mults}
    assignment = [-1] * n
    assignment[0] = 0
    blocks: List[List[int]] = [[0]]
    forward: Dict[int, Dict[int, int]] = {u: {0: 0} for u in mults}
    backward: Dict[int, Dict[int, int]] = {u: {0: 0} for u in mults}

    def link(u: int, src: int, dst: int, undo: List[Tuple[int, int, int]]) -> bool:
        f, r = forward[u], backward[u]
        if f.get(src, dst) != dst or r.get(dst, src) != src:
            return False
        if src not in f:
            f[src] = dst
            r[dst] = src
            undo.append((u, src, dst))
        return True

    def place(x: int) -> Iterator[List[List[int]]]:
        if x == n:
            yield [list(b) for b in blocks]
            return
        for b in range(1, len(blocks) + 1):
            fresh = b == len(blocks)
            if fresh:
                blocks.append([x])
            else:
                blocks[b].append(x)
            assignment[x] = b
            undo: List[Tuple[int, int, int]] = []
            ok = True
            for u in mults:
                target = assignment[(u * x) % n]
                if target != -1 and not link(u, b, target, undo):
                    ok = False
                    break
                source = assignment[(inverse[u] * x) % n]
                if source != -1 and not link(u, source, b, undo):
                    ok = False
                    break
            if ok:
                yield from place(x + 1)
            for u, src, dst in undo:
                del forward[u][src]
                del backward[u][dst]
            assignment[x] = -1
            if fresh:
                blocks.pop()
            else:
                blocks[b].pop()

    yield from place(1)


def _canonical_order(partitions: Iterable[FinitePartition]) -> List[FinitePartition]:
    return sorted(partitions, key=lambda p: (-len(p.blocks), p.blocks))


def enumerate_schur_rings(
    n: int, max_n: int = ENUM_MAX_N, use_multipliers: bool = True
) -> List[FinitePartition]:
    """
    Z_n 上の全 Schur 環を総当たりで列挙する

    use_multipliers=True のときは、単数倍でブロックがブロックに移るという
    必要条件（アーベル群上の Schur 環の乗数定理）で探索を刈り込みます。
    False なら逆元による刈り込みだけを使います。
    """
    if n < 2:
        raise InputError(f"enumeration needs n ≥ 2, got {n}", n=n)
    if n > max_n:
        raise BudgetExceededError(
            f"n={n} exceeds the enumeration budget {max_n}", n=n, max_n=max_n
        )
    found = []
    candidates = 0
    for classes in _candidate_partitions(n, use_multipliers):
        candidates += 1
        p = FinitePartition.from_classes(n, classes)
        if is_schur_partition(p):
            found.append(p)
    logger.debug(
        "🔍 Z_%d: %d candidates, %d Schur rings", n, candidates, len(found)
    )
    return _canonical_order(found)


# --- 細分化による構成的列挙 (Constructive Enumeration) ---


def schur_closure(n: int, blocks: Iterable[Iterable[int]]) -> FinitePartition:
    """
    分割を細分化して得られる最も粗い Schur 環

    各元 x に「自分のラベル」「−x のラベル」「x = c + (x−c) のラベル対の多重集合」
    を署名として割り当て、ラベル数が増えなくなるまで分け直します。
    """
    label = [0] * n
    for idx, block in enumerate(blocks):
        for x in block:
            label[x % n] = idx
    count = len(set(label))
    while True:
        signatures = []
        for x in range(n):
            pairs = Counter((label[c], label[(x - c) % n]) for c in range(n))
            signatures.append((label[x], label[(-x) % n], tuple(sorted(pairs.items()))))
        ranks = {sig: r for r, sig in enumerate(sorted(set(signatures)))}
        label = [ranks[sig] for sig in signatures]
        if len(ranks) == count:
            break
        count = len(ranks)
    grouped: Dict[int, List[int]] = {}
    for x in range(n):
        grouped.setdefault(label[x], []).append(x)
    return FinitePartition(n, tuple(tuple(b) for b in grouped.values()))


def enumerate_by_refinement(n: int, max_n: int = REFINEMENT_MAX_N) -> List[FinitePartition]:
    """
    自明環から出発し、ブロックを2つに割って閉包を取る操作を繰り返す列挙器

    任意の Schur 環 S' ⊋ S（S' が S の細分）は、S のあるブロックを
    S' のブロックとその残りに割った閉包を経由して到達できます。
    """
    if n < 2:
        raise InputError(f"enumeration needs n ≥ 2, got {n}", n=n)
    if n > max_n:
        raise BudgetExceededError(
            f"n={n} exceeds the refinement budget {max_n}", n=n, max_n=max_n
        )
    start = schur_closure(n, [[0], range(1, n)])
    found = {start.blocks: start}
    queue = [start]
    while queue:
        ring = queue.pop()
        for bi, block in enumerate(ring.blocks):
            if len(block) < 2:
                continue
            first, rest = block[0], block[1:]
            others = ring.blocks[:bi] + ring.blocks[bi + 1 :]
            for r in range(len(rest)):
                for combo in combinations(rest, r):
                    part = (first,) + combo
                    remainder = tuple(x for x in rest if x not in combo)
                    refined = schur_closure(n, others + (part, remainder))
                    if refined.blocks not in found:
                        found[refined.blocks] = refined
                        queue.append(refined)
    for ring in found.values():
        verify_partition(ring)
    return _canonical_order(found.values())


# --- 伝統的形式の分類 (Traditional Classification) ---


def _unit_generators(n: int, group: Sequence[int]) -> List[int]:
    """部分群を生成する小さい順の貪欲な生成元列"""
    gens: List[int] = []
    span = {1 % n}
    for u in group:
        if u not in span:
            gens.append(u)
            span = set(unit_subgroup(n, gens))
    return gens


def _classify_automorphic(p: FinitePartition) -> Optional[Dict[str, Any]]:
    n = p.n
    # 全ブロックを固定する単数
    stabilizer = [
        u
        for u in range(1, n)
        if gcd(u, n) == 1
        and all(tuple(sorted((u * x) % n for x in b)) == b for b in p.blocks)
    ]
    gens = _unit_generators(n, stabilizer)
    if automorphic_partition(n, gens or [1 % n]).blocks != p.blocks:
        return None
    return {"generators": gens, "subgroup": stabilizer}


def _classify_direct(p: FinitePartition) -> Optional[Dict[str, Any]]:
    n = p.n
    for n1 in divisors(n)[1:-1]:
        n2 = n // n1
        if n2 < 2 or gcd(n1, n2) != 1 or n1 > n2:
            continue
        first = {tuple(sorted({x % n1 for x in b})) for b in p.blocks}
        second = {tuple(sorted({x % n2 for x in b})) for b in p.blocks}
        try:
            p1 = FinitePartition(n1, tuple(first))
            p2 = FinitePartition(n2, tuple(second))
        except PartitionStructureError:
            continue
        if direct_product_partition(p1, p2).blocks == p.blocks:
            return {
                "n1": n1,
                "n2": n2,
                "factor1": [list(b) for b in p1.blocks],
                "factor2": [list(b) for b in p2.blocks],
            }
    return None


def _classify_wedge(p: FinitePartition) -> Optional[Dict[str, Any]]:
    n = p.n
    orders = divisors(n)[1:-1]
    for h_order in orders:
        H = set(_subgroup(n, h_order))
        if not _is_union_of_blocks(p, H):
            continue
        for k_order in orders:
            if k_order > h_order or h_order % k_order:
                continue
            K = _subgroup(n, k_order)
            if not _is_union_of_blocks(p, K):
                continue
            outside = [b for b in p.blocks if b[0] not in H]
            if all(
                {(x + y) % n for x in b for y in K} == set(b) for b in outside
            ):
                return {
                    "k_order": k_order,
                    "h_order": h_order,
                    "K": list(K),
                    "H": sorted(H),
                    "inner": [list(b) for b in restrict_partition(p, h_order).blocks],
                    "quotient": [list(b) for b in quotient_partition(p, k_order).blocks],
                }
    return None


def classify_traditional(p: FinitePartition) -> TraditionalTag:
    """自明 → 自己同型 → 直積 → ウェッジ積 の順に試し、最初に当たった形式を返す"""
    if p.blocks == trivial_partition(p.n).blocks:
        return TraditionalTag("trivial", {"n": p.n})
    for kind, probe in (
        ("automorphic", _classify_automorphic),
        ("direct-product", _classify_direct),
        ("wedge", _classify_wedge),
    ):
        witness = probe(p)
        if witness is not None:
            return TraditionalTag(kind, witness)
    return TraditionalTag("non-traditional", {})


def reconstruct(tag: TraditionalTag, n: int) -> FinitePartition:
    """分類の witness から分割を組み立て直す"""
    w = tag.witness
    if tag.kind == "trivial":
        return trivial_partition(n)
    if tag.kind == "automorphic":
        return automorphic_partition(n, w["generators"] or [1 % n])
    if tag.kind == "direct-product":
        return direct_product_partition(
            FinitePartition.from_classes(w["n1"], w["factor1"]),
            FinitePartition.from_classes(w["n2"], w["factor2"]),
        )
    if tag.kind == "wedge":
        return wedge_partition(
            FinitePartition.from_classes(w["h_order"], w["inner"]),
            FinitePartition.from_classes(n // w["k_order"], w["quotient"]),
            w["k_order"],
            w["h_order"],
        )
    raise InputError(f"cannot reconstruct kind {tag.kind!r}", kind=tag.kind)
