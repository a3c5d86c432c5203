"""
群環演算 (Group Algebra over Z×Z_n)

Z×Z_n = ⟨z⟩×⟨a⟩ の元 z^t a^k と、有理係数の群環 F[Z×Z_n] の演算を提供します。
n=1 は Z そのもの、t=0 だけを使えば F[Z_n] になるため、
有限巡回群と無限群の両方をこのモジュール1つで扱います。

係数はすべて fractions.Fraction（厳密な有理数）で、浮動小数点は使いません。
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from schurlab.errors import ContextMismatchError, InputError

Coefficient = Union[int, Fraction]


# --- 群の元 (Group Elements) ---


@dataclass(frozen=True, order=True)
class GroupElement:
    """z^t a^k。順序は (t, k) の辞書式で、証明書の正規順序に使います。"""

    t: int
    k: int

    def to_record(self) -> List[int]:
        return [self.t, self.k]

    def __repr__(self) -> str:
        return f"z^{self.t}a^{self.k}"


@dataclass(frozen=True, order=True)
class GroupContext:
    """
    捩れ部分の位数 n を持つ群 Z×Z_n

    GroupElement 自体は n を持たないため、積・逆元・冪はすべて
    コンテキスト経由で計算します。
    """

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InputError(
                f"torsion order must be a positive integer, got {self.n!r}",
                n=repr(self.n),
            )

    # 基本の元
    @property
    def identity(self) -> GroupElement:
        return GroupElement(0, 0)

    @property
    def z(self) -> GroupElement:
        return GroupElement(1, 0)

    @property
    def a(self) -> GroupElement:
        return GroupElement(0, 1 % self.n)

    def element(self, t: int, k: int = 0) -> GroupElement:
        return GroupElement(int(t), int(k) % self.n)

    def normalize(self, g: GroupElement) -> GroupElement:
        if 0 <= g.k < self.n:
            return g
        return GroupElement(g.t, g.k % self.n)

    def contains(self, g: GroupElement) -> bool:
        return 0 <= g.k < self.n

    # 群演算
    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(g.t + h.t, (g.k + h.k) % self.n)

    def inv(self, g: GroupElement) -> GroupElement:
        return GroupElement(-g.t, (-g.k) % self.n)

    def power(self, g: GroupElement, m: int) -> GroupElement:
        return GroupElement(g.t * m, (g.k * m) % self.n)

    # 部分集合
    def subset(self, elements: Iterable[GroupElement]) -> "FiniteSubset":
        return FiniteSubset(self, frozenset(self.normalize(g) for g in elements))

    def torsion(self) -> "FiniteSubset":
        return self.coset(0)

    def coset(self, t: int) -> "FiniteSubset":
        """z^t·Z_n"""
        return FiniteSubset(self, frozenset(GroupElement(t, j) for j in range(self.n)))


def require_same_context(*contexts: GroupContext) -> GroupContext:
    first = contexts[0]
    for ctx in contexts[1:]:
        if ctx != first:
            raise ContextMismatchError(
                f"context mismatch: n={first.n} vs n={ctx.n}",
                expected=first.n,
                actual=ctx.n,
            )
    return first


# --- 有限部分集合 (Finite Subsets) ---


@dataclass(frozen=True)
class FiniteSubset:
    """群の有限部分集合 C。simple() で単純量 C̄ になります。"""

    ctx: GroupContext
    elements: FrozenSet[GroupElement]

    @cached_property
    def sorted_elements(self) -> Tuple[GroupElement, ...]:
        return tuple(sorted(self.elements))

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.sorted_elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self.elements

    def min(self) -> GroupElement:
        """クラスの正規代表（(t,k) 順で最小の元）"""
        if not self.elements:
            raise InputError("empty subset has no canonical element")
        return self.sorted_elements[0]

    def star(self) -> "FiniteSubset":
        return FiniteSubset(self.ctx, frozenset(self.ctx.inv(g) for g in self.elements))

    def translate(self, g: GroupElement) -> "FiniteSubset":
        """gC"""
        return FiniteSubset(
            self.ctx, frozenset(self.ctx.mul(g, h) for h in self.elements)
        )

    def simple(self) -> "GroupAlgebraElement":
        return simple(self)

    def free_exponents(self) -> List[int]:
        return sorted({g.t for g in self.elements})

    def is_torsion(self) -> bool:
        return all(g.t == 0 for g in self.elements)

    def to_record(self) -> List[List[int]]:
        return [g.to_record() for g in self.sorted_elements]

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(g) for g in self.sorted_elements) + "}"


# --- 群環の元 (Group Algebra Elements) ---


class GroupAlgebraElement:
    """
    α = Σ α_g g（有限台、係数は Fraction）

    ゼロ係数は保持しません。零元は空の項マップです。
    生成後は変更しない前提で、演算はすべて新しい元を返します。
    """

    __slots__ = ("ctx", "_terms")

    def __init__(
        self,
        ctx: GroupContext,
        terms: Union[
            Mapping[GroupElement, Coefficient],
            Iterable[Tuple[GroupElement, Coefficient]],
            None,
        ] = None,
    ):
        acc: Dict[GroupElement, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for g, c in items:
            g = ctx.normalize(g)
            acc[g] = acc.get(g, Fraction(0)) + Fraction(c)
        self.ctx = ctx
        self._terms: Dict[GroupElement, Fraction] = {
            g: c for g, c in acc.items() if c != 0
        }

    @classmethod
    def _from_clean(
        cls, ctx: GroupContext, terms: Dict[GroupElement, Fraction]
    ) -> "GroupAlgebraElement":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._terms = {g: c for g, c in terms.items() if c != 0}
        return obj

    @classmethod
    def zero(cls, ctx: GroupContext) -> "GroupAlgebraElement":
        return cls._from_clean(ctx, {})

    @classmethod
    def unit(cls, ctx: GroupContext) -> "GroupAlgebraElement":
        return cls._from_clean(ctx, {ctx.identity: Fraction(1)})

    # 参照系
    def coefficient(self, g: GroupElement) -> Fraction:
        return self._terms.get(self.ctx.normalize(g), Fraction(0))

    def items(self) -> List[Tuple[GroupElement, Fraction]]:
        return sorted(self._terms.items())

    @property
    def terms(self) -> Dict[GroupElement, Fraction]:
        return dict(self._terms)

    def support(self) -> FiniteSubset:
        return FiniteSubset(self.ctx, frozenset(self._terms))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    # 比較
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ctx, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}·{g!r}" for g, c in self.items())

    # 線形演算
    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        require_same_context(self.ctx, other.ctx)
        acc = dict(self._terms)
        for g, c in other._terms.items():
            acc[g] = acc.get(g, Fraction(0)) + c
        return GroupAlgebraElement._from_clean(self.ctx, acc)

    def __neg__(self) -> "GroupAlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def scale(self, c: Coefficient) -> "GroupAlgebraElement":
        q = Fraction(c)
        return GroupAlgebraElement._from_clean(
            self.ctx, {g: q * v for g, v in self._terms.items()}
        )

    def __mul__(self, other: Any) -> "GroupAlgebraElement":
        if isinstance(other, GroupAlgebraElement):
            return convolve(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "GroupAlgebraElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # 直列化
    def to_record(self) -> Dict[str, Any]:
        return {
            "n": self.ctx.n,
            "terms": [
                {"t": g.t, "k": g.k, "num": c.numerator, "den": c.denominator}
                for g, c in self.items()
            ],
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "GroupAlgebraElement":
        ctx = GroupContext(int(record["n"]))
        return cls(
            ctx,
            [
                (
                    GroupElement(int(term["t"]), int(term["k"])),
                    Fraction(int(term["num"]), int(term.get("den", 1))),
                )
                for term in record.get("terms", [])
            ],
        )


def simple(C: FiniteSubset) -> GroupAlgebraElement:
    """単純量 C̄ = Σ_{g∈C} g"""
    return GroupAlgebraElement._from_clean(C.ctx, {g: Fraction(1) for g in C.elements})


# --- 環演算 (Ring Operations) ---


def convolve(x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    """群環の積。g の係数は Σ_h x_h · y_{h^{-1}g}。"""
    ctx = require_same_context(x.ctx, y.ctx)
    n = ctx.n
    acc: Dict[GroupElement, Fraction] = {}
    for g, a in x._terms.items():
        for h, b in y._terms.items():
            key = GroupElement(g.t + h.t, (g.k + h.k) % n)
            acc[key] = acc.get(key, Fraction(0)) + a * b
    return GroupAlgebraElement._from_clean(ctx, acc)


def hadamard(x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    """アダマール積 α∘β = Σ α_g β_g g"""
    ctx = require_same_context(x.ctx, y.ctx)
    small, large = (x, y) if len(x) <= len(y) else (y, x)
    return GroupAlgebraElement._from_clean(
        ctx,
        {g: c * large._terms[g] for g, c in small._terms.items() if g in large._terms},
    )


def star(x: GroupAlgebraElement) -> GroupAlgebraElement:
    """α* = Σ α_g g^{-1}"""
    ctx = x.ctx
    return GroupAlgebraElement._from_clean(
        ctx, {ctx.inv(g): c for g, c in x._terms.items()}
    )


def frobenius(x: GroupAlgebraElement, m: int) -> GroupAlgebraElement:
    """フロベニウス写像 α^{(m)} = Σ α_g g^m（衝突した像の係数は加算）"""
    ctx = x.ctx
    acc: Dict[GroupElement, Fraction] = {}
    for g, c in x._terms.items():
        key = ctx.power(g, m)
        acc[key] = acc.get(key, Fraction(0)) + c
    return GroupAlgebraElement._from_clean(ctx, acc)


def subset_frobenius(C: FiniteSubset, m: int) -> FiniteSubset:
    """部分集合版フロベニウス像 C^{(m)} = {g^m : g ∈ C}"""
    return FiniteSubset(C.ctx, frozenset(C.ctx.power(g, m) for g in C.elements))


def stabilizer(C: FiniteSubset) -> FiniteSubset:
    """
    安定化部分群 G_C = {g : gC = C}

    自由指数が 0 でない元は台をずらすため、候補は捩れ部分 Z_n だけです。
    """
    if not C.elements:
        raise InputError("stabilizer of the empty set is undefined")
    ctx = C.ctx
    members = C.elements
    result = []
    for j in range(ctx.n):
        h = GroupElement(0, j)
        if all(ctx.mul(h, g) in members for g in members):
            result.append(h)
    return FiniteSubset(ctx, frozenset(result))


def subgroup_generated(C: FiniteSubset) -> FiniteSubset:
    """捩れ元の集合が生成する Z_n の部分群 ⟨C⟩"""
    ctx = C.ctx
    if not C.is_torsion():
        raise InputError(
            "only torsion subsets generate finite subgroups",
            elements=C.to_record(),
        )
    step = reduce(gcd, (g.k for g in C.elements), ctx.n)
    return FiniteSubset(ctx, frozenset(GroupElement(0, j) for j in range(0, ctx.n, step)))


# --- ケイリー準同型 (Cayley Homomorphisms) ---

FREE_CONTEXT = GroupContext(1)


def project_free(x: GroupAlgebraElement) -> GroupAlgebraElement:
    """自然射影 φ: Z×Z_n → Z（a ↦ 1）の線形持ち上げ。像は n=1 のコンテキスト。"""
    acc: Dict[GroupElement, Fraction] = {}
    for g, c in x._terms.items():
        key = GroupElement(g.t, 0)
        acc[key] = acc.get(key, Fraction(0)) + c
    return GroupAlgebraElement._from_clean(FREE_CONTEXT, acc)


def project_torsion(x: GroupAlgebraElement) -> GroupAlgebraElement:
    """自然射影 π: Z×Z_n → Z_n（z ↦ 1）。像は同じコンテキストの t=0 部分。"""
    acc: Dict[GroupElement, Fraction] = {}
    for g, c in x._terms.items():
        key = GroupElement(0, g.k)
        acc[key] = acc.get(key, Fraction(0)) + c
    return GroupAlgebraElement._from_clean(x.ctx, acc)


def torsion_order(ctx: GroupContext, g: GroupElement) -> Optional[int]:
    """元の位数（自由指数が 0 でなければ無限なので None）"""
    if g.t != 0:
        return None
    return ctx.n // gcd(g.k, ctx.n)


def orbit_closure(
    seed: GroupElement, maps: List[Any], apply_fn: Any
) -> FrozenSet[GroupElement]:
    """生成元による幅優先の閉包（軌道計算の共通部品）"""
    seen = {seed}
    queue = deque([seed])
    while queue:
        g = queue.popleft()
        for f in maps:
            h = apply_fn(f, g)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return frozenset(seen)
