"""
自己同型群 (Automorphisms of Z×Z_n)

Z×Z_n の自己同型をアフィン三つ組 (ε, m, i) で表します。

    z ↦ a^i z^ε,  a ↦ a^m   （gcd(m, n) = 1）

ρ = (+1, 1, 1)、σ_m = (+1, m, 0)、* = (−1, −1, 0)、ψ = (−1, 1, 1) が代表的な生成元です。
位数は 2·n·φ(n) で、素数 p なら GA(1,p)×Z_2 と同型になります。
"""

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from sympy import totient

from schurlab.errors import ContextMismatchError, InputError
from schurlab.group_algebra import (
    FiniteSubset,
    GroupAlgebraElement,
    GroupContext,
    GroupElement,
    orbit_closure,
    require_same_context,
)
from schurlab.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True, order=True)
class AffineAut:
    """自己同型 z ↦ a^i z^eps, a ↦ a^m。m と i は n を法として正規化されます。"""

    ctx: GroupContext
    eps: int
    m: int
    i: int

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise InputError(f"eps must be +1 or -1, got {self.eps!r}", eps=self.eps)
        n = self.ctx.n
        object.__setattr__(self, "m", self.m % n)
        object.__setattr__(self, "i", self.i % n)
        if gcd(self.m, n) != 1:
            raise InputError(
                f"m={self.m} is not a unit modulo {n}", m=self.m, n=n
            )

    def to_record(self) -> Dict[str, int]:
        return {"eps": self.eps, "m": self.m, "i": self.i}

    def __repr__(self) -> str:
        return f"({self.eps:+d},{self.m},{self.i})"


@dataclass(frozen=True)
class AutSubgroup:
    """
    有限自己同型部分群 H

    elements は (eps, m, i) 順にソート済み。generators は軌道計算に使う生成元で、
    等価判定には含めません。
    """

    ctx: GroupContext
    elements: Tuple[AffineAut, ...]
    generators: Tuple[AffineAut, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, tau: object) -> bool:
        return tau in self.elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def preserves_orientation(self) -> bool:
        """全元が eps=+1（自由部分の像が離散になる）"""
        return all(tau.eps == 1 for tau in self.elements)

    def to_record(self) -> Dict[str, object]:
        return {
            "order": self.order,
            "generators": [tau.to_record() for tau in self.generators],
        }


# --- 代表的な自己同型 (Named Automorphisms) ---


def identity_aut(ctx: GroupContext) -> AffineAut:
    return AffineAut(ctx, 1, 1, 0)


def rho(ctx: GroupContext) -> AffineAut:
    """ρ: z ↦ az, a ↦ a"""
    return AffineAut(ctx, 1, 1, 1)


def sigma(ctx: GroupContext, m: int) -> AffineAut:
    """σ_m: z ↦ z, a ↦ a^m"""
    return AffineAut(ctx, 1, m, 0)


def inversion(ctx: GroupContext) -> AffineAut:
    """*: g ↦ g^{-1}"""
    return AffineAut(ctx, -1, -1, 0)


def psi(ctx: GroupContext) -> AffineAut:
    """ψ: z ↦ az^{-1}, a ↦ a"""
    return AffineAut(ctx, -1, 1, 1)


# --- 作用と合成 (Action and Composition) ---


def apply(tau: AffineAut, g: GroupElement) -> GroupElement:
    """z^t a^k ↦ z^{εt} a^{it + mk}"""
    n = tau.ctx.n
    if not tau.ctx.contains(g):
        raise ContextMismatchError(
            f"element {g!r} does not belong to Z×Z_{n}", n=n, element=g.to_record()
        )
    return GroupElement(tau.eps * g.t, (tau.i * g.t + tau.m * g.k) % n)


def apply_to_subset(tau: AffineAut, C: FiniteSubset) -> FiniteSubset:
    require_same_context(tau.ctx, C.ctx)
    return FiniteSubset(C.ctx, frozenset(apply(tau, g) for g in C.elements))


def apply_to_algebra(tau: AffineAut, x: GroupAlgebraElement) -> GroupAlgebraElement:
    """項ごとの持ち上げ"""
    require_same_context(tau.ctx, x.ctx)
    return GroupAlgebraElement(x.ctx, [(apply(tau, g), c) for g, c in x.items()])


def compose(s: AffineAut, t: AffineAut) -> AffineAut:
    """s∘t（先に t を作用させる）"""
    ctx = require_same_context(s.ctx, t.ctx)
    return AffineAut(ctx, s.eps * t.eps, s.m * t.m, s.i * t.eps + s.m * t.i)


def invert(tau: AffineAut) -> AffineAut:
    n = tau.ctx.n
    m_inv = 0 if n == 1 else pow(tau.m, -1, n)
    return AffineAut(tau.ctx, tau.eps, m_inv, -tau.eps * m_inv * tau.i)


# --- 部分群 (Subgroups) ---


def closure(generators: Sequence[AffineAut]) -> AutSubgroup:
    """生成元から部分群を幅優先で閉包する"""
    if not generators:
        raise InputError("closure needs at least one generator")
    ctx = require_same_context(*(g.ctx for g in generators))
    start = identity_aut(ctx)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return AutSubgroup(ctx, tuple(sorted(seen)), tuple(generators))


def orbit(H: AutSubgroup, g: GroupElement) -> FiniteSubset:
    """H-軌道（生成元による幅優先閉包）"""
    maps = list(H.generators) or list(H.elements)
    members = orbit_closure(H.ctx.normalize(g), maps, apply)
    return FiniteSubset(H.ctx, members)


def conjugate_subgroup(tau: AffineAut, H: AutSubgroup) -> AutSubgroup:
    """τHτ^{-1}"""
    require_same_context(tau.ctx, H.ctx)
    tau_inv = invert(tau)

    def conj(sigma_: AffineAut) -> AffineAut:
        return compose(compose(tau, sigma_), tau_inv)

    return AutSubgroup(
        H.ctx,
        tuple(sorted({conj(x) for x in H.elements})),
        tuple(conj(x) for x in H.generators),
    )


def automorphism_group_order(ctx: GroupContext) -> int:
    """|Aut(Z×Z_n)| = 2·n·φ(n)"""
    return 2 * ctx.n * int(totient(ctx.n))


def units(n: int) -> List[int]:
    """n を法とする単数（n=1 なら [0]）"""
    return [m for m in range(n) if gcd(m, n) == 1] if n > 1 else [0]


def full_automorphism_group(ctx: GroupContext) -> AutSubgroup:
    """全アフィン三つ組。生成元は ρ, 単数群の各元, *"""
    elements = tuple(
        sorted(
            AffineAut(ctx, eps, m, i)
            for eps in (1, -1)
            for m in units(ctx.n)
            for i in range(ctx.n)
        )
    )
    generators = (rho(ctx), inversion(ctx)) + tuple(
        sigma(ctx, m) for m in units(ctx.n) if m not in (0, 1)
    )
    return AutSubgroup(ctx, elements, generators)


def enumerate_subgroups(ctx: GroupContext) -> List[AutSubgroup]:
    """
    Aut(Z×Z_n) の全部分群を列挙する

    巡回部分群から出発し、既知の部分群に元を1つずつ加えた閉包を重複除去しながら
    広げていきます。群の元は整数添字と乗積表で扱います。
    """
    full = full_automorphism_group(ctx)
    elements = list(full.elements)
    index = {tau: idx for idx, tau in enumerate(elements)}
    size = len(elements)
    table = [
        [index[compose(elements[x], elements[y])] for y in range(size)]
        for x in range(size)
    ]
    ident = index[identity_aut(ctx)]

    def close(gens: Sequence[int], seed: Iterable[int] = ()) -> FrozenSet[int]:
        seen = set(seed) | {ident}
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    found: Dict[FrozenSet[int], Tuple[int, ...]] = {}
    frontier: List[FrozenSet[int]] = []
    for g in range(size):
        members = close([g])
        if members not in found:
            found[members] = (g,)
            frontier.append(members)

    while frontier:
        next_frontier = []
        for members in frontier:
            gens = found[members]
            for g in range(size):
                if g in members:
                    continue
                joined = close(gens + (g,), members)
                if joined not in found:
                    found[joined] = gens + (g,)
                    next_frontier.append(joined)
        frontier = next_frontier

    subgroups = [
        AutSubgroup(
            ctx,
            tuple(sorted(elements[x] for x in members)),
            tuple(elements[x] for x in gens),
        )
        for members, gens in found.items()
    ]
    subgroups.sort(key=lambda H: (H.order, H.elements))
    logger.debug("🔍 %d subgroups of Aut(Z×Z_%d)", len(subgroups), ctx.n)
    return subgroups
