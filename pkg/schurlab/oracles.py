"""
Schur 環オラクル (Schur Rings over Z×Z_n)

無限群 Z×Z_n 上の Schur 環はクラスが無限個あるため、
「元 g を受け取り、g を含むクラスを返す」全域関数 (class_of) として表します。

族は以下の5種類です。
- discrete / symmetric / automorphic: 有限自己同型部分群の軌道
- finite-lift: Z_n 上の Schur 環 P と F[Z] (または F[Z]^±) のウェッジ積
- wedge: Z^(s)×Z_n 上の内側オラクルと F[Z] (または F[Z]^±) のウェッジ積

公理 (iii) の検証は |t| ≤ N のウィンドウに限定され、ウィンドウ幅は証明書に記録されます。
"""

from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from schurlab.automorphisms import (
    AffineAut,
    AutSubgroup,
    apply,
    apply_to_subset,
    closure,
    conjugate_subgroup,
    identity_aut,
    inversion,
    invert,
    orbit,
)
from schurlab.config import DEFAULT_WINDOW
from schurlab.errors import AxiomViolation, InputError, WedgeCompatibilityError
from schurlab.finite_cyclic import FinitePartition, verify_partition
from schurlab.group_algebra import (
    FiniteSubset,
    GroupContext,
    GroupElement,
    convolve,
    require_same_context,
    simple,
    star,
)
from schurlab.logger import setup_logger
from schurlab.schemas import AutomorphismSpec, OracleSpec
from schurlab.structure import StructureConstants

logger = setup_logger(__name__)

DISCRETE = "discrete"
SYMMETRIC = "symmetric"


class Window:
    """|t| ≤ N の有限ビューポート"""

    __slots__ = ("N",)

    def __init__(self, N: int):
        if isinstance(N, bool) or not isinstance(N, int) or N < 0:
            raise InputError(f"window bound must be a nonnegative integer, got {N!r}", N=N)
        self.N = N

    def elements(self, ctx: GroupContext) -> Iterator[GroupElement]:
        for t in range(-self.N, self.N + 1):
            for k in range(ctx.n):
                yield GroupElement(t, k)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Window) and other.N == self.N

    def __hash__(self) -> int:
        return hash(self.N)

    def __repr__(self) -> str:
        return f"Window(N={self.N})"


# --- オラクル本体 (Oracles) ---


class SchurOracle:
    """
    クラス所属オラクルの基底クラス

    サブクラスは _compute_class だけを実装します。
    計算したクラスは全要素をキーにキャッシュするので、同じクラスの問い合わせは1回で済みます。
    """

    family = "abstract"

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        self._classes: Dict[GroupElement, FiniteSubset] = {}

    def class_of(self, g: GroupElement) -> FiniteSubset:
        g = self.ctx.normalize(g)
        cached = self._classes.get(g)
        if cached is not None:
            return cached
        C = self._compute_class(g)
        for h in C.elements:
            self._classes.setdefault(h, C)
        self._classes[g] = C
        return C

    def _compute_class(self, g: GroupElement) -> FiniteSubset:
        raise NotImplementedError

    def describe(self) -> OracleSpec:
        raise InputError(f"{type(self).__name__} has no replayable spec")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} n={self.ctx.n} family={self.family}>"


class AutomorphicOracle(SchurOracle):
    """FG^H: クラスは H-軌道"""

    family = "automorphic"

    def __init__(self, H: AutSubgroup, family: str = "automorphic"):
        super().__init__(H.ctx)
        self.H = H
        self.family = family

    def _compute_class(self, g: GroupElement) -> FiniteSubset:
        return orbit(self.H, g)

    def describe(self) -> OracleSpec:
        if self.family in (DISCRETE, SYMMETRIC):
            return OracleSpec(n=self.ctx.n, family=self.family)
        gens = self.H.generators or self.H.elements
        return OracleSpec(
            n=self.ctx.n,
            family="automorphic",
            generators=[AutomorphismSpec(**tau.to_record()) for tau in gens],
        )


def _pulled_back_coset(ctx: GroupContext, t: int, outer: str) -> FiniteSubset:
    """z^t Z_n、対称なら {z^t, z^{-t}} Z_n"""
    if outer == SYMMETRIC:
        ts = {t, -t}
    else:
        ts = {t}
    return FiniteSubset(
        ctx, frozenset(GroupElement(u, j) for u in ts for j in range(ctx.n))
    )


class FiniteLiftOracle(SchurOracle):
    """
    F[Z_n]^P ∧ F[Z] または F[Z_n]^P ∧ F[Z]^±

    捩れ部分のクラスは分割 P のブロック、t ≠ 0 のクラスは剰余類全体です。
    """

    family = "finite-lift"

    def __init__(self, partition: FinitePartition, outer: str = DISCRETE):
        super().__init__(GroupContext(partition.n))
        if outer not in (DISCRETE, SYMMETRIC):
            raise InputError(f"unknown outer flavor {outer!r}", outer=outer)
        self.partition = partition
        self.outer = outer

    def _compute_class(self, g: GroupElement) -> FiniteSubset:
        if g.t == 0:
            return FiniteSubset(
                self.ctx,
                frozenset(GroupElement(0, k) for k in self.partition.block_of(g.k)),
            )
        return _pulled_back_coset(self.ctx, g.t, self.outer)

    def describe(self) -> OracleSpec:
        return OracleSpec(
            n=self.ctx.n,
            family="finite-lift",
            outer=self.outer,
            classes=[list(b) for b in self.partition.blocks],
        )


class WedgeOracle(SchurOracle):
    """
    S ∧ T（K = Z_n, H = Z^(s)×Z_n）

    内側オラクルは z^s ↦ z で番号を付け替えた Z×Z_n 上のオラクルです。
    s の倍数でない t のクラスは剰余類 z^t Z_n（対称なら {z^t, z^{-t}} Z_n）。
    """

    family = "wedge"

    def __init__(self, inner: SchurOracle, s: int, outer: str = DISCRETE):
        super().__init__(inner.ctx)
        self.inner = inner
        self.s = s
        self.outer = outer

    def _compute_class(self, g: GroupElement) -> FiniteSubset:
        if g.t % self.s == 0:
            inner_class = self.inner.class_of(GroupElement(g.t // self.s, g.k))
            return FiniteSubset(
                self.ctx,
                frozenset(GroupElement(h.t * self.s, h.k) for h in inner_class.elements),
            )
        return _pulled_back_coset(self.ctx, g.t, self.outer)

    def describe(self) -> OracleSpec:
        return OracleSpec(
            n=self.ctx.n,
            family="wedge",
            s=self.s,
            outer=self.outer,
            inner=self.inner.describe(),
        )


class TransformedOracle(SchurOracle):
    """τ(S): class_of'(g) = τ(class_of(τ^{-1}(g)))"""

    family = "transformed"

    def __init__(self, tau: AffineAut, base: SchurOracle):
        super().__init__(require_same_context(tau.ctx, base.ctx))
        self.tau = tau
        self.tau_inv = invert(tau)
        self.base = base

    def _compute_class(self, g: GroupElement) -> FiniteSubset:
        return apply_to_subset(self.tau, self.base.class_of(apply(self.tau_inv, g)))

    def describe(self) -> OracleSpec:
        return OracleSpec(
            n=self.ctx.n,
            family="transformed",
            tau=AutomorphismSpec(**self.tau.to_record()),
            inner=self.base.describe(),
        )


class PatchedOracle(SchurOracle):
    """
    一部のクラスを差し替えたオラクル（ネガティブコントロール用）

    overrides に含まれない元のクラスは、元のクラスから overrides の元を除いたものです。
    Schur 環になる保証はありません。
    """

    family = "patched"

    def __init__(self, base: SchurOracle, overrides: Sequence[FiniteSubset]):
        super().__init__(base.ctx)
        self.base = base
        self.overrides = tuple(overrides)
        self._claimed: Dict[GroupElement, FiniteSubset] = {}
        for C in self.overrides:
            for h in C.elements:
                if h in self._claimed:
                    raise InputError("override classes overlap", element=h.to_record())
                self._claimed[h] = C

    def _compute_class(self, g: GroupElement) -> FiniteSubset:
        if g in self._claimed:
            return self._claimed[g]
        original = self.base.class_of(g)
        return FiniteSubset(
            self.ctx, frozenset(h for h in original.elements if h not in self._claimed)
        )


# --- 族の構成子 (Family Constructors) ---


def make_discrete(ctx: GroupContext) -> AutomorphicOracle:
    return AutomorphicOracle(closure([identity_aut(ctx)]), family=DISCRETE)


def make_symmetric(ctx: GroupContext) -> AutomorphicOracle:
    return AutomorphicOracle(closure([inversion(ctx)]), family=SYMMETRIC)


def make_automorphic(H: AutSubgroup) -> AutomorphicOracle:
    return AutomorphicOracle(H)


def make_finite_lift(partition: FinitePartition, outer: str = DISCRETE) -> FiniteLiftOracle:
    """捩れ部分の分割を公理検証してから持ち上げる"""
    verify_partition(partition)
    return FiniteLiftOracle(partition, outer)


def make_wedge(
    inner: SchurOracle, s: int, outer: str = DISCRETE, check_window: Optional[int] = None
) -> WedgeOracle:
    """
    ウェッジ積オラクルを構成する

    整合条件 T_{H/K} = φ(S) は、内側の各クラスの自由射影が
    {t}（外側 discrete）または {t, −t}（外側 symmetric）であることとして
    |t| ≤ check_window で検査します。

    Raises:
        WedgeCompatibilityError: s < 2、n < 2、または整合条件の違反
    """
    if outer not in (DISCRETE, SYMMETRIC):
        raise InputError(f"unknown outer flavor {outer!r}", outer=outer)
    if isinstance(s, bool) or not isinstance(s, int) or s < 2:
        raise WedgeCompatibilityError(
            f"free index must be at least 2 for a proper wedge, got {s!r}", s=s
        )
    if inner.ctx.n < 2:
        raise WedgeCompatibilityError(
            "wedge over Z×Z_1 has no nontrivial torsion subgroup", n=inner.ctx.n
        )
    N = DEFAULT_WINDOW if check_window is None else check_window
    for g in Window(N).elements(inner.ctx):
        C = inner.class_of(g)
        projection = set(C.free_exponents())
        expected = {g.t, -g.t} if outer == SYMMETRIC else {g.t}
        if projection != expected:
            raise WedgeCompatibilityError(
                "inner class does not project onto an outer class",
                inner_class=C.to_record(),
                projection=sorted(projection),
                expected=sorted(expected),
                outer=outer,
            )
    return WedgeOracle(inner, s, outer)


def _aut_from_spec(ctx: GroupContext, spec: AutomorphismSpec) -> AffineAut:
    return AffineAut(ctx, spec.eps, spec.m, spec.i)


def oracle_from_spec(spec: OracleSpec) -> SchurOracle:
    """JSON仕様からオラクルを組み立てる（describe の逆）"""
    ctx = GroupContext(spec.n)
    family = spec.family
    if family == DISCRETE:
        return make_discrete(ctx)
    if family == SYMMETRIC:
        return make_symmetric(ctx)
    if family == "automorphic":
        if not spec.generators:
            raise InputError("automorphic spec needs a nonempty generator list")
        return make_automorphic(closure([_aut_from_spec(ctx, g) for g in spec.generators]))
    if family == "finite-lift":
        if spec.classes is None:
            raise InputError("finite-lift spec needs the torsion classes")
        return make_finite_lift(
            FinitePartition.from_classes(spec.n, spec.classes), spec.outer or DISCRETE
        )
    if family in ("wedge", "transformed"):
        if spec.inner is None:
            raise InputError(f"{family} spec needs an inner oracle spec")
        if spec.inner.n != spec.n:
            raise InputError(
                "inner spec lives on a different torsion order",
                n=spec.n,
                inner_n=spec.inner.n,
            )
        inner = oracle_from_spec(spec.inner)
        if family == "wedge":
            if spec.s is None:
                raise InputError("wedge spec needs the free index s")
            return make_wedge(inner, spec.s, spec.outer or DISCRETE)
        if spec.tau is None:
            raise InputError("transformed spec needs tau")
        return transform_oracle(_aut_from_spec(ctx, spec.tau), inner)
    raise InputError(f"unknown family {family!r}", family=family)


def describe(o: SchurOracle) -> Dict[str, Any]:
    return o.describe().model_dump(exclude_none=True)


def transform_oracle(tau: AffineAut, o: SchurOracle) -> SchurOracle:
    """τ(S)。automorphic(H) は automorphic(τHτ^{-1}) のまま返します。"""
    require_same_context(tau.ctx, o.ctx)
    if isinstance(o, AutomorphicOracle) and o.family == "automorphic":
        return make_automorphic(conjugate_subgroup(tau, o.H))
    return TransformedOracle(tau, o)


# --- 積の分解 (Product Decomposition) ---


ProductCache = Dict[Tuple[GroupElement, GroupElement], Dict[GroupElement, int]]


def _product_counts(
    C: FiniteSubset, D: FiniteSubset, cache: Optional[ProductCache] = None
) -> Dict[GroupElement, int]:
    """C̄D̄ の係数（単純量どうしの積なので整数で数える）"""
    key = (C.min(), D.min())
    if cache is not None and key in cache:
        return cache[key]
    n = C.ctx.n
    counts: Dict[GroupElement, int] = {}
    for g in C.elements:
        for h in D.elements:
            x = GroupElement(g.t + h.t, (g.k + h.k) % n)
            counts[x] = counts.get(x, 0) + 1
    if cache is not None:
        cache[key] = counts
        cache[(key[1], key[0])] = counts
    return counts


def _decompose(
    o: SchurOracle, C: FiniteSubset, D: FiniteSubset, cache: Optional[ProductCache] = None
) -> List[Tuple[FiniteSubset, int]]:
    counts = _product_counts(C, D, cache)
    touched: Dict[GroupElement, FiniteSubset] = {}
    for x in counts:
        E = o.class_of(x)
        touched.setdefault(E.min(), E)
    result = []
    for key in sorted(touched):
        E = touched[key]
        first = counts.get(key, 0)
        for e in E.sorted_elements:
            value = counts.get(e, 0)
            if value != first:
                raise AxiomViolation(
                    "iii",
                    "product coefficient is not constant on a class",
                    {
                        "C": C.to_record(),
                        "D": D.to_record(),
                        "E": E.to_record(),
                        "elements": [key.to_record(), e.to_record()],
                        "coefficients": [first, value],
                    },
                )
        result.append((E, first))
    return result


def decompose_product(
    o: SchurOracle, C: FiniteSubset, D: FiniteSubset
) -> List[Tuple[FiniteSubset, int]]:
    """
    C̄D̄ = Σ λ Ē をクラスごとに分解する

    Returns:
        (クラス, λ) のリスト（クラス最小元の昇順）

    Raises:
        AxiomViolation: あるクラス上で係数が一定でない（公理 (iii)）
    """
    require_same_context(o.ctx, C.ctx, D.ctx)
    return _decompose(o, C, D)


def structure_constant(
    o: SchurOracle,
    C: FiniteSubset,
    D: FiniteSubset,
    E: FiniteSubset,
    cache: Optional[ProductCache] = None,
) -> int:
    """λ_{CDE}（E の代表元での係数）"""
    return _product_counts(C, D, cache).get(E.min(), 0)


def oracle_lookup(
    o: SchurOracle, table: StructureConstants, cache: Optional[ProductCache] = None
) -> Callable[[GroupElement, GroupElement, GroupElement], int]:
    """テーブル外のトリプルをオラクルから求める関数（サイズ補題用）"""
    cache = {} if cache is None else cache

    def members(key: GroupElement) -> FiniteSubset:
        return FiniteSubset(o.ctx, frozenset(table.classes[key]))

    def lookup(c: GroupElement, d: GroupElement, e: GroupElement) -> int:
        if (c, d, e) in table.triples:
            return table.triples[(c, d, e)]
        return _product_counts(members(c), members(d), cache).get(e, 0)

    return lookup


# --- ウィンドウ検証 (Window Verification) ---


def window_classes(o: SchurOracle, w: Window) -> List[FiniteSubset]:
    """
    ウィンドウに触れるクラスを最小元の順に返す

    g ∈ class_of(g) と、クラス内の全元が同じクラスを返すことも検査します。
    """
    seen: Dict[GroupElement, FiniteSubset] = {}
    for g in w.elements(o.ctx):
        C = o.class_of(g)
        if g not in C:
            raise AxiomViolation(
                "membership",
                "element is missing from its own class",
                {"element": g.to_record(), "class": C.to_record()},
            )
        key = C.min()
        if key in seen:
            continue
        for h in C.sorted_elements:
            other = o.class_of(h)
            if other != C:
                raise AxiomViolation(
                    "consistency",
                    "two members of a class report different classes",
                    {
                        "element": h.to_record(),
                        "class": C.to_record(),
                        "reported": other.to_record(),
                    },
                )
        seen[key] = C
    return [seen[key] for key in sorted(seen)]


def verify_on_window(
    o: SchurOracle, w: Window, cache: Optional[ProductCache] = None
) -> StructureConstants:
    """
    |t| ≤ N に触れるクラスについて公理 (i)–(iii) を検証し、λ 表を返す

    積は |t| ≤ 2N まで読みます。表にはウィンドウのクラスに加えて、
    積に現れたクラスとその逆クラスも記録されます。

    Raises:
        AxiomViolation: 反例（クラス、要素、係数）つき
    """
    ctx = o.ctx
    identity_class = o.class_of(ctx.identity)
    if identity_class.elements != frozenset({ctx.identity}):
        raise AxiomViolation(
            "i",
            "identity is not a singleton class",
            {"class": identity_class.to_record()},
        )

    classes = window_classes(o, w)
    table = StructureConstants(window=w.N)

    def record(C: FiniteSubset) -> None:
        C_star = C.star()
        table.add_class(C.min(), C.sorted_elements, C_star.min())
        table.add_class(C_star.min(), C_star.sorted_elements, C.min())

    for C in classes:
        inverse_class = o.class_of(ctx.inv(C.min()))
        if inverse_class != C.star():
            raise AxiomViolation(
                "ii",
                "class of the inverse is not the inverse class",
                {
                    "class": C.to_record(),
                    "star": C.star().to_record(),
                    "class_of_inverse": inverse_class.to_record(),
                },
            )
        record(C)

    cache = {} if cache is None else cache
    for idx, C in enumerate(classes):
        c = C.min()
        for D in classes[idx:]:
            d = D.min()
            for E, lam in _decompose(o, C, D, cache):
                record(E)
                e = E.min()
                table.triples[(c, d, e)] = lam
                table.triples[(d, c, e)] = lam
    logger.debug(
        "🔍 %s verified on N=%d: %d classes, %d triples",
        o, w.N, len(classes), len(table.triples),
    )
    return table


# --- 探査 (Probes) ---


def tycoons(A: FiniteSubset, B: FiniteSubset) -> FiniteSubset:
    """
    AB* の中で重複度 |A| に達する元（x が tycoon ⇔ A = xB）

    Raises:
        InputError: |A| ≠ |B| または空集合
    """
    ctx = require_same_context(A.ctx, B.ctx)
    if len(A) != len(B) or not A.elements:
        raise InputError(
            "tycoons need nonempty subsets of equal size", sizes=[len(A), len(B)]
        )
    product = convolve(simple(A), star(simple(B)))
    return FiniteSubset(
        ctx, frozenset(g for g, c in product.items() if c == len(A))
    )


def detect_max_free_subgroup(o: SchurOracle, w: Window) -> Optional[int]:
    """class_of(z^s) ⊆ {z^s, z^{-s}} となる最小の s ≤ N（なければ None）"""
    for s in range(1, w.N + 1):
        C = o.class_of(GroupElement(s, 0))
        if C.elements <= {GroupElement(s, 0), GroupElement(-s, 0)}:
            return s
    return None


def first_difference(o1: SchurOracle, o2: SchurOracle, w: Window) -> Optional[GroupElement]:
    """ウィンドウ内でクラスが食い違う最初の元"""
    require_same_context(o1.ctx, o2.ctx)
    for g in w.elements(o1.ctx):
        if o1.class_of(g) != o2.class_of(g):
            return g
    return None


def oracles_equal_on_window(o1: SchurOracle, o2: SchurOracle, w: Window) -> bool:
    return first_difference(o1, o2, w) is None


def window_signature(o: SchurOracle, w: Window) -> Tuple[Tuple[GroupElement, ...], ...]:
    """ウィンドウに触れるクラスの正規形（等しい ⇔ oracles_equal_on_window）"""
    keys = {}
    for g in w.elements(o.ctx):
        C = o.class_of(g)
        keys.setdefault(C.min(), C.sorted_elements)
    return tuple(keys[k] for k in sorted(keys))


def torsion_partition(o: SchurOracle) -> FinitePartition:
    """捩れ部分 Z_n に誘導される分割 T(S)"""
    blocks = {}
    for k in range(o.ctx.n):
        C = o.class_of(GroupElement(0, k))
        if not C.is_torsion():
            raise AxiomViolation(
                "consistency",
                "class of a torsion element leaves the torsion subgroup",
                {"class": C.to_record()},
            )
        blocks.setdefault(C.min(), tuple(g.k for g in C.sorted_elements))
    return FinitePartition(o.ctx.n, tuple(blocks.values()))


def coset_intersection_sizes(C: FiniteSubset) -> Dict[int, int]:
    """t ごとの |C ∩ z^t Z_n|（0 でないものだけ）"""
    sizes: Dict[int, int] = {}
    for g in C.elements:
        sizes[g.t] = sizes.get(g.t, 0) + 1
    return dict(sorted(sizes.items()))
