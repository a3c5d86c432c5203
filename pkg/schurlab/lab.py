"""
定理ラボ (Theorem Lab)

補題・定理のインスタンスを生成した Schur 環の上で検査し、LabReport を返します。
各検査は名前で登録され、パラメータだけから再実行できます。

[ウィンドウについて]
無限群 Z×Z_n 上の仮定（「Z^(p) が S-部分群」など）の判定は |t| ≤ N に限定されます。
レポートには使用したウィンドウ幅を必ず記録します。

[前提として扱う事実]
捩れ部分環 T(S) の存在などの基本事実は、証明せず不変条件として検査します
（レポートの notes に "assumed + tested" と記載）。
"""

import asyncio
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError
from sympy import divisor_count, factorint, isprime, primitive_root

from schurlab.automorphisms import (
    AutSubgroup,
    automorphism_group_order,
    closure,
    enumerate_subgroups,
    inversion,
    psi,
    rho,
    sigma,
)
from schurlab.config import (
    CENSUS_PRIMES,
    DEFAULT_FREE_BOUND,
    DEFAULT_JOBS,
    DEFAULT_WINDOW,
    REFINEMENT_MAX_N,
)
from schurlab.difference_sets import (
    NON_TRIVIAL_ONLY,
    admissible_sizes,
    cross_difference_constant,
    find_difference_partitions,
    is_difference_set,
)
from schurlab.errors import AxiomViolation, BudgetExceededError, InputError
from schurlab.finite_cyclic import (
    FinitePartition,
    classify_traditional,
    discrete_partition,
    enumerate_by_refinement,
    enumerate_schur_rings,
    reconstruct,
    trivial_partition,
    verify_partition,
)
from schurlab.group_algebra import (
    FiniteSubset,
    GroupContext,
    GroupElement,
    stabilizer,
    subset_frobenius,
)
from schurlab.logger import setup_logger
from schurlab.oracles import (
    DISCRETE,
    SYMMETRIC,
    PatchedOracle,
    SchurOracle,
    Window,
    coset_intersection_sizes,
    describe,
    detect_max_free_subgroup,
    first_difference,
    make_automorphic,
    make_discrete,
    make_finite_lift,
    make_symmetric,
    make_wedge,
    oracle_from_spec,
    oracle_lookup,
    torsion_partition,
    transform_oracle,
    tycoons,
    verify_on_window,
    window_classes,
    window_signature,
)
from schurlab.schemas import LabReport, OracleSpec
from schurlab.structure import coprime_product_check, size_lemma_violations

logger = setup_logger(__name__)

# 有限巡回群の補題スイープの上限
LAB_MAX_N = 10

ASSUMED_NOTE = "torsion subring existence: assumed + tested"


@dataclass(frozen=True)
class LabCheck:
    name: str
    func: Callable[..., LabReport]
    description: str


CHECKS: Dict[str, LabCheck] = {}


def register(name: str, description: str):
    """検査関数を名前付きで登録するデコレータ"""

    def decorator(func: Callable[..., LabReport]) -> Callable[..., LabReport]:
        CHECKS[name] = LabCheck(name, func, description)
        return func

    return decorator


def _report(
    check: str,
    parameters: Dict[str, Any],
    witnesses: List[Dict[str, Any]],
    details: Optional[Dict[str, Any]] = None,
    notes: Optional[List[str]] = None,
    inapplicable: bool = False,
) -> LabReport:
    if inapplicable:
        verdict = "inapplicable"
    else:
        verdict = "fail" if witnesses else "pass"
    return LabReport(
        check=check,
        parameters=parameters,
        verdict=verdict,
        witnesses=witnesses,
        details=details or {},
        notes=notes or [],
    )


def _moduli(n: Optional[int], upper: int) -> List[int]:
    if n is None:
        return list(range(2, upper + 1))
    if n < 2:
        raise InputError(f"modulus must be at least 2, got {n}", n=n)
    if n > upper:
        raise BudgetExceededError(f"n={n} exceeds the lab budget {upper}", n=n, max_n=upper)
    return [n]


def _load_spec(spec: Union[None, Dict[str, Any], OracleSpec], default: OracleSpec) -> OracleSpec:
    if spec is None:
        return default
    if isinstance(spec, OracleSpec):
        return spec
    try:
        return OracleSpec.model_validate(spec)
    except ValidationError as e:
        raise InputError("invalid oracle spec", errors=e.errors(include_url=False)) from e


def _spec_record(spec: OracleSpec) -> Dict[str, Any]:
    return spec.model_dump(exclude_none=True)


def _full_affine_spec(p: int) -> OracleSpec:
    ctx = GroupContext(p)
    gens = [rho(ctx), sigma(ctx, int(primitive_root(p))), inversion(ctx)]
    return OracleSpec(n=p, family="automorphic", generators=[g.to_record() for g in gens])


def _is_fermat_or_safe(p: int) -> bool:
    if not isprime(p) or p == 2:
        return False
    m = p - 1
    fermat = m & (m - 1) == 0
    safe = m % 2 == 0 and isprime(m // 2)
    return fermat or safe


def _subgroup_record(H: AutSubgroup) -> Dict[str, Any]:
    return {"order": H.order, "generators": [g.to_record() for g in H.generators]}


# --- 共通の判定 (Shared Probes) ---


def _free_power_closed(o: SchurOracle, t: int) -> bool:
    """class_of(z^t) ⊆ {z^t, z^{-t}}"""
    C = o.class_of(GroupElement(t, 0))
    return C.elements <= {GroupElement(t, 0), GroupElement(-t, 0)}


def frobenius_witnesses(o: SchurOracle, w: Window) -> Optional[List[Dict[str, Any]]]:
    """
    C^(k) がまたクラスになるかを窓内の全クラスと gcd(k,n)=1 の k で確認する

    仮定「Z^(n) が S-部分群」が窓内で成り立たなければ None。
    """
    n = o.ctx.n
    if not all(_free_power_closed(o, n * j) for j in range(1, max(w.N, 1) + 1)):
        return None
    ks = [k for k in range(1, 2 * n + 1) if gcd(k, n) == 1]
    witnesses = []
    for C in window_classes(o, w):
        for k in ks:
            image = subset_frobenius(C, k)
            found = o.class_of(image.min())
            if found != image:
                witnesses.append(
                    {
                        "class": C.to_record(),
                        "k": k,
                        "image": image.to_record(),
                        "class_of_image": found.to_record(),
                    }
                )
                break
    return witnesses


def wedge_structure_witnesses(
    o: SchurOracle, w: Window
) -> Tuple[Optional[List[Dict[str, Any]]], Dict[str, Any]]:
    """
    H = Z^(s)（窓内で検出した最大の自由 S-部分群）、[K:H] = n として、
    K×Z_n の外にあるクラスが非自明な捩れ S-部分群の剰余類の和かを確認する

    n ∤ [Z:H] なら仮定不成立として None を返します。H が見つからなければ K = 1。
    """
    n = o.ctx.n
    s = detect_max_free_subgroup(o, w)
    if s is not None and s % n:
        return None, {"s": s}
    k_index = s // n if s is not None else None
    witnesses = []
    checked = 0
    for C in window_classes(o, w):
        if k_index is None:
            outside = all(g.t != 0 for g in C.elements)
        else:
            outside = all(g.t % k_index != 0 for g in C.elements)
        if not outside:
            continue
        checked += 1
        stab = stabilizer(C)
        is_s_subgroup = all(o.class_of(h).elements <= stab.elements for h in stab.elements)
        if len(stab) < 2 or not is_s_subgroup:
            witnesses.append(
                {
                    "class": C.to_record(),
                    "stabilizer": stab.to_record(),
                    "s_subgroup": is_s_subgroup,
                }
            )
    return witnesses, {"s": s, "K_index": k_index, "classes_checked": checked}


def _size_lemma_on_oracle(o: SchurOracle, table) -> List[Dict[str, Any]]:
    return size_lemma_violations(table, oracle_lookup(o, table))


def _axiom_failure(o: SchurOracle, w: Window) -> List[Dict[str, Any]]:
    try:
        verify_on_window(o, w)
    except AxiomViolation as e:
        return [{"axiom": e.axiom, "message": e.message, "witness": e.witness}]
    return []


# --- 有限巡回群の補題 (Lemmas over Z_n) ---


@register("size-lemma", "λ|E| = μ|C| = ν|D| on every enumerated Schur ring over Z_n")
def check_size_lemma(n: Optional[int] = None) -> LabReport:
    witnesses = []
    rows = []
    for m in _moduli(n, LAB_MAX_N):
        rings = enumerate_schur_rings(m)
        triples = 0
        for ring in rings:
            table = verify_partition(ring)
            triples += len(table.triples)
            for violation in size_lemma_violations(table):
                witnesses.append({"n": m, "classes": ring.to_record()["classes"], **violation})
        rows.append({"n": m, "rings": len(rings), "triples": triples})
    return _report("size-lemma", {"n": n}, witnesses, {"rows": rows})


@register("coprime-product", "gcd(|C|,|D|)=1 ⇒ C̄D̄ is a multiple of one class")
def check_coprime_product(n: Optional[int] = None) -> LabReport:
    witnesses = []
    rows = []
    vacuous = []
    for m in _moduli(n, LAB_MAX_N):
        pairs = 0
        for ring in enumerate_schur_rings(m):
            checked, violations = coprime_product_check(verify_partition(ring), 0)
            pairs += checked
            if checked == 0:
                vacuous.append({"n": m, "classes": ring.to_record()["classes"]})
            for violation in violations:
                witnesses.append({"n": m, "classes": ring.to_record()["classes"], **violation})
        rows.append({"n": m, "coprime_pairs": pairs})
    notes = []
    if vacuous:
        notes.append(f"{len(vacuous)} rings have no coprime non-identity pair (vacuous)")
    return _report(
        "coprime-product",
        {"n": n},
        witnesses,
        {"rows": rows, "vacuous": vacuous},
        notes,
    )


@register("enumeration", "brute-force and refinement enumerators agree; all rings traditional")
def check_enumeration(n: Optional[int] = None) -> LabReport:
    witnesses = []
    rows = []
    for m in _moduli(n, REFINEMENT_MAX_N):
        brute = enumerate_schur_rings(m)
        refined = enumerate_by_refinement(m)
        if [p.blocks for p in brute] != [p.blocks for p in refined]:
            only_brute = sorted(set(p.blocks for p in brute) - set(p.blocks for p in refined))
            only_refined = sorted(set(p.blocks for p in refined) - set(p.blocks for p in brute))
            witnesses.append(
                {
                    "n": m,
                    "only_brute_force": [[list(b) for b in x] for x in only_brute],
                    "only_refinement": [[list(b) for b in x] for x in only_refined],
                }
            )
        kinds: Dict[str, int] = {}
        for ring in brute:
            tag = classify_traditional(ring)
            kinds[tag.kind] = kinds.get(tag.kind, 0) + 1
            if tag.kind == "non-traditional":
                witnesses.append({"n": m, "non_traditional": ring.to_record()["classes"]})
            elif reconstruct(tag, m).blocks != ring.blocks:
                witnesses.append(
                    {"n": m, "classes": ring.to_record()["classes"], "tag": tag.to_record()}
                )
        row: Dict[str, Any] = {"n": m, "rings": len(brute), "kinds": kinds}
        if isprime(m):
            expected = int(divisor_count(m - 1))
            row["divisors_of_n_minus_1"] = expected
            if len(brute) != expected:
                witnesses.append({"n": m, "count": len(brute), "expected": expected})
            if set(kinds) - {"trivial", "automorphic"}:
                witnesses.append({"n": m, "non_automorphic_kinds": sorted(kinds)})
        rows.append(row)
    return _report("enumeration", {"n": n}, witnesses, {"rows": rows})


# --- 自己同型群 (Automorphisms) ---


@register("automorphism-order", "closure of {ρ, σ_r, *} over Z×Z_p has 2·p·(p−1) elements")
def check_automorphism_order(p: Optional[int] = None) -> LabReport:
    primes = list(CENSUS_PRIMES) if p is None else [p]
    witnesses = []
    rows = []
    for q in primes:
        if not isprime(q):
            raise InputError(f"{q} is not prime", p=q)
        ctx = GroupContext(q)
        r = int(primitive_root(q))
        H = closure([rho(ctx), sigma(ctx, r), inversion(ctx)])
        expected = 2 * q * (q - 1)
        rows.append({"p": q, "r": r, "order": H.order, "expected": expected})
        if H.order != expected or H.order != automorphism_group_order(ctx):
            witnesses.append({"p": q, "order": H.order, "expected": expected})
    return _report("automorphism-order", {"p": p}, witnesses, {"rows": rows})


# --- オラクルの定理 (Oracle Theorems) ---


@register("frobenius-primitivity", "C ∈ D(S) ⇒ C^(k) ∈ D(S) for gcd(k,n)=1 when Z^(n) is an S-subgroup")
def check_frobenius_primitivity(
    spec: Union[None, Dict[str, Any], OracleSpec] = None, window: Optional[int] = None
) -> LabReport:
    model = _load_spec(spec, _full_affine_spec(3))
    N = DEFAULT_WINDOW if window is None else window
    o = oracle_from_spec(model)
    w = Window(N)
    params = {"spec": _spec_record(model), "window": N}
    failure = _axiom_failure(o, w)
    if failure:
        return _report("frobenius-primitivity", params, failure)
    witnesses = frobenius_witnesses(o, w)
    details = {"max_free_index": detect_max_free_subgroup(o, w)}
    if witnesses is None:
        return _report(
            "frobenius-primitivity",
            params,
            [],
            details,
            [f"Z^({o.ctx.n}) is not an S-subgroup within N={N}"],
            inapplicable=True,
        )
    return _report("frobenius-primitivity", params, witnesses, details)


def wedge_structure_report(o: SchurOracle, window: int, params: Dict[str, Any]) -> LabReport:
    """オラクルを直接受け取る版（ネガティブコントロールでも使用）"""
    witnesses, details = wedge_structure_witnesses(o, Window(window))
    if witnesses is None:
        return _report(
            "wedge-structure",
            params,
            [],
            details,
            ["n does not divide [Z:H] within the window"],
            inapplicable=True,
        )
    notes = []
    if details["classes_checked"] == 0:
        notes.append("classes_checked: 0 (no class lies outside K×Z_n within the window)")
    return _report("wedge-structure", params, witnesses, details, notes)


@register("wedge-structure", "classes outside K×Z_n are unions of cosets of a torsion S-subgroup")
def check_wedge_structure(
    spec: Union[None, Dict[str, Any], OracleSpec] = None, window: Optional[int] = None
) -> LabReport:
    default = OracleSpec(n=3, family="finite-lift", outer=DISCRETE, classes=[[0], [1, 2]])
    model = _load_spec(spec, default)
    N = DEFAULT_WINDOW if window is None else window
    o = oracle_from_spec(model)
    params = {"spec": _spec_record(model), "window": N}
    failure = _axiom_failure(o, Window(N))
    if failure:
        return _report("wedge-structure", params, failure)
    return wedge_structure_report(o, N, params)


def _theorem_probes(o: SchurOracle, p: int, w: Window) -> Dict[str, bool]:
    """自己同型性を結論とする定理の仮定を窓内で判定する"""
    N = max(w.N, 1)
    ctx = o.ctx

    def closed(t: int, k: int) -> bool:
        g = ctx.element(t, k)
        return o.class_of(g).elements <= {g, ctx.inv(g)}

    z_subgroup = all(closed(t, 0) for t in range(1, N + 1))
    twisted = any(all(closed(t, i * t) for t in range(1, N + 1)) for i in range(p))
    symmetric_image = all(
        set(o.class_of(ctx.element(t, k)).free_exponents()) == {t, -t}
        for t in range(1, N + 1)
        for k in range(p)
    )
    near = [o.class_of(ctx.element(t, k)) for t in (1, -1) for k in range(p)]
    pair_class = any(len(C) == 2 and set(C.free_exponents()) <= {1, -1} for C in near)
    zp = all(closed(p * j, 0) for j in range(1, N + 1))
    m = len(o.class_of(ctx.element(0, 1)))
    coprime_class = any(
        all(g.t % p for g in C.elements) and gcd(len(C), m) == 1 for C in window_classes(o, w)
    )
    distinct_near = {C.min(): C for C in near}
    covered = set().union(*(C.elements for C in distinct_near.values()))
    coset = set(ctx.coset(1).elements)
    two_classes = len(distinct_near) == 2 and (
        covered == coset or covered == coset | set(ctx.coset(-1).elements)
    )
    return {
        "z-is-s-subgroup": z_subgroup,
        "twisted-z-is-s-subgroup": twisted,
        "symmetric-image-with-pair-class": symmetric_image and pair_class,
        "zp-with-prime-power-torsion": zp and len(factorint(m)) <= 1,
        "zp-with-coprime-class": zp and coprime_class,
        "zp-with-two-classes-over-z": zp and two_classes,
        "zp-over-fermat-or-safe-prime": zp and _is_fermat_or_safe(p),
    }


def _census_members(p: int, bound: int) -> List[Tuple[str, Dict[str, Any], SchurOracle]]:
    ctx = GroupContext(p)
    subgroups = enumerate_subgroups(ctx)
    members: List[Tuple[str, Dict[str, Any], SchurOracle]] = []
    # 形式 (iii): F[Z×Z_p]^H
    for H in subgroups:
        members.append(("automorphic", _subgroup_record(H), make_automorphic(H)))
    # 形式 (i): F[Z_p]^H ∧ F[Z] / F[Z]^±
    for P in enumerate_schur_rings(p):
        for outer in (DISCRETE, SYMMETRIC):
            members.append(
                (
                    "finite-lift",
                    {"classes": P.to_record()["classes"], "outer": outer},
                    make_finite_lift(P, outer),
                )
            )
    # 形式 (ii): F[H×Z_p]^H ∧ F[Z] / F[Z]^±
    for s in range(2, bound + 1):
        for H in subgroups:
            outer = DISCRETE if H.preserves_orientation() else SYMMETRIC
            params = {"s": s, "outer": outer, **_subgroup_record(H)}
            members.append(("wedge", params, make_wedge(make_automorphic(H), s, outer)))
    return members


@register("census", "every form (i)–(iii) member over Z×Z_p verifies on the window")
def check_census(
    p: Optional[int] = None, bound: Optional[int] = None, window: Optional[int] = None
) -> LabReport:
    p = CENSUS_PRIMES[0] if p is None else p
    bound = DEFAULT_FREE_BOUND if bound is None else bound
    N = DEFAULT_WINDOW if window is None else window
    params = {"p": p, "bound": bound, "window": N}
    if not isprime(p):
        raise InputError(f"census needs a prime, got {p}", p=p)
    if p > max(CENSUS_PRIMES):
        raise BudgetExceededError(
            f"p={p} exceeds the census budget {max(CENSUS_PRIMES)}", p=p
        )
    w = Window(N)
    members = _census_members(p, bound)
    witnesses: List[Dict[str, Any]] = []
    distinct: Dict[Any, Dict[str, Any]] = {}
    for family, member_params, o in members:
        label = {"family": family, **member_params}
        try:
            table = verify_on_window(o, w)
        except AxiomViolation as e:
            witnesses.append({"member": label, "axiom": e.axiom, "witness": e.witness})
            continue
        for violation in _size_lemma_on_oracle(o, table):
            witnesses.append({"member": label, "size_lemma": violation})
        frobenius = frobenius_witnesses(o, w)
        if frobenius:
            witnesses.append({"member": label, "frobenius": frobenius[0]})
        signature = window_signature(o, w)
        row = distinct.get(signature)
        if row is None:
            sizes = sorted(
                len(C) for C in {o.class_of(GroupElement(1, k)) for k in range(p)}
            )
            if frobenius is None:
                frobenius_verdict = "inapplicable"
            else:
                frobenius_verdict = "fail" if frobenius else "pass"
            row = {
                "families": [],
                "class_sizes_t1": sizes,
                "classes_in_window": len(signature),
                "frobenius": frobenius_verdict,
                "oracle": o,
                "label": label,
            }
            distinct[signature] = row
        if family not in row["families"]:
            row["families"].append(family)

    probe_counts: Dict[str, int] = {}
    for row in distinct.values():
        hypotheses = _theorem_probes(row["oracle"], p, w)
        fired = sorted(name for name, held in hypotheses.items() if held)
        for name in fired:
            probe_counts[name] = probe_counts.get(name, 0) + 1
            if "automorphic" not in row["families"]:
                witnesses.append(
                    {"member": row["label"], "probe": name, "conclusion": "automorphic"}
                )
        row["probes"] = fired

    rows = [
        {
            "member": row["label"],
            "families": sorted(row["families"]),
            "class_sizes_t1": row["class_sizes_t1"],
            "classes_in_window": row["classes_in_window"],
            "frobenius": row["frobenius"],
            "probes": row["probes"],
        }
        for row in distinct.values()
    ]
    details = {
        "members": len(members),
        "distinct": len(distinct),
        "families": {
            f: sum(1 for fam, _, _ in members if fam == f)
            for f in ("automorphic", "finite-lift", "wedge")
        },
        "probes": dict(sorted(probe_counts.items())),
        "rows": rows,
    }
    notes = [
        f"equality and hypotheses are decided on the window N={N}",
        ASSUMED_NOTE,
    ]
    logger.info("✅ census p=%d: %d members, %d distinct", p, len(members), len(distinct))
    return _report("census", params, witnesses, details, notes)


def z2_form_members() -> List[Tuple[str, SchurOracle]]:
    """Z×Z_2 上の4形式（各2種）。H = Z^(2)、ψ: z ↦ a z^{-1}, a ↦ a。"""
    ctx = GroupContext(2)
    Z2 = discrete_partition(2)
    psi_ring = make_automorphic(closure([psi(ctx)]))
    return [
        ("(i) F[Z_2]∧F[Z]", make_finite_lift(Z2, DISCRETE)),
        ("(i) F[Z_2]∧F[Z]^±", make_finite_lift(Z2, SYMMETRIC)),
        ("(ii) F[H×Z_2]∧F[Z]", make_wedge(make_discrete(ctx), 2, DISCRETE)),
        ("(ii) F[H×Z_2]^±∧F[Z]^±", make_wedge(make_symmetric(ctx), 2, SYMMETRIC)),
        ("(iii) F[H×Z_2]^<ψ>∧F[Z]^±", make_wedge(psi_ring, 2, SYMMETRIC)),
        ("(iii) F[Z×Z_2]^<ψ>", psi_ring),
        ("(iv) F[Z×Z_2]", make_discrete(ctx)),
        ("(iv) F[Z×Z_2]^±", make_symmetric(ctx)),
    ]


@register("z2-forms", "the four listed forms over Z×Z_2 verify and are pairwise distinct")
def check_z2_forms(window: Optional[int] = None, distinct_window: int = 2) -> LabReport:
    N = DEFAULT_WINDOW if window is None else window
    members = z2_form_members()
    witnesses = []
    rows = []
    for name, o in members:
        try:
            table = verify_on_window(o, Window(N))
            rows.append({"form": name, "spec": describe(o), "triples": len(table.triples)})
        except AxiomViolation as e:
            witnesses.append({"form": name, "axiom": e.axiom, "witness": e.witness})
    w = Window(distinct_window)
    for i, (name1, o1) in enumerate(members):
        for name2, o2 in members[i + 1 :]:
            if first_difference(o1, o2, w) is None:
                witnesses.append({"equal_forms": [name1, name2], "window": distinct_window})
    return _report(
        "z2-forms",
        {"window": N, "distinct_window": distinct_window},
        witnesses,
        {"rows": rows},
    )


# --- 差集合 (Difference Sets) ---


@register("safe-prime-counting", "admissible block sizes over Z_p for Fermat and safe primes")
def check_safe_prime_counting(p: Optional[int] = None) -> LabReport:
    p = 11 if p is None else p
    params = {"p": p}
    if not _is_fermat_or_safe(p):
        return _report(
            "safe-prime-counting",
            params,
            [],
            notes=[f"{p} is neither a Fermat nor a safe prime"],
            inapplicable=True,
        )
    sizes = admissible_sizes(p)
    witnesses = []
    details: Dict[str, Any] = {"admissible": sizes}
    if ((p - 1) // 2) > 1 and isprime((p - 1) // 2):
        q = (p - 1) // 2
        allowed = {0, 1, q, q + 1, 2 * q, 2 * q + 1}
        details["safe_prime_cases"] = sorted(allowed)
        if not set(sizes) <= allowed:
            witnesses.append({"unexpected_sizes": sorted(set(sizes) - allowed)})
    m = p - 1
    if m & (m - 1) == 0:
        inner = [k for k in sizes if 2 <= k <= p - 2]
        details["fermat_nontrivial_sizes"] = inner
        if inner:
            witnesses.append({"unexpected_sizes": inner})
    search = find_difference_partitions(p, NON_TRIVIAL_ONLY)
    details["search"] = search.to_record()
    if search.partitions:
        witnesses.append({"non_trivial_partitions": [dp.to_record() for dp in search.partitions]})
    return _report("safe-prime-counting", params, witnesses, details)


# --- オラクルの不変条件 (Oracle Invariants) ---


def _invariant_family(p: int) -> List[Tuple[str, SchurOracle]]:
    ctx = GroupContext(p)
    r = int(primitive_root(p)) if isprime(p) else 1
    sigma_ring = make_automorphic(closure([sigma(ctx, r)]))
    return [
        ("discrete", make_discrete(ctx)),
        ("symmetric", make_symmetric(ctx)),
        ("automorphic <sigma_r>", sigma_ring),
        ("automorphic <rho,sigma_r,*>", make_automorphic(closure([rho(ctx), sigma(ctx, r), inversion(ctx)]))),
        ("automorphic <psi>", make_automorphic(closure([psi(ctx)]))),
        ("finite-lift trivial", make_finite_lift(trivial_partition(p), DISCRETE)),
        ("finite-lift trivial ±", make_finite_lift(trivial_partition(p), SYMMETRIC)),
        ("wedge <sigma_r> s=2", make_wedge(sigma_ring, 2, DISCRETE)),
        ("rho(symmetric)", transform_oracle(rho(ctx), make_symmetric(ctx))),
    ]


def oracle_invariant_witnesses(o: SchurOracle, w: Window) -> List[Dict[str, Any]]:
    """検証済みオラクルに成り立つべき性質をまとめて確認する"""
    table = verify_on_window(o, w)
    witnesses: List[Dict[str, Any]] = []
    for violation in _size_lemma_on_oracle(o, table):
        witnesses.append({"size_lemma": violation})
    _, coprime = coprime_product_check(table, o.ctx.identity)
    witnesses.extend({"coprime_product": v} for v in coprime)

    classes = window_classes(o, w)
    for C in classes:
        sizes = set(coset_intersection_sizes(C).values())
        if len(sizes) > 1:
            witnesses.append({"coset_intersection": C.to_record(), "sizes": sorted(sizes)})
    for i, A in enumerate(classes):
        for B in classes[i:]:
            if len(A) != len(B):
                continue
            if len(tycoons(A, B)) >= 2 and (len(stabilizer(A)) < 2 or len(stabilizer(B)) < 2):
                witnesses.append({"two_tycoons": [A.to_record(), B.to_record()]})

    torsion = torsion_partition(o)
    try:
        verify_partition(torsion)
    except AxiomViolation as e:
        witnesses.append({"torsion_subring": torsion.to_record(), "axiom": e.axiom})

    witnesses.extend(_difference_layer_witnesses(o, torsion))
    return witnesses


def _difference_layer_witnesses(o: SchurOracle, torsion: FinitePartition) -> List[Dict[str, Any]]:
    """T(S) が自明で φ(S) が離散なとき、z·Z_v のクラスは差分割を与える"""
    v = o.ctx.n
    if v < 2 or torsion.blocks != trivial_partition(v).blocks:
        return []
    over_z = {o.class_of(GroupElement(1, k)) for k in range(v)}
    if any(set(C.free_exponents()) != {1} for C in over_z):
        return []
    parts = sorted((tuple(g.k for g in C.sorted_elements) for C in over_z))
    witnesses = []
    for A in parts:
        if is_difference_set(A, v) is None:
            witnesses.append({"not_a_difference_set": list(A), "v": v})
    for i, A in enumerate(parts):
        for B in parts[i + 1 :]:
            lam = cross_difference_constant(A, B, v)
            if lam is None or len(A) * len(B) != lam * (v - 1):
                witnesses.append({"cross_blocks": [list(A), list(B)], "lambda": lam})
    return witnesses


@register("oracle-invariants", "axiom (ii), lemmas, tycoons, torsion subring on family oracles")
def check_oracle_invariants(p: Optional[int] = None, window: Optional[int] = None) -> LabReport:
    p = 5 if p is None else p
    N = 4 if window is None else window
    if p < 2:
        raise InputError(f"torsion order must be at least 2, got {p}", p=p)
    w = Window(N)
    witnesses = []
    rows = []
    for name, o in _invariant_family(p):
        try:
            found = oracle_invariant_witnesses(o, w)
        except AxiomViolation as e:
            found = [{"axiom": e.axiom, "witness": e.witness}]
        witnesses.extend({"member": name, **x} for x in found)
        rows.append({"member": name, "violations": len(found)})
    return _report(
        "oracle-invariants", {"p": p, "window": N}, witnesses, {"rows": rows}, [ASSUMED_NOTE]
    )


# --- ネガティブコントロール (Negative Controls) ---


def _corruption_moves(ring: FinitePartition) -> List[Tuple[Tuple[int, ...], int, Tuple[int, ...]]]:
    n = ring.n
    return [
        (B, x, C)
        for B in ring.blocks
        if len(B) >= 2
        for x in B
        if (-x) % n != x
        for C in ring.blocks
        if C != B and C != ring.star_block(B)
    ]


def corrupt_partition(ring: FinitePartition, rng: random.Random) -> Optional[FinitePartition]:
    """
    x ≠ −x を B から B, B* 以外のブロック C（{0} も可）へ移す

    移動後は C ∪ {x} の逆が必ずブロックでなくなるか、{0} が単独でなくなります。
    """
    choices = _corruption_moves(ring)
    if not choices:
        return None
    B, x, C = rng.choice(choices)
    blocks = []
    for b in ring.blocks:
        if b == B:
            blocks.append(tuple(y for y in b if y != x))
        elif b == C:
            blocks.append(b + (x,))
        else:
            blocks.append(b)
    return FinitePartition(ring.n, tuple(blocks))


def corrupt_oracle(o: SchurOracle, window: int, rng: random.Random) -> PatchedOracle:
    """t ≠ 0 の元 g を捩れクラスへ移す（g^{-1} のクラスが逆クラスでなくなる）"""
    ctx = o.ctx
    t = rng.choice([u for u in range(-window, window + 1) if u != 0])
    g = ctx.element(t, rng.randrange(ctx.n))
    C = o.class_of(ctx.element(0, rng.randrange(ctx.n)))
    return PatchedOracle(o, [FiniteSubset(ctx, C.elements | {g})])


def fission_control(window: int = 6) -> SchurOracle:
    """z·Z_3 を剰余類でない2クラスに割った手作りの反例（wedge-structure 用）"""
    base = make_finite_lift(trivial_partition(3), DISCRETE)
    ctx = base.ctx
    z6 = ctx.element(6, 0)
    return PatchedOracle(
        base,
        [
            FiniteSubset(ctx, frozenset({z6})),
            FiniteSubset(ctx, frozenset({ctx.element(1, 1)})),
        ],
    )


@register("negative-controls", "randomly corrupted partitions and oracles are rejected with witnesses")
def check_negative_controls(
    trials: Optional[int] = None, seed: Optional[int] = None, window: Optional[int] = None
) -> LabReport:
    trials = 100 if trials is None else trials
    seed = 0 if seed is None else seed
    N = 3 if window is None else window
    if N < 1:
        raise InputError("negative controls need a window of at least 1", window=N)
    rng = random.Random(seed)
    # 破損できない環（移せる元がない）は標本から外す
    rings = {
        n: [ring for ring in enumerate_schur_rings(n) if _corruption_moves(ring)]
        for n in range(5, 10)
    }
    oracles = []
    for q in (3, 5, 7):
        ctx = GroupContext(q)
        oracles.extend(
            [
                make_discrete(ctx),
                make_symmetric(ctx),
                make_automorphic(closure([rho(ctx), sigma(ctx, int(primitive_root(q))), inversion(ctx)])),
                make_finite_lift(trivial_partition(q), DISCRETE),
            ]
        )

    witnesses = []
    by_axiom: Dict[str, int] = {}
    detected = 0
    for trial in range(trials):
        try:
            if trial % 2 == 0:
                n = rng.choice(sorted(rings))
                corrupted = corrupt_partition(rng.choice(rings[n]), rng)
                subject: Dict[str, Any] = {"kind": "partition", **corrupted.to_record()}
                verify_partition(corrupted)
            else:
                patched = corrupt_oracle(rng.choice(oracles), N, rng)
                subject = {
                    "kind": "oracle",
                    "n": patched.ctx.n,
                    "override": patched.overrides[0].to_record(),
                }
                verify_on_window(patched, Window(N))
        except AxiomViolation as e:
            detected += 1
            by_axiom[e.axiom] = by_axiom.get(e.axiom, 0) + 1
            continue
        witnesses.append({"trial": trial, "undetected": subject})

    fission = wedge_structure_report(fission_control(), 6, {"control": "fission"})
    if fission.verdict != "fail":
        witnesses.append({"undetected": "coset fission", "verdict": fission.verdict})

    details = {
        "trials": trials,
        "detected": detected,
        "by_axiom": dict(sorted(by_axiom.items())),
        "fission_control": fission.verdict,
    }
    return _report(
        "negative-controls", {"trials": trials, "seed": seed, "window": N}, witnesses, details
    )


# --- 実行器 (Job Runner) ---


def list_checks() -> List[Dict[str, str]]:
    return [
        {"name": name, "description": CHECKS[name].description} for name in sorted(CHECKS)
    ]


def run_check(name: str, params: Optional[Dict[str, Any]] = None) -> LabReport:
    """名前で検査を1つ実行する（None のパラメータは既定値に任せる）"""
    check = CHECKS.get(name)
    if check is None:
        raise InputError(
            f"unknown check {name!r}", check=name, available=sorted(CHECKS)
        )
    kwargs = {k: v for k, v in (params or {}).items() if v is not None}
    started = time.perf_counter()
    report = check.func(**kwargs)
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info("⏱️ %s: %s in %.1f ms", name, report.verdict, report.elapsed_ms)
    return report


async def run_checks(
    requests: Sequence[Tuple[str, Dict[str, Any]]], workers: int = DEFAULT_JOBS
) -> List[LabReport]:
    """
    検査を並行実行し、検査名の順に並べて返す

    workers > 1 ならプロセスプールで実行します。
    """
    loop = asyncio.get_running_loop()
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        jobs = [loop.run_in_executor(executor, run_check, name, params) for name, params in requests]
        reports = await asyncio.gather(*jobs)
    finally:
        if executor is not None:
            executor.shutdown()
    return sorted(reports, key=lambda r: r.check)


def default_requests() -> List[Tuple[str, Dict[str, Any]]]:
    """lab --all の既定パラメータ"""
    return [
        ("automorphism-order", {}),
        ("census", {"p": 3, "bound": 3, "window": 4}),
        ("coprime-product", {}),
        ("enumeration", {}),
        ("frobenius-primitivity", {"window": 5}),
        ("negative-controls", {}),
        ("oracle-invariants", {}),
        ("safe-prime-counting", {"p": 11}),
        ("size-lemma", {}),
        ("wedge-structure", {"window": 5}),
        ("z2-forms", {}),
    ]
