"""
有限巡回群 Z_n 上の Schur 環テスト

分割の検証（公理 (i)–(iii)）、基本構成、ウェッジ積、2つの列挙器と伝統的形式の分類を検証します。
"""

import pytest
from sympy import divisor_count

from schurlab.errors import (
    AxiomViolation,
    BudgetExceededError,
    InputError,
    PartitionStructureError,
    WedgeCompatibilityError,
)
from schurlab.finite_cyclic import (
    FinitePartition,
    automorphic_partition,
    classify_traditional,
    direct_product_partition,
    discrete_partition,
    enumerate_by_refinement,
    enumerate_schur_rings,
    identity_block_witness,
    is_schur_partition,
    quotient_partition,
    reconstruct,
    restrict_partition,
    schur_closure,
    trivial_partition,
    unit_subgroup,
    verify_partition,
    wedge_partition,
)
from tests.conftest import assert_axiom_violation


def blocks(p):
    return [list(b) for b in p.blocks]


class TestFinitePartition:
    """分割の構造検査と正規化"""

    def test_canonical_order(self):
        p = FinitePartition.from_classes(4, [[3, 1], [2], [0]])
        assert p.blocks == ((0,), (1, 3), (2,))
        assert p.block_of(7) == (1, 3)
        assert p.star_block((1,)) == (3,)

    @pytest.mark.parametrize(
        "n,classes",
        [
            (4, [[0], [1, 2], [2, 3]]),  # 重複
            (4, [[0], [1, 2]]),  # 3 が欠けている
            (4, [[0], [1, 2, 3, 4]]),  # 範囲外
            (4, [[0], [], [1, 2, 3]]),  # 空ブロック
            (4, [[0], [1, 1, 2, 3]]),  # ブロック内の重複
            (0, [[0]]),
        ],
    )
    def test_malformed_partitions_rejected(self, n, classes):
        with pytest.raises(PartitionStructureError):
            FinitePartition.from_classes(n, classes)

    def test_identity_block_witness(self):
        assert identity_block_witness(4, [[0], [1, 2, 3]]) is None
        assert identity_block_witness(4, [[0, 2], [1, 3]])["block"] == [0, 2]
        assert identity_block_witness(4, [[1, 2, 3]])["block"] is None


class TestVerifyPartition:
    """公理 (i)–(iii) と λ 表"""

    @pytest.mark.smoke
    def test_trivial_z4_structure_constants(self):
        table = verify_partition(trivial_partition(4))
        assert table.lam(1, 1, 0) == 3
        assert table.lam(1, 1, 1) == 2
        assert table.lam(0, 1, 1) == 1
        assert table.size(1) == 3

    def test_trivial_z7_structure_constants(self):
        table = verify_partition(trivial_partition(7))
        assert table.lam(1, 1, 1) == 5
        assert table.size(1) == 6
        assert table.lam(1, 1, 0) == 6

    def test_identity_not_a_block(self):
        with pytest.raises(AxiomViolation) as exc_info:
            verify_partition(FinitePartition.from_classes(4, [[0, 2], [1, 3]]))
        assert_axiom_violation(exc_info, "i")

    def test_inverse_closure_broken(self):
        with pytest.raises(AxiomViolation) as exc_info:
            verify_partition(FinitePartition.from_classes(5, [[0], [1], [2, 3, 4]]))
        assert_axiom_violation(exc_info, "ii")
        assert exc_info.value.witness["star"] == [4]

    def test_product_not_constant(self):
        with pytest.raises(AxiomViolation) as exc_info:
            verify_partition(FinitePartition.from_classes(7, [[0], [1, 6], [2, 3, 4, 5]]))
        assert_axiom_violation(exc_info, "iii")
        witness = exc_info.value.witness
        assert witness["C"] == [1, 6] and witness["D"] == [1, 6]
        assert witness["coefficients"] == [1, 0]

    def test_size_lemma_holds_on_table(self):
        from schurlab.structure import size_lemma_violations

        for p in enumerate_schur_rings(8):
            assert size_lemma_violations(verify_partition(p)) == []


class TestConstructions:
    """自明・離散・自己同型・直積・商・制限"""

    def test_trivial_and_discrete(self):
        assert blocks(trivial_partition(1)) == [[0]]
        assert blocks(trivial_partition(3)) == [[0], [1, 2]]
        assert len(discrete_partition(5)) == 5
        assert is_schur_partition(discrete_partition(6))

    def test_automorphic_partition(self):
        assert blocks(automorphic_partition(7, [2])) == [[0], [1, 2, 4], [3, 5, 6]]
        assert unit_subgroup(7, [2]) == (1, 2, 4)
        with pytest.raises(InputError):
            automorphic_partition(8, [2])

    def test_direct_product_partition(self):
        p = direct_product_partition(discrete_partition(2), trivial_partition(3))
        assert blocks(p) == [[0], [1, 5], [2, 4], [3]]
        with pytest.raises(InputError):
            direct_product_partition(trivial_partition(2), trivial_partition(4))

    def test_quotient_and_restriction(self):
        p = FinitePartition.from_classes(4, [[0], [2], [1, 3]])
        assert blocks(quotient_partition(p, 2)) == [[0], [1]]
        assert blocks(restrict_partition(p, 2)) == [[0], [1]]
        with pytest.raises(WedgeCompatibilityError):
            quotient_partition(trivial_partition(4), 2)

    def test_schur_closure(self):
        assert schur_closure(5, [[0], [1], [2, 3, 4]]) == discrete_partition(5)
        assert schur_closure(6, [[0], range(1, 6)]) == trivial_partition(6)


class TestWedgePartition:
    """ウェッジ積の構成と整合条件"""

    @pytest.mark.smoke
    def test_z4_wedge(self):
        p = wedge_partition(discrete_partition(2), trivial_partition(2), 2, 2)
        assert blocks(p) == [[0], [1, 3], [2]]

    def test_z9_wedge(self):
        p = wedge_partition(trivial_partition(3), trivial_partition(3), 3, 3)
        assert blocks(p) == [[0], [1, 2, 4, 5, 7, 8], [3, 6]]

    def test_quotient_must_contain_h_over_k(self):
        with pytest.raises(WedgeCompatibilityError):
            wedge_partition(discrete_partition(4), trivial_partition(4), 2, 4)

    def test_chain_must_be_proper(self):
        with pytest.raises(WedgeCompatibilityError):
            wedge_partition(trivial_partition(2), trivial_partition(4), 1, 2)
        with pytest.raises(WedgeCompatibilityError):
            wedge_partition(trivial_partition(3), trivial_partition(2), 3, 2)

    def test_k_must_be_inner_s_subgroup(self):
        # Z_4 の自明環では {0, 2} が S-部分群でない
        with pytest.raises(WedgeCompatibilityError):
            wedge_partition(trivial_partition(4), trivial_partition(4), 2, 4)


class TestEnumeration:
    """総当たり列挙と細分化列挙"""

    @pytest.mark.smoke
    @pytest.mark.parametrize("n,count", [(2, 1), (3, 2), (4, 3), (5, 3), (6, 7), (7, 4)])
    def test_counts(self, n, count):
        assert len(enumerate_schur_rings(n)) == count

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
    def test_prime_counts_match_divisors(self, p):
        rings = enumerate_schur_rings(p)
        assert len(rings) == divisor_count(p - 1)
        assert all(classify_traditional(r).kind in ("trivial", "automorphic") for r in rings)

    def test_canonical_order(self):
        rings = enumerate_schur_rings(6)
        assert rings[0] == discrete_partition(6)
        assert rings[-1] == trivial_partition(6)

    def test_multiplier_pruning_is_exact(self):
        for n in range(2, 9):
            assert enumerate_schur_rings(n) == enumerate_schur_rings(n, use_multipliers=False)

    @pytest.mark.regression
    def test_enumerators_agree(self):
        for n in range(2, 11):
            assert enumerate_schur_rings(n) == enumerate_by_refinement(n)

    def test_budgets(self):
        with pytest.raises(BudgetExceededError):
            enumerate_schur_rings(13)
        with pytest.raises(BudgetExceededError):
            enumerate_by_refinement(11)
        with pytest.raises(InputError):
            enumerate_schur_rings(1)


class TestClassification:
    """伝統的形式の分類と再構成"""

    def test_symmetric_z8_is_automorphic(self):
        tag = classify_traditional(automorphic_partition(8, [7]))
        assert tag.kind == "automorphic"
        assert tag.witness["generators"] == [7]
        assert tag.witness["subgroup"] == [1, 7]

    def test_discrete_is_automorphic(self):
        tag = classify_traditional(discrete_partition(5))
        assert tag.kind == "automorphic"
        assert tag.witness["generators"] == []
        assert reconstruct(tag, 5) == discrete_partition(5)

    def test_z6_wedge(self):
        p = FinitePartition.from_classes(6, [[0], [3], [1, 2, 4, 5]])
        tag = classify_traditional(p)
        assert tag.kind == "wedge"
        assert tag.witness["k_order"] == 2
        assert tag.witness["quotient"] == [[0], [1, 2]]
        assert reconstruct(tag, 6) == p

    def test_trivial(self):
        assert classify_traditional(trivial_partition(9)).kind == "trivial"

    @pytest.mark.regression
    def test_every_ring_is_traditional(self):
        for n in range(2, 11):
            for ring in enumerate_schur_rings(n):
                tag = classify_traditional(ring)
                assert tag.kind != "non-traditional", ring
                assert reconstruct(tag, n) == ring
