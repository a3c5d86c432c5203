"""
定理ラボテスト

登録された各検査が軽いパラメータで pass し、反例や仮定不成立を正しく報告するかを検証します。
"""

import random

import pytest

from schurlab.errors import AxiomViolation, BudgetExceededError, InputError
from schurlab.finite_cyclic import discrete_partition, enumerate_schur_rings, is_schur_partition
from schurlab.lab import (
    CHECKS,
    corrupt_partition,
    default_requests,
    fission_control,
    list_checks,
    run_check,
    run_checks,
    wedge_structure_report,
    z2_form_members,
)
from schurlab.oracles import PatchedOracle
from tests.conftest import assert_axiom_violation, assert_report_verdict

EXPECTED_CHECKS = [
    "automorphism-order",
    "census",
    "coprime-product",
    "enumeration",
    "frobenius-primitivity",
    "negative-controls",
    "oracle-invariants",
    "safe-prime-counting",
    "size-lemma",
    "wedge-structure",
    "z2-forms",
]


class TestRegistry:
    """検査の登録と名前による実行"""

    @pytest.mark.smoke
    def test_all_checks_registered(self):
        assert [c["name"] for c in list_checks()] == EXPECTED_CHECKS
        assert all(c["description"] for c in list_checks())

    def test_default_requests_cover_registry(self):
        assert sorted(name for name, _ in default_requests()) == EXPECTED_CHECKS

    def test_unknown_check(self):
        with pytest.raises(InputError) as exc_info:
            run_check("no-such-check")
        assert exc_info.value.detail["available"] == sorted(CHECKS)

    def test_none_parameters_use_defaults(self):
        report = run_check("automorphism-order", {"p": None})
        assert report.parameters == {"p": None}
        assert len(report.details["rows"]) == 4

    def test_elapsed_not_serialized(self):
        report = run_check("automorphism-order", {"p": 3})
        assert "elapsed_ms" not in report.model_dump()


class TestFiniteLemmas:
    """有限巡回群上の補題"""

    @pytest.mark.smoke
    def test_size_lemma(self):
        report = run_check("size-lemma", {"n": 6})
        assert_report_verdict(report)
        assert report.details["rows"][0]["rings"] == 7

    def test_coprime_product(self):
        assert_report_verdict(run_check("coprime-product", {"n": 6}))

    def test_coprime_product_vacuous_rings_noted(self):
        report = run_check("coprime-product", {"n": 4})
        assert_report_verdict(report)
        assert report.details["vacuous"]
        assert any("vacuous" in note for note in report.notes)

    def test_enumeration_prime_row(self):
        report = run_check("enumeration", {"n": 7})
        assert_report_verdict(report)
        row = report.details["rows"][0]
        assert row["rings"] == 4
        assert row["divisors_of_n_minus_1"] == 4
        assert set(row["kinds"]) <= {"trivial", "automorphic"}

    @pytest.mark.regression
    def test_full_sweep(self):
        assert_report_verdict(run_check("size-lemma"))
        assert_report_verdict(run_check("enumeration"))

    def test_lab_budget(self):
        with pytest.raises(BudgetExceededError):
            run_check("size-lemma", {"n": 11})
        with pytest.raises(InputError):
            run_check("size-lemma", {"n": 1})


class TestAutomorphismOrder:
    @pytest.mark.smoke
    def test_census_primes(self):
        report = run_check("automorphism-order")
        assert_report_verdict(report)
        assert [row["order"] for row in report.details["rows"]] == [12, 40, 84, 220]

    def test_not_prime(self):
        with pytest.raises(InputError):
            run_check("automorphism-order", {"p": 9})


class TestOracleTheorems:
    """フロベニウス原始性とウェッジ構造"""

    def test_frobenius_on_full_affine(self):
        report = run_check("frobenius-primitivity", {"window": 3})
        assert_report_verdict(report)
        assert report.parameters["spec"]["family"] == "automorphic"

    def test_frobenius_inapplicable_for_finite_lift(self):
        spec = {"n": 3, "family": "finite-lift", "classes": [[0], [1, 2]]}
        report = run_check("frobenius-primitivity", {"spec": spec, "window": 3})
        assert_report_verdict(report, "inapplicable")
        assert report.notes

    def test_frobenius_invalid_spec(self):
        with pytest.raises(InputError):
            run_check("frobenius-primitivity", {"spec": {"n": 3, "family": "nope"}})

    def test_wedge_structure_default(self):
        report = run_check("wedge-structure", {"window": 4})
        assert_report_verdict(report)
        assert report.details["s"] is None
        assert report.details["classes_checked"] > 0
        assert not any("classes_checked: 0" in note for note in report.notes)

    def test_wedge_structure_nothing_outside(self):
        """H = Z^(n) なら K = Z で、外側のクラスがないことを notes に残す"""
        spec = {"n": 3, "family": "automorphic", "generators": [{"eps": 1, "m": 1, "i": 1}]}
        report = run_check("wedge-structure", {"spec": spec, "window": 4})
        assert_report_verdict(report)
        assert report.details["s"] == 3
        assert report.details["K_index"] == 1
        assert report.details["classes_checked"] == 0
        assert any("classes_checked: 0" in note for note in report.notes)

    def test_wedge_structure_catches_fission(self):
        report = wedge_structure_report(fission_control(), 6, {"control": "fission"})
        assert_report_verdict(report, "fail")
        assert {"class": [[1, 1]], "stabilizer": [[0, 0]], "s_subgroup": True} in report.witnesses

    def test_broken_spec_rejected(self):
        # {0} が単独ブロックでない分割は持ち上げる前に公理 (i) で落ちる
        spec = {"n": 3, "family": "finite-lift", "classes": [[0, 1, 2]]}
        with pytest.raises(AxiomViolation) as exc_info:
            run_check("wedge-structure", {"spec": spec, "window": 2})
        assert_axiom_violation(exc_info, "i")


class TestCensus:
    """Z×Z_p 上の形式 (i)–(iii) の網羅"""

    @pytest.mark.regression
    def test_census_p3(self):
        report = run_check("census", {"p": 3, "bound": 3, "window": 4})
        assert_report_verdict(report)
        details = report.details
        assert details["families"]["automorphic"] == 16
        assert details["families"]["finite-lift"] == 4
        assert details["families"]["wedge"] == 32
        assert 0 < details["distinct"] <= details["members"]
        assert "z-is-s-subgroup" in details["probes"]

    @pytest.mark.slow
    @pytest.mark.parametrize("p", [5, 7])
    def test_census_default_bounds(self, p):
        """自由指数 ≤ 4、N = 6 で全メンバーが検証を通ること"""
        report = run_check("census", {"p": p})
        assert_report_verdict(report)
        assert report.parameters == {"p": p, "bound": 4, "window": 6}

    @pytest.mark.slow
    def test_census_p11(self):
        """p = 11、自由指数 ≤ 4、N = 6"""
        report = run_check("census", {"p": 11, "bound": 4, "window": 6})
        assert_report_verdict(report)
        assert report.details["members"] == 408
        assert report.details["distinct"] == 368

    def test_census_rejects_composite_and_large(self):
        with pytest.raises(InputError):
            run_check("census", {"p": 4})
        with pytest.raises(BudgetExceededError):
            run_check("census", {"p": 13})


class TestZ2Forms:
    def test_eight_members(self):
        assert len(z2_form_members()) == 8

    @pytest.mark.regression
    def test_forms_verify_and_differ(self):
        report = run_check("z2-forms", {"window": 4})
        assert_report_verdict(report)
        assert len(report.details["rows"]) == 8


class TestDifferenceSetChecks:
    @pytest.mark.parametrize("p", [5, 7, 11, 17, 23])
    def test_safe_and_fermat_primes(self, p):
        report = run_check("safe-prime-counting", {"p": p})
        assert_report_verdict(report)
        assert report.details["search"]["partitions"] == []

    def test_safe_prime_sizes(self):
        report = run_check("safe-prime-counting", {"p": 11})
        assert report.details["safe_prime_cases"] == [0, 1, 5, 6, 10, 11]
        assert report.details["admissible"] == [0, 1, 5, 6, 10, 11]

    def test_other_primes_inapplicable(self):
        assert_report_verdict(run_check("safe-prime-counting", {"p": 13}), "inapplicable")


class TestInvariants:
    def test_oracle_invariants(self):
        report = run_check("oracle-invariants", {"p": 3, "window": 3})
        assert_report_verdict(report)
        assert len(report.details["rows"]) == 9


class TestNegativeControls:
    """破損させた入力が必ず反例付きで拒否されること"""

    @pytest.mark.regression
    def test_corruptions_detected(self):
        report = run_check("negative-controls", {"trials": 100, "seed": 0})
        assert_report_verdict(report)
        assert report.details["fission_control"] == "fail"
        assert report.details["trials"] == 100
        assert report.details["detected"] == 100
        assert set(report.details["by_axiom"]) <= {"i", "ii", "iii"}

    def test_corrupt_partition_breaks_schur_property(self, rng):
        for ring in enumerate_schur_rings(8):
            corrupted = corrupt_partition(ring, rng)
            if corrupted is not None:
                assert not is_schur_partition(corrupted)

    def test_discrete_ring_cannot_be_corrupted(self):
        assert corrupt_partition(discrete_partition(5), random.Random(0)) is None

    def test_fission_control_overrides(self):
        o = fission_control()
        assert isinstance(o, PatchedOracle)
        assert len(o.overrides) == 2
        assert o.base.family == "finite-lift"


@pytest.mark.integration
class TestRunner:
    """非同期の一括実行"""

    async def test_run_checks_sorted_by_name(self):
        requests = [
            ("size-lemma", {"n": 5}),
            ("automorphism-order", {"p": 3}),
            ("coprime-product", {"n": 5}),
        ]
        reports = await run_checks(requests, workers=1)
        assert [r.check for r in reports] == [
            "automorphism-order",
            "coprime-product",
            "size-lemma",
        ]
        for report in reports:
            assert_report_verdict(report)
