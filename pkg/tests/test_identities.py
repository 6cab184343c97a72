import numpy as np
import pytest

from dcomp.identities import (
    cluster,
    draw_params,
    f_value,
    format_table,
    run_checks,
    summarize,
    verify_family_suite,
    verify_lemma5,
    verify_theorem2,
    verify_theorem3,
)
from dcomp.multipliers import EXPLICIT_J4, RECURSIVE
from dcomp.states import StateParams


def test_explicit_j_suite_passes():
    reports = verify_family_suite(4, 4, seed=0, families=("J",))
    assert reports
    assert all(r.passed for r in reports)
    names = {r.name for r in reports}
    assert names == {"theorem2", "theorem3", "lemma3", "lemma4", "lemma5", "lemma6"}


def test_lemmas_at_k5():
    reports = verify_family_suite(5, 1, seed=1, families=("J",), k_min=5)
    assert {r.name for r in reports} == {"lemma3", "lemma4", "lemma5", "lemma6"}
    assert all(r.passed for r in reports)


def test_recursive_variant_fails_from_k2():
    p = draw_params("J", RECURSIVE, 2, 1, seed=0)[0]
    rep = verify_theorem3(p)
    assert not rep.passed
    assert rep.detail.get("structure_mismatch")
    assert len(rep.detail["AA+"]) == 4  # four distinct eigenvalues, not two
    assert not verify_theorem2(p).passed


def test_recursive_variant_k1_theorems_hold():
    p = draw_params("J", RECURSIVE, 1, 1, seed=0)[0]
    assert verify_theorem2(p).passed and verify_theorem3(p).passed


def test_i_family_theorems():
    reports = verify_family_suite(4, 3, seed=2, families=("I",), names=["theorem2", "theorem3"])
    assert all(r.passed for r in reports)
    assert {r.j_variant for r in reports} == {"n/a"}


def test_i_family_product_identity_probe():
    # the I multiplier does not satisfy the J-style product identity at k = 2
    p = draw_params("I", EXPLICIT_J4, 2, 1, seed=3)[0]
    (rep,) = run_checks(p, ["lemma3"])
    assert not rep.passed


def test_theorem3_multiplicities():
    p = draw_params("J", EXPLICIT_J4, 3, 1, seed=4)[0]
    rep = verify_theorem3(p)
    assert rep.passed
    assert [m for _, m in rep.detail["AA+"]] == [8, 8]
    assert [m for _, m in rep.detail["A+A"]] == [8, 8]


def test_theorem3_single_cluster_when_bracket_saturates():
    # |[A]| = ||A|| / 2 makes both roots equal
    p = StateParams(0.5, 0, 0.5, ((0, 0),))
    rep = verify_theorem3(p)
    assert rep.passed
    assert rep.detail["expected_multiplicities"] == [4]


def test_theorem2_uses_numpy_independent_check():
    p = draw_params("J", EXPLICIT_J4, 2, 1, seed=5)[0]
    rep = verify_theorem2(p)
    from dcomp.states import build_matrix

    A = build_matrix(p)
    assert np.isclose(rep.detail["det"], np.linalg.det(A @ A.conj().T), rtol=1e-10)


def test_f_value_and_lemma5():
    p = draw_params("J", EXPLICIT_J4, 3, 1, seed=6)[0]
    assert verify_lemma5(p).passed
    with pytest.raises(ValueError):
        f_value(p.truncated(1))
    with pytest.raises(ValueError):
        verify_lemma5(p.truncated(1))


def test_run_checks_skips_large_determinants():
    p = draw_params("J", EXPLICIT_J4, 5, 1, seed=7)[0]
    names = [r.name for r in run_checks(p)]
    assert "theorem2" not in names and "lemma3" in names


def test_draws_are_deterministic_and_independent_of_order():
    a = verify_family_suite(2, 2, seed=9, families=("J", "I"))
    b = verify_family_suite(2, 2, seed=9, families=("I", "J"))
    key = lambda r: (r.family, r.name, r.k)  # noqa: E731
    assert sorted((key(r), r.residual) for r in a) == sorted((key(r), r.residual) for r in b)


def test_summary_table():
    rows = summarize(verify_family_suite(2, 2, seed=0, families=("J",), j_variants=(RECURSIVE,)))
    table = format_table(rows)
    assert "FAIL" in table and "pass" in table
    failing = {(r.name, r.k) for r in rows if not r.passed}
    assert ("theorem3", 2) in failing
    assert all(r.gated for r in rows)


def test_cluster():
    assert cluster([3.0, 3.0 - 1e-12, 1.0], 1e-8) == [(pytest.approx(3.0), 2), (1.0, 1)]


def test_k_max_limit():
    with pytest.raises(ValueError):
        verify_family_suite(6, 1, seed=0)
