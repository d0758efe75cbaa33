import pytest

from ffgroup import config, verify
from ffgroup.errors import NonPrimeCharacteristic, ScanTooLarge
from ffgroup.gf import field_for_order
from ffgroup.matgf import companion, parse_matrices
from ffgroup.permgrp import gl_order, group_order, matrix_to_perm
from ffgroup.poly import Poly, enumerate_nonzero_const, enumerate_primitive
from ffgroup.verify import (
    Report,
    kantor_scan,
    main_case_count,
    verify_degos,
    verify_fixed_point_lemma,
    verify_main_theorem,
    verify_singer_lemma,
    verify_two_companion,
    verify_unique_extension,
)


def strip_elapsed(report: Report) -> dict:
    d = report.to_dict("x")
    d.pop("elapsed_ms")
    return d


def test_main_examples():
    r = verify_main_theorem(2, 2)
    assert (r.cases_total, r.cases_checked, r.failures, r.passed) == (1, 1, [], True)
    r = verify_main_theorem(2, 3)
    assert (r.cases_total, r.failures) == (6, [])
    r = verify_main_theorem(3, 2)
    assert r.cases_total == 10 == r.cases_checked


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 2), (2, 5), (5, 2)])
def test_main_case_count_identity(q, n):
    r = verify_main_theorem(q, n)
    assert r.cases_total == r.cases_checked == main_case_count(q, n)
    assert r.cases_total == len(enumerate_primitive(field_for_order(q), n)) * ((q - 1) * q ** (n - 1) - 1)


def test_n2_failures_are_exactly_the_semilinear_pairs():
    """Every n = 2 failure is g = X^2 - f(0), generating a group of order 2(q^2 - 1)."""
    for q in (3, 4, 5, 7, 8, 9):
        F = field_for_order(q)
        report = verify_main_theorem(q, 2)
        prims = enumerate_primitive(F, 2)
        expected = {(f.to_text(), Poly(F, [F.neg(f.constant), 0, 1]).to_text()) for f in prims}
        assert {(x.f, x.g) for x in report.failures} == expected
        assert all(x.observed == str(2 * (q * q - 1)) for x in report.failures)
        assert all(x.expected == str(gl_order(2, q)) for x in report.failures)


def test_failure_witness_replays():
    report = verify_main_theorem(3, 2)
    F = field_for_order(3)
    for x in report.failures:
        mats = parse_matrices(F, x.witness, 2)
        assert str(group_order([matrix_to_perm(m) for m in mats])) == x.observed


def test_n3_has_no_failures_at_small_q():
    for q in (2, 3, 4):
        assert verify_main_theorem(q, 3).failures == []


def test_degos_examples():
    r = verify_degos(2, 3)
    assert (r.cases_total, r.failures, r.params["g"]) == (2, [], "1,0,0,1")
    r = verify_degos(3, 2)
    assert (r.cases_total, r.failures, r.params["g"]) == (2, [], "2,0,1")
    r = verify_degos(2, 2)
    assert (r.cases_total, r.failures) == (1, [])
    with pytest.raises(NonPrimeCharacteristic):
        verify_degos(4, 2)


def test_degos_n1_excludes_f_equal_g():
    r = verify_degos(2, 1)
    assert r.params["excluded_f_equals_g"] == 1 and r.cases_total == 0 and r.passed
    r = verify_degos(5, 1)
    assert r.params["excluded_f_equals_g"] == 0 and r.cases_total == 2


def test_singer_lemma_examples():
    r = verify_singer_lemma(2, 2)
    assert (r.cases_total, r.failures, r.params["singer_count"]) == (2, [], 1)
    r = verify_singer_lemma(3, 2)
    assert (r.cases_total, r.failures, r.params["singer_count"]) == (6, [], 2)
    r = verify_singer_lemma(2, 4)
    assert (r.cases_total, r.failures, r.params["singer_count"]) == (8, [], 2)


def test_fixed_point_examples():
    r = verify_fixed_point_lemma(2, 1, 2)
    assert (r.cases_total, r.params["max_fixed"], r.params["bound"], r.failures) == (5, 2, 2, [])
    r = verify_fixed_point_lemma(2, 1, 3)
    assert (r.cases_total, r.params["max_fixed"], r.params["bound"], r.failures) == (20, 2, 4, [])
    r = verify_fixed_point_lemma(2, 2, 2)
    assert (r.cases_total, r.params["max_fixed"], r.params["bound"], r.failures) == (359, 4, 4, [])


def test_fixed_point_bound_breaks_when_dimension_exceeds_degree():
    r = verify_fixed_point_lemma(2, 2, 1)
    assert r.failures and r.params["max_fixed"] == 2


def test_two_companion_examples():
    r = verify_two_companion(2, 3)
    assert r.failures == [] and r.params["check_ii"] == "exclusion-by-order"
    r = verify_two_companion(2, 2)
    assert r.failures == [] and "check_ii_skipped" in r.params and r.params["min_fixed"] == 2
    r = verify_two_companion(3, 2)
    # the two semilinear pairs have order 16 = |GammaL_1(9)|, so check (ii) flags them
    assert [(x.observed, x.expected) for x in r.failures] == [("16", "16"), ("16", "16")]
    assert r.params["min_fixed"] == 3


def test_cross_harness_consistency():
    for q, n in [(2, 3), (2, 4), (3, 2), (4, 2), (3, 3)]:
        main = verify_main_theorem(q, n)
        two = verify_two_companion(q, n)
        failed_main = {(x.f, x.g) for x in main.failures}
        failed_ii = {(x.f, x.g) for x in two.failures}
        assert failed_ii <= failed_main


def test_unique_extension_examples():
    for q, n, d in [(2, 2, 2), (3, 2, 2)]:
        r = verify_unique_extension(q, n, d)
        assert r.params["containing_conjugates"] == 1 and r.passed
        assert r.cases_total == r.cases_checked == gl_order(n, q)
    with pytest.raises(ValueError):
        verify_unique_extension(2, 3, 2)
    with pytest.raises(ScanTooLarge):
        verify_unique_extension(2, 6, 2)


def test_kantor_examples():
    r = kantor_scan(2, 2)
    assert r.passed and r.params["orders_observed"] == "3 6"
    r = kantor_scan(3, 2)
    assert r.passed and r.params["orders_observed"] == "8 16 48"
    r = kantor_scan(2, 3)
    assert r.passed and r.params["orders_observed"] == "7 21 168"
    assert r.cases_checked == 168
    with pytest.raises(ScanTooLarge):
        kantor_scan(2, 5)


def test_kantor_double_cosets_match_plain_scan():
    from ffgroup.fieldext import singer_generator
    from ffgroup.permgrp import enumerate_gl, singer_group_order

    F = field_for_order(3)
    _, s = singer_generator(F, 2)
    plain = {singer_group_order([s, x]) for x in enumerate_gl(F, 2)}
    assert " ".join(map(str, sorted(plain))) == kantor_scan(3, 2).params["orders_observed"]


def test_budget_hit_is_recorded():
    r = verify_main_theorem(2, 13)
    assert r.budget_hit and not r.passed and r.cases_checked == 0
    assert r.cases_total == main_case_count(2, 13)
    config.set_budgets(points=4)
    r = verify_singer_lemma(2, 3)
    assert r.budget_hit and r.params["budget_points"] == 4


def test_report_serialization():
    d = verify_main_theorem(3, 2).to_dict("0.1.0")
    assert list(d) == ["harness", "params", "cases_total", "cases_checked", "failures", "elapsed_ms", "budget_hit", "tool_version"]
    assert all(isinstance(d[k], str) for k in ("cases_total", "cases_checked", "elapsed_ms"))
    assert all(isinstance(v, str) for v in d["params"].values())
    assert list(d["failures"][0]) == ["f", "g", "witness", "observed", "expected"]
    assert d["budget_hit"] is False


def test_workers_do_not_change_reports():
    verify._pair_orders.clear()
    serial = strip_elapsed(verify_main_theorem(4, 2, workers=1))
    verify._pair_orders.clear()
    parallel = strip_elapsed(verify_main_theorem(4, 2, workers=3))
    assert serial == parallel
    verify._pair_orders.clear()
    assert strip_elapsed(verify_two_companion(3, 3, workers=2)) == strip_elapsed(verify_two_companion(3, 3))


def test_reports_are_deterministic():
    a = strip_elapsed(kantor_scan(2, 3))
    b = strip_elapsed(kantor_scan(2, 3))
    assert a == b
