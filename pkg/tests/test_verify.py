"""The verification surface: reports, determinism, monotonicity, self-tests."""
from __future__ import annotations

import json
import random

import pytest

from lgcy.catalog import cubic, quartic, quintic, sextic
from lgcy.cohseries import Orders
from lgcy.genfun import h_factorization, i_function_x, untwisted_j_oracle
from lgcy.transforms import u_bar
from lgcy.verify import (
    ALL_CHECKS,
    check_continuation,
    check_fjrw_pipeline,
    check_gamma_factorization,
    check_kernel_compatibility,
    check_mlk_operator,
    check_mlk_untwisted,
    check_oracle_equivalence,
    check_rctc_conditions,
    check_residue_lemma,
    recommended_orders,
    run_checks,
)

SMALL = Orders(t_order=4, lam_order=3)


@pytest.mark.parametrize("pair", [quintic(), sextic()], ids=lambda p: p.name)
def test_all_checks_pass_at_small_orders(pair):
    # T = 5 is the smallest order at which the quintic's kernel check has a
    # survivor to test (sector e is first reached at k0 = d)
    orders = recommended_orders(pair, 5, 3)
    reports = run_checks(pair, ALL_CHECKS, orders)
    assert [r.check for r in reports]
    for report in reports:
        assert report.ok(), (report.check, report.witness)
        assert report.pair == pair.name


def test_kernel_check_reports_vacuous_truncation():
    # below the first productive order the check refuses to pass
    report = check_kernel_compatibility(quintic(), Orders(t_order=4, lam_order=3))
    assert not report.ok() and report.witness["kind"] == "vacuous"


def test_report_schema():
    q = quintic()
    report = check_residue_lemma(q)
    data = report.to_dict()
    assert set(data) == {"check", "pair", "orders", "status", "elapsedMs"}
    assert set(data["orders"]) == {"T", "lambda", "zWindow"}
    json.dumps(data)
    failing = check_residue_lemma(q, _tamper=True)
    assert "witness" in failing.to_dict()


def test_reports_are_deterministic():
    q = quintic()
    orders = recommended_orders(q, 4, 2)
    first = check_continuation(q, orders)
    second = check_continuation(q, orders)
    a, b = first.to_dict(), second.to_dict()
    a.pop("elapsedMs"), b.pop("elapsedMs")
    assert a == b


def test_failing_reports_reproducible_bit_for_bit():
    q = quintic()
    orders = recommended_orders(q, 4, 2)
    _, hx = h_factorization(q, i_function_x(q, orders), "x")
    pushed = u_bar(q, orders.lam_order).apply(hx)
    key = sorted(pushed.terms)[0]
    runs = []
    for _ in range(2):
        report = check_continuation(q, orders, _tamper=key).to_dict()
        report.pop("elapsedMs")
        runs.append(json.dumps(report, sort_keys=True))
    assert runs[0] == runs[1]


def test_monotonicity_in_truncation_order():
    """A pass at (T, L) restricts to a pass at any smaller orders."""
    q = quintic()
    big = recommended_orders(q, 6, 3)
    small = Orders(t_order=4, lam_order=2, z_max=big.z_window[1])
    _, hx_big = h_factorization(q, i_function_x(q, big), "x")
    lhs_big = u_bar(q, big.lam_order).apply(hx_big)
    _, hx_small = h_factorization(q, i_function_x(q, small), "x")
    lhs_small = u_bar(q, small.lam_order).apply(hx_small)
    assert lhs_big.restricted(small).compare(lhs_small) is None


def test_witness_carries_failing_key():
    q = quintic()
    orders = recommended_orders(q, 4, 2)
    _, hx = h_factorization(q, i_function_x(q, orders), "x")
    pushed = u_bar(q, orders.lam_order).apply(hx)
    key = sorted(pushed.terms)[2]
    report = check_continuation(q, orders, _tamper=key)
    assert not report.ok()
    witness = report.witness
    assert tuple(witness["sector"]) == key[0]
    assert witness["z"] == key[1]
    assert tuple(witness["degree"]) == key[2]
    assert witness["left"] != witness["right"]


def test_mlk_untwisted_string_equation_direction():
    # g' = e reduces to the string equation and must pass like the rest
    q = quintic()
    report = check_mlk_untwisted(q, 1, Orders(t_order=4, lam_order=0))
    assert report.ok()


@pytest.mark.parametrize("pair", [quintic(), cubic(), quartic(), sextic()],
                         ids=lambda p: p.name)
def test_rctc_square_block(pair):
    report = check_rctc_conditions(pair, 5)
    assert report.ok(), report.witness
    compact = [g for g in pair.group.elements if g.fixed_dim() == 0]
    columns = sum(h.fixed_dim() - 1 for h in pair.positive_dim_sectors())
    assert len(compact) == columns


def test_rctc_rank_value_quintic():
    q = quintic()
    compact = [g for g in q.group.elements if g.fixed_dim() == 0]
    assert len(compact) == 4  # the rank of the compact-support block


def test_degenerate_pair_rejected():
    from lgcy.lgmodel import load_pair
    with pytest.raises(ValueError):
        load_pair({"weights": [1], "degree": 1})


# -- corruption detection (harness integrity) -----------------------------------

def test_every_injected_fault_is_detected():
    q = quintic()
    rng = random.Random(2024)
    oracle = untwisted_j_oracle(q, 0, Orders(t_order=4, lam_order=0))
    keys = sorted(oracle.terms)
    detections = []
    for _ in range(3):
        key = rng.choice(keys)
        report = check_oracle_equivalence(q, n_max=4, _tamper=key)
        detections.append(not report.ok()
                          and tuple(report.witness["sector"]) == key[0])
    orders = recommended_orders(q, 4, 2)
    _, hx = h_factorization(q, i_function_x(q, orders), "x")
    pushed = u_bar(q, orders.lam_order).apply(hx)
    for _ in range(3):
        key = rng.choice(sorted(pushed.terms))
        report = check_continuation(q, orders, _tamper=key)
        detections.append(not report.ok())
    assert all(detections)


def test_structural_check_self_tests():
    q = quintic()
    assert not check_gamma_factorization(q, SMALL, _tamper_side="x").ok()
    assert not check_gamma_factorization(q, SMALL, _tamper_side="y").ok()
    assert not check_mlk_operator(q, _tamper_sector=q.grading.exps).ok()
    assert not check_rctc_conditions(
        q, 4, _tamper_block=(q.grading.exps, q.identity.exps)).ok()
    assert not check_residue_lemma(q, _tamper=True).ok()


def test_fjrw_self_test_and_sign_insensitivity():
    q = quintic()
    orders = Orders(t_order=5, lam_order=4)
    # corrupted coefficient in the derivative breaks (a) or (c)
    bad = check_fjrw_pipeline(
        q, orders, _tamper=((2, 2, 2, 2, 2), 0, (1, 0)), _tamper_stage="derivative")
    assert not bad.ok()
    # flipped global sign: divisibility and narrow support are insensitive,
    # and the leading term is still the unit up to the documented sign
    for convention in ("display", "shifted"):
        assert check_fjrw_pipeline(q, orders, sign_convention=convention).ok()


def test_kernel_self_test():
    q = quintic()
    report = check_kernel_compatibility(
        q, SMALL, _tamper=((0, 0, 0, 0, 0), 0, (1, 0)))
    assert not report.ok()
    assert report.witness["kind"] in ("survivor-shape", "pullback-nonzero")


def test_mlk_untwisted_self_test():
    q = quintic()
    orders = Orders(t_order=4, lam_order=0)
    oracle = untwisted_j_oracle(q, 0, orders)
    key = sorted(oracle.terms)[3]
    report = check_mlk_untwisted(q, 1, orders, _tamper=key)
    assert not report.ok() and report.witness["kind"] == "coefficient"
