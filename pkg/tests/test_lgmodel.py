"""Fermat pairs: groups, sector combinatorics, moduli numerology, pairings."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

import pytest

from lgcy.catalog import cubic, quartic, quintic, sextic
from lgcy.lgmodel import (
    PAIRING_SPECIALIZATIONS,
    FermatData,
    SectorBasisElement,
    group_from_generators,
    load_pair,
    pair_to_dict,
    pair_twisted,
)

ALL_PAIRS = [quintic(), cubic(), quartic(), sextic()]


# -- data validation -----------------------------------------------------------

def test_fermat_data_validation():
    with pytest.raises(ValueError):
        FermatData((2, 2), 4)        # gcd != 1
    with pytest.raises(ValueError):
        FermatData((1, 3), 5)        # 3 does not divide 5
    with pytest.raises(ValueError):
        FermatData((1, 1), 1)        # degenerate degree
    with pytest.raises(ValueError):
        FermatData((1, 5), 5)        # exponent d/c = 1
    data = FermatData((1, 1, 1, 3), 6)
    assert data.exponents == (6, 6, 6, 2)
    assert data.is_calabi_yau
    assert not FermatData((1, 1, 2, 3), 6).is_calabi_yau


# -- group construction ----------------------------------------------------------

def test_group_from_generators_quintic():
    group = group_from_generators(FermatData((1,) * 5, 5), [])
    assert len(group.elements) == 5  # <j> always adjoined


def test_group_from_generators_quartic():
    group = group_from_generators(FermatData((1,) * 4, 4), [(0, 2, 0, 2)])
    assert len(group.elements) == 8


def test_group_from_generators_cubic_noncyclic():
    group = group_from_generators(FermatData((1, 1, 1), 3), [(1, 2, 0)])
    assert len(group.elements) == 9


def test_generator_out_of_range():
    with pytest.raises(ValueError):
        group_from_generators(FermatData((1,) * 4, 4), [(0, 4, 0, 0)])


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_group_laws_random(pair):
    rng = random.Random(99)
    elements = pair.group.elements
    for _ in range(25):
        a, b, c = (rng.choice(elements) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == pair.identity
        assert a * b in pair.group
    for g in elements:
        assert len(pair.group) % g.order() == 0  # Lagrange bookkeeping
        assert g ** g.order() == pair.identity
    assert pair.period == pair.fermat.degree


# -- ages, fixed loci, narrow sectors ----------------------------------------------

def test_age_examples():
    q = quintic()
    assert q.grading.age() == 1
    assert q.identity.age() == 0
    s = sextic()
    j2 = s.grading ** 2
    assert j2.exps == (2, 2, 2, 0)
    assert j2.age() == 1
    assert j2.fixed_dim() == 1


def test_fixed_dim_examples():
    q = quintic()
    assert q.identity.fixed_dim() == 5
    assert q.grading.fixed_dim() == 0


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_age_duality(pair):
    n = pair.fermat.n_variables
    for g in pair.group.elements:
        assert g.age() + g.inverse().age() == n - g.fixed_dim()


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_sl_condition(pair):
    assert pair.is_sl
    assert all(g.age().denominator == 1 for g in pair.group.elements)


def test_non_sl_pair_detected():
    pair = load_pair({"weights": [1, 2], "degree": 4})
    assert pair.grading.age() == F(3, 4)
    assert not pair.is_sl


@pytest.mark.parametrize("spec_dict,expected", [
    ({"weights": [1, 1, 1, 1, 1], "degree": 5}, True),
    ({"weights": [1, 2], "degree": 4}, False),
    ({"weights": [1, 1, 1, 1], "degree": 4, "generators": [[0, 2, 0, 2]]}, True),
])
def test_sl_iff_generators_pass(spec_dict, expected):
    pair = load_pair(spec_dict)
    seeds = list(pair.group.generators) + [pair.grading]
    generators_pass = all(g.age().denominator == 1 for g in seeds)
    assert generators_pass == pair.is_sl == expected


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_inverse_closure(pair):
    for g in pair.group.elements:
        assert g.inverse() in pair.group


def test_narrow_sectors():
    q = quintic()
    narrow = sorted(g.exps for g in q.narrow_sectors())
    assert narrow == [(0,) * 5, (1,) * 5, (2,) * 5, (3,) * 5]
    c = cubic()
    assert sorted(g.exps for g in c.narrow_sectors()) == [(0, 0, 0), (1, 1, 1)]


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_identity_is_narrow_on_cy_pairs(pair):
    assert pair.is_narrow(pair.identity)


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_narrow_duality(pair):
    j2_inv = (pair.grading ** 2).inverse()
    for g in pair.group.elements:
        assert pair.is_narrow(g) == pair.is_narrow(g.inverse() * j2_inv)


# -- moduli numerology -------------------------------------------------------------

def test_line_bundle_degree_examples():
    q = quintic()
    j2 = q.grading ** 2
    j3 = q.grading ** 3
    assert q.line_bundle_degree(1, 0, 0, [j2, j2, j2]) == -1
    assert q.line_bundle_degree(0, 0, 0, [q.identity] * 3) == 0
    assert q.line_bundle_degree(1, 0, 0, [j2, j2, j3]) == F(-6, 5)


def test_is_nonempty_examples():
    q = quintic()
    j2 = q.grading ** 2
    j3 = q.grading ** 3
    assert q.is_nonempty(1, 0, [j2, j2, j2])
    assert not q.is_nonempty(1, 0, [j2, j2, j3])
    assert q.is_nonempty(0, 0, [j2, j3])


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_nonempty_iff_product_identity_untwisted(pair):
    elements = pair.group.elements
    for insertions in itertools.product(elements, repeat=3):
        product = insertions[0] * insertions[1] * insertions[2]
        assert pair.is_nonempty(0, 0, list(insertions)) == product.is_identity()


# -- twisted pairings ---------------------------------------------------------------

def test_pair_twisted_untwisted_example():
    q = quintic()
    v = pair_twisted(q, 0, q.grading, q.grading ** 4, "untwisted")
    assert v.coefficient == F(1, 3125) and v.lam_exponent == 0


def test_pair_twisted_euler_floor_example():
    # c=1 with g1' = e: all m_j(j) != 0, so every floor vanishes
    q = quintic()
    v = pair_twisted(q, 1, q.identity, q.grading ** 3, "euler-inverse")
    assert v.coefficient == F(1, 3125) and v.lam_exponent == 0


def test_pair_twisted_identity_block():
    q = quintic()
    v = pair_twisted(q, 0, q.identity, q.identity, "euler-inverse")
    assert v.coefficient == F(-1, 3125) and v.lam_exponent == -5


def test_pair_twisted_rejects_large_twist():
    s = sextic()
    with pytest.raises(ValueError):
        pair_twisted(s, 2, s.identity, s.identity)  # 2*3 = 6 = d


@pytest.mark.parametrize("pair", [quintic(), cubic(), sextic()],
                         ids=lambda p: p.name)
def test_pairing_symmetric_and_nondegenerate(pair):
    for spec in PAIRING_SPECIALIZATIONS:
        for c in pair.valid_twists():
            for g1 in pair.group.elements:
                nonzero = 0
                for g2 in pair.group.elements:
                    a = pair_twisted(pair, c, g1, g2, spec)
                    assert a == pair_twisted(pair, c, g2, g1, spec)
                    if not a.is_zero():
                        nonzero += 1
                assert nonzero == 1  # exactly one dual partner per row


# -- basis elements and pair files -----------------------------------------------------

def test_sector_basis_element_validation():
    q = quintic()
    SectorBasisElement("y", q.identity, 4)
    with pytest.raises(ValueError):
        SectorBasisElement("y", q.identity, 5)   # H-power out of range
    with pytest.raises(ValueError):
        SectorBasisElement("y", q.grading)       # empty Y sector
    with pytest.raises(ValueError):
        SectorBasisElement("x", q.identity, 1)   # H off the Y side
    narrow = SectorBasisElement("fjrw", q.grading)
    assert narrow.h_power == 0


def test_pair_file_round_trip(tmp_path):
    for pair in ALL_PAIRS:
        data = pair_to_dict(pair)
        rebuilt = load_pair(data)
        assert len(rebuilt.group) == len(pair.group)
        assert rebuilt.name == pair.name
    path = tmp_path / "pair.json"
    import json
    path.write_text(json.dumps(pair_to_dict(quartic())))
    from_file = load_pair(path)
    assert len(from_file.group) == 8
    assert from_file.grading.exps == (1, 1, 1, 1)


def test_degenerate_degree_rejected_upstream():
    with pytest.raises(ValueError):
        load_pair({"weights": [1], "degree": 1})
