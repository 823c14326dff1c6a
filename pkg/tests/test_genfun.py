"""Generating functions: J and its oracle, I^X, I^Y, H-sides, continuation."""
from __future__ import annotations

import math
from fractions import Fraction as F

import pytest

from lgcy.catalog import cubic, quartic, quintic, sextic
from lgcy.cohseries import Orders, TOKEN_Q_H, TOKEN_T_LAMBDA
from lgcy.exactalg import Cyclotomic, SeriesRing, ZLaurentSeries, series_exp
from lgcy.genfun import (
    IdentityError,
    assert_lambda_divisibility,
    deserialize_series,
    fjrw_i_function,
    h_continued,
    h_factorization,
    h_function_x,
    i_function_x,
    i_function_y,
    modification_factor,
    psi_integral_oracle,
    residue_unit_check,
    serialize_series,
    ubar_block,
    untwisted_j,
    untwisted_j_oracle,
    y_ray_levels,
    z_ddt_distinguished,
)
from lgcy.lgmodel import GroupElement
from lgcy.verify import recommended_orders

ALL_PAIRS = [quintic(), cubic(), quartic(), sextic()]


# -- untwisted J and the psi oracle ------------------------------------------------

def test_untwisted_j_t_cubed_coefficient():
    q = quintic()
    orders = Orders(t_order=4, lam_order=2)
    series = untwisted_j(q, 0, orders)
    idx = series.variables.index(q.grading.exps)
    degs = tuple(3 if i == idx else 0 for i in range(len(series.variables)))
    value = series.coefficient((q.grading ** 3).exps, -2, degs)
    assert value == series.ring_for((3,) * 5).scalar(F(1, 6))


def test_untwisted_j_dilaton_leading_term():
    q = quintic()
    series = untwisted_j(q, 0, Orders(t_order=2, lam_order=0))
    zero = tuple(0 for _ in series.variables)
    assert series.coefficient(q.identity.exps, 1, zero) == \
        series.ring_for((0,) * 5).one()
    # the whole z^1 slice is the unit: no other key reaches z = 1
    z_one = [key for key in series.terms if key[1] == 1]
    assert z_one == [(q.identity.exps, 1, zero)]


def test_untwisted_j_two_active_coordinates():
    q = quintic()
    series = untwisted_j(q, 0, Orders(t_order=3, lam_order=0))
    degs = tuple(1 if exps in (q.grading.exps, (q.grading ** 2).exps) else 0
                 for exps in series.variables)
    value = series.coefficient((q.grading ** 3).exps, -1, degs)
    assert value == series.ring_for((3,) * 5).one()


def test_psi_integral_oracle_examples():
    assert psi_integral_oracle((0, 0, 0)) == 1
    assert psi_integral_oracle((1, 0, 0, 0)) == 1
    assert psi_integral_oracle((2, 0, 0, 0)) == 0
    # closed form cross-checks, values computed by (n-3)!/prod a_i!
    assert psi_integral_oracle((1, 1, 0, 0, 0)) == 2
    assert psi_integral_oracle((2, 1, 0, 0, 0, 0)) == 3
    assert psi_integral_oracle((3, 0, 0, 0, 0, 0)) == 1
    with pytest.raises(ValueError):
        psi_integral_oracle((0, 0))


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_oracle_equals_closed_form(pair):
    orders = Orders(t_order=4, lam_order=0)
    for c in pair.valid_twists():
        closed = untwisted_j(pair, c, orders)
        oracle = untwisted_j_oracle(pair, c, orders)
        assert closed.compare(oracle) is None


def test_string_equation():
    q = quintic()
    orders = Orders(t_order=4, lam_order=0)
    series = untwisted_j(q, 0, orders)
    idx = series.variables.index(q.identity.exps)
    derivative = series.z_ddt_var(idx)
    smaller = Orders(t_order=3, lam_order=0)
    assert derivative.restricted(smaller).compare(series.restricted(smaller)) is None


# -- the twisted I-function on the quotient-stack side ------------------------------

def test_modification_factor_m70():
    q = quintic()
    ring = SeriesRing(5, 6, 1)
    factor = modification_factor(q, 7, (0,), ring, -20, 20)
    expected = ZLaurentSeries.constant(ring, -20, 20, ring.one())
    linear = ZLaurentSeries(ring, -20, 20, {0: -ring.lam(), 1: ring.scalar(F(-2, 5))})
    for _ in range(5):
        expected = expected * linear
    assert factor == expected


def test_i_function_x_terms():
    q = quintic()
    series = i_function_x(q, Orders(t_order=4, lam_order=3))
    assert series.tokens == ((TOKEN_T_LAMBDA, 1),)
    # k = 0, k0 = 2: M = 1, term z * t^2/(2 z^2)
    assert series.coefficient((q.grading ** 2).exps, -1, (2, 0)) == \
        series.ring_for((2,) * 5).scalar(F(1, 2))
    # leading term z * unit
    assert series.coefficient(q.identity.exps, 1, (0, 0)) == \
        series.ring_for((0,) * 5).one()


def test_i_function_x_requires_cy():
    from lgcy.lgmodel import load_pair
    non_cy = load_pair({"weights": [1, 1, 2, 3], "degree": 6})
    with pytest.raises(ValueError):
        i_function_x(non_cy, Orders(t_order=2, lam_order=2))


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_lambda_divisibility_of_derivative(pair):
    derivative = z_ddt_distinguished(i_function_x(pair, Orders(t_order=5, lam_order=4)))
    assert_lambda_divisibility(derivative)
    # explicit statement: N_g > 0 coefficients at t-degree >= 0 carry lam^{N_g}
    for (exps, z, degs), value in derivative.terms.items():
        n_g = GroupElement(pair.fermat, exps).fixed_dim()
        if n_g > 0 and degs[0] >= 0:
            assert value.lambda_valuation() >= n_g


# -- the toric side -------------------------------------------------------------------

def test_y_ray_levels():
    assert y_ray_levels(F(1, 5)) == ((), (F(1, 5),))
    assert y_ray_levels(F(7, 5)) == ((), (F(7, 5), F(2, 5)))
    assert y_ray_levels(F(2)) == ((), (F(2), F(1)))
    assert y_ray_levels(F(0)) == ((), ())
    assert y_ray_levels(F(-2, 5)) == ((), ())
    # ratio form forces numerator factors at negative integers
    assert y_ray_levels(F(-1)) == ((F(0),), ())
    assert y_ray_levels(F(-3, 2)) == ((F(-1, 2),), ())


def test_i_function_y_quintic_k0_pieces():
    # k0 = 1 on the quintic: numerator -5(H+lam), one denominator level 1/5
    # per j; the sector j^-1 is empty so the assembled series drops it, but
    # the pieces are what the displayed formula dictates.
    q = quintic()
    assert y_ray_levels(F(1, 5)) == ((), (F(1, 5),))
    series = i_function_y(q, Orders(t_order=10, lam_order=3))
    assert series.tokens == ((TOKEN_Q_H, 1),)
    # leading term: z * q^(H/tau)-dressed unit on the identity sector
    zero = tuple(0 for _ in series.variables)
    assert series.coefficient(q.identity.exps, 1, zero) == \
        series.ring_for((0,) * 5).one()
    # support: only N_g > 0 sectors, H-powers below nilpotency
    for (exps, z, degs), value in series.terms.items():
        n_g = GroupElement(q.fermat, exps).fixed_dim()
        assert n_g > 0
        assert all(mono[1] < n_g for mono in value.terms)


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_h_factorization_both_sides(pair):
    orders = recommended_orders(pair, 5, 3)
    op_x, hx = h_factorization(pair, i_function_x(pair, orders), "x")
    op_y, hy = h_factorization(pair, i_function_y(pair, orders), "y")
    assert hx.tokens == ((TOKEN_T_LAMBDA, 1),)
    assert hy.tokens == ((TOKEN_Q_H, 1),)


def test_h_function_x_atom_example():
    q = quintic()
    series = h_function_x(q, Orders(t_order=7, lam_order=3))
    value = series.coefficient((q.grading ** 2).exps, 0, (7, 0))
    [(mono, coeff)] = list(value.terms.items())
    lam, h, tau, atoms = mono
    assert (lam, h, tau) == (0, 0, 0)
    [(atom, exponent)] = atoms
    assert exponent == -5
    assert atom.weight == 1 and atom.offset == F(7, 5) and atom.h_weight == 0
    assert coeff == Cyclotomic.from_rational(5, F(1, math.factorial(7)))


def test_h_function_x_k0_zero_term():
    q = quintic()
    series = h_function_x(q, Orders(t_order=3, lam_order=2))
    value = series.coefficient(q.identity.exps, 0, (0, 0))
    [(mono, coeff)] = list(value.terms.items())
    assert coeff == Cyclotomic.one(5)
    # all atom offsets are 0 and the multiset collapses to one key
    [(atom, exponent)] = mono[3]
    assert atom.offset == 0 and exponent == -5


def test_h_function_age_z_bookkeeping():
    # sextic sector j^4 has age 2, so each t^{j^4} power shifts z up by one
    s = sextic()
    series = h_function_x(s, recommended_orders(s, 4, 2))
    j4 = (s.grading ** 4).exps
    idx = series.variables.index(j4)
    degs = tuple(2 if i == idx else 0 for i in range(len(series.variables)))
    keys = [k for k in series.terms if k[2] == degs]
    assert keys and all(k[1] == 2 for k in keys)


def test_h_factorization_detects_corruption():
    q = quintic()
    orders = Orders(t_order=4, lam_order=2)
    series = i_function_x(q, orders)
    key = sorted(series.terms)[2]
    broken = series._replace_terms({**series.terms,
                                    key: series.terms[key] * 2})
    with pytest.raises(IdentityError):
        h_factorization(q, broken, "x")


# -- the continued series -------------------------------------------------------------

def test_ubar_block_degenerate_geometric_sum():
    q = quintic()
    ring = SeriesRing(5, 4, 3)
    x = ring.lam() + ring.hyperplane()
    geometric = ring.zero()
    for a in range(5):
        geometric = geometric + series_exp(x * a)
    assert ubar_block(q, 0, ring) == geometric * F(1, 5)
    assert ubar_block(q, 5, ring) == geometric * F(1, 5)


def test_ubar_block_nondegenerate_constant_zero():
    q = quintic()
    ring = SeriesRing(5, 3, 2)
    for b in range(1, 5):
        assert ubar_block(q, b, ring).constant_term().is_zero()


def test_ubar_block_first_order():
    q = quintic()
    ring = SeriesRing(5, 1, 2)
    block = ubar_block(q, 1, ring)
    inv = (Cyclotomic.root(5) - 1).inverse()
    assert block == (ring.lam() + ring.hyperplane()) * ring.scalar(inv)


def test_degenerate_block_identity():
    # (e^{d(lam+H)} - 1) = (e^{lam+H} - 1) * sum_{a<d} e^{a(lam+H)} exactly
    for d, nilp in ((5, 3), (3, 2), (4, 4), (6, 2)):
        ring = SeriesRing(d, 5, nilp)
        x = ring.lam() + ring.hyperplane()
        geometric = ring.zero()
        for a in range(d):
            geometric = geometric + series_exp(x * a)
        assert series_exp(x * d) - 1 == (series_exp(x) - 1) * geometric


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_continuation_identity(pair):
    orders = recommended_orders(pair, 5, 3)
    _, hx = h_factorization(pair, i_function_x(pair, orders), "x")
    from lgcy.transforms import u_bar
    lhs = u_bar(pair, orders.lam_order).apply(hx)
    rhs = h_continued(pair, orders)
    assert lhs.compare(rhs) is None


def test_h_continued_frozen_degenerate_coefficient():
    # quintic, m = 0, k = 0, b = 0: the degenerate block (1/5) sum_a e^{a(lam+H)}
    # dressed with Gamma(1 - beta)^-5.  By hand: the lam-coefficient is
    # (1/5)(0+1+2+3+4) = 2, and the lam*H one (1/5) sum a^2 = 6.
    q = quintic()
    series = h_continued(q, Orders(t_order=2, lam_order=3))
    value = series.coefficient(q.identity.exps, 0, (0, 0))
    atoms = next(iter(value.terms))[3]
    [(atom, exponent)] = atoms
    assert exponent == -5 and atom.offset == 0 and atom.weight == 1
    one = Cyclotomic.one(5)
    assert value.coefficient(0, 0, 0, atoms) == one
    assert value.coefficient(1, 0, 0, atoms) == one * 2
    assert value.coefficient(0, 1, 0, atoms) == one * 2
    assert value.coefficient(1, 1, 0, atoms) == one * 6


def test_h_continued_nondegenerate_block_vanishing_constant():
    # on the quintic the only Y-sector is e, reached with b = 0, so the
    # block at t-degree m uses xi^m: for m not divisible by 5 the numerator
    # e^{d*0} - 1 = 0 kills the constant (lam, H)-monomial.
    q = quintic()
    series = h_continued(q, Orders(t_order=7, lam_order=3))
    seen_nondegenerate = 0
    for (exps, z, degs), value in series.terms.items():
        if degs[0] % 5 != 0:
            seen_nondegenerate += 1
            assert all(lam + h > 0 for (lam, h, _tau, _atoms) in value.terms)
    assert seen_nondegenerate > 0


# -- residues and the FJRW limit --------------------------------------------------------

def test_residue_unit_check_examples():
    assert residue_unit_check(0, 0, 5, expected=F(1, 5))
    assert residue_unit_check(1, 2, 5, expected=F(-1, 5))
    assert residue_unit_check(3, 0, 5, expected=F(-1, 30))
    for d in (3, 4, 5, 6):
        for m in range(7):
            for b in range(d):
                assert residue_unit_check(m, b, d)
    assert not residue_unit_check(2, 1, 5, expected=F(1, 7))
    with pytest.raises(ValueError):
        residue_unit_check(-1, 0, 5)


def test_fjrw_leading_term_and_sign_conventions():
    q = quintic()
    orders = Orders(t_order=5, lam_order=4)
    series = fjrw_i_function(q, orders)
    zero = tuple(0 for _ in series.variables)
    ring = series.ring_for((0,) * 5)
    assert series.coefficient(q.identity.exps, 1, zero) == ring.scalar(-1)
    shifted = fjrw_i_function(q, orders, sign_convention="shifted")
    assert shifted.coefficient(q.identity.exps, 1, zero) == ring.one()


@pytest.mark.parametrize("pair", ALL_PAIRS, ids=lambda p: p.name)
def test_fjrw_narrow_support(pair):
    series = fjrw_i_function(pair, Orders(t_order=4, lam_order=4))
    for (exps, _z, _degs) in series.terms:
        assert pair.is_narrow(GroupElement(pair.fermat, exps))
    # no lingering tokens after the nonequivariant limit
    assert series.tokens == ()


def test_fjrw_broad_image_coefficients_vanish():
    q = quintic()
    series = fjrw_i_function(q, Orders(t_order=4, lam_order=4))
    broad = (q.grading ** 4).exps
    assert all(key[0] != broad for key in series.terms)


# -- serialization -----------------------------------------------------------------------

@pytest.mark.parametrize("maker", [
    i_function_x,
    i_function_y,
    h_function_x,
    h_continued,
    fjrw_i_function,
], ids=lambda fn: fn.__name__)
def test_serialize_round_trip(maker):
    pair = quintic()
    orders = Orders(t_order=4, lam_order=2)
    series = maker(pair, orders)
    data = serialize_series(series)
    import json
    rebuilt = deserialize_series(json.loads(json.dumps(data)))
    assert rebuilt.compare(series) is None
    assert serialize_series(rebuilt) == data


def test_serialized_display_strings():
    q = quintic()
    data = serialize_series(h_function_x(q, Orders(t_order=2, lam_order=1)))
    displays = [t["value"]["display"] for t in data["terms"]]
    assert any("Gamma(1" in s and "beta" in s for s in displays)
