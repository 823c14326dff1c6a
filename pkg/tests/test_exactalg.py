"""Exact arithmetic layer: cyclotomics, sector values, Gamma rewrites."""
from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from lgcy.exactalg import (
    Cyclotomic,
    ExactDivisionError,
    GammaAtom,
    NonUnitError,
    OrderMismatchError,
    SeriesRing,
    ZLaurentSeries,
    bernoulli_number,
    bernoulli_poly,
    cyclo_mul,
    cyclotomic_polynomial,
    divide_by_lambda_plus_h,
    euler_phi,
    gamma_ratio_rewrite,
    gamma_shift_product,
    series_exp,
    series_invert,
)


# -- cyclotomic field ---------------------------------------------------------

def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert euler_phi(12) == 4


def test_root_of_unity_exponent_arithmetic():
    xi = Cyclotomic.root(5)
    assert xi ** 2 * xi ** 4 == xi
    assert xi * Cyclotomic.one(5) == xi


def test_cyclotomic_reduction_example():
    # (1 + xi3)(1 + xi3^2) = 1 via 1 + xi3 + xi3^2 = 0
    a = Cyclotomic.one(3) + Cyclotomic.root(3)
    b = Cyclotomic.one(3) + Cyclotomic.root(3, 2)
    assert a * b == 1


def test_cyclo_mul_canonical_independent_of_representation():
    # xi5^7 and xi5^2 are the same element however they were produced
    a = Cyclotomic.root(5, 7)
    b = Cyclotomic.root(5, 2)
    assert a == b
    c = Cyclotomic.root(5, 3) + Cyclotomic.root(5, 4)
    assert cyclo_mul(a, c) == cyclo_mul(b, c)


def test_cyclo_mul_order_mismatch():
    with pytest.raises(OrderMismatchError):
        cyclo_mul(Cyclotomic.root(5), Cyclotomic.root(3))


def test_cyclotomic_inverse():
    xi = Cyclotomic.root(5)
    assert xi.inverse() == Cyclotomic.root(5, 4)
    rng = random.Random(7)
    for order in (3, 4, 5, 6, 8):
        phi = euler_phi(order)
        for _ in range(10):
            coeffs = [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(phi)]
            value = Cyclotomic(order, coeffs)
            if value.is_zero():
                continue
            assert value * value.inverse() == 1


def test_cyclotomic_ring_axioms_random():
    rng = random.Random(13)

    def rand(order):
        phi = euler_phi(order)
        return Cyclotomic(order, [F(rng.randint(-3, 3)) for _ in range(phi)])

    for order in (3, 5, 8):
        for _ in range(20):
            a, b, c = rand(order), rand(order), rand(order)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a


# -- sector values ------------------------------------------------------------

def _random_value(rng, ring):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        lam = rng.randint(0, ring.lam_order)
        h = rng.randint(0, ring.nilpotency - 1)
        if lam + h > ring.lam_order:
            continue
        tau = rng.randint(-1, 1)
        coeff = Cyclotomic.root(ring.order, rng.randint(0, ring.order - 1)) \
            * F(rng.randint(-3, 3))
        terms[(lam, h, tau, ())] = coeff
    from lgcy.exactalg import SectorValue
    return SectorValue(ring, terms)


def test_sector_value_ring_axioms_random():
    rng = random.Random(42)
    ring = SeriesRing(5, 4, 3)
    for _ in range(25):
        a, b, c = (_random_value(rng, ring) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a


def test_constructor_rejects_negative_or_fractional_lam():
    from lgcy.exactalg import SectorValue
    ring = SeriesRing(5, 3, 1)
    with pytest.raises(ValueError):
        SectorValue(ring, {(-1, 0, 0, ()): Cyclotomic.one(5)})
    with pytest.raises(ValueError):
        SectorValue(ring, {(F(1, 2), 0, 0, ()): Cyclotomic.one(5)})


def test_series_exp_examples():
    ring = SeriesRing(5, 2, 2)
    assert series_exp(ring.zero()) == ring.one()
    x = ring.lam() + ring.hyperplane()
    expected = ring.one() + x + (ring.lam(2) + 2 * ring.lam() * ring.hyperplane()) * F(1, 2)
    assert series_exp(x) == expected
    with pytest.raises(NonUnitError):
        series_exp(ring.one())


def test_series_exp_homomorphism():
    ring = SeriesRing(5, 3, 3)
    x = ring.lam() + ring.hyperplane()
    for d in (2, 3, 5):
        assert series_exp(x * d) == series_exp(x) ** d
    rng = random.Random(3)
    for _ in range(10):
        a = _random_value(rng, ring)
        b = _random_value(rng, ring)
        # strip to nilpotent arguments: drop constants and tau-only parts
        a = a.map_monomials(lambda k, c: (k, c) if k[0] + k[1] >= 1 and k[2] == 0 else None)
        b = b.map_monomials(lambda k, c: (k, c) if k[0] + k[1] >= 1 and k[2] == 0 else None)
        assert series_exp(a) * series_exp(b) == series_exp(a + b)


def test_series_invert_examples():
    ring = SeriesRing(5, 3, 1)
    inv = series_invert(ring.one() - ring.lam())
    assert inv == ring.one() + ring.lam() + ring.lam(2) + ring.lam(3)
    assert series_invert(ring.root(1)) == ring.root(4)
    ring11 = SeriesRing(5, 1, 1)
    v = series_exp(ring11.lam()) * ring11.root(1) - 1
    assert v * series_invert(v) == ring11.one()
    with pytest.raises(NonUnitError):
        series_invert(ring.lam())


def test_series_invert_involution_random():
    rng = random.Random(5)
    ring = SeriesRing(5, 3, 2)
    for _ in range(15):
        x = _random_value(rng, ring)
        x = x.map_monomials(lambda k, c: (k, c) if k[2] == 0 else None)
        if x.constant_term().is_zero():
            x = x + 1
        assert series_invert(series_invert(x)) == x
        assert x * series_invert(x) == ring.one()


# -- Gamma-ratio rewrite -------------------------------------------------------

def test_gamma_ratio_rewrite_examples():
    ring = SeriesRing(5, 4, 1)
    empty = gamma_ratio_rewrite(F(1), F(0), 0, ring)
    assert empty.coefficient(0) == ring.one() and len(empty.terms) == 1
    single = gamma_ratio_rewrite(F(1), F(0), 1, ring)
    assert single.coefficient(0) == -ring.lam()
    assert single.coefficient(1).is_zero()
    quintic_factor = gamma_ratio_rewrite(F(1), F(2, 5), 1, ring)
    assert quintic_factor.coefficient(0) == -ring.lam()
    assert quintic_factor.coefficient(1) == ring.scalar(F(-2, 5))


def test_gamma_ratio_telescoping():
    ring = SeriesRing(5, 6, 1)
    for weight in (F(1), F(1, 2), F(3)):
        for base in (F(0), F(2, 5), F(7, 3)):
            for m in range(4):
                for n in range(4):
                    whole = gamma_ratio_rewrite(weight, base, m + n, ring, -2, 10)
                    left = gamma_ratio_rewrite(weight, base, m, ring, -2, 10)
                    right = gamma_ratio_rewrite(weight, base + m, n, ring, -2, 10)
                    assert whole == left * right


def test_gamma_shift_product_carries_h():
    ring = SeriesRing(4, 3, 3)
    prod = gamma_shift_product(F(0), F(-1), F(-1), 1, ring, -4, 4)
    # single factor x - 0*z with x = H - (-1)z = H + z
    assert prod.coefficient(0) == ring.hyperplane()
    assert prod.coefficient(1) == ring.one()


def test_gamma_atom_key_equality():
    a = GammaAtom(F(1), F(7, 5))
    b = GammaAtom(F(1), F(7, 5))
    c = GammaAtom(F(1), F(2, 5))
    assert a == b and a != c
    assert "beta" in str(a)


# -- mixed layer helpers -------------------------------------------------------

def test_divide_by_lambda_plus_h():
    ring = SeriesRing(5, 6, 3)
    quotient, valid = divide_by_lambda_plus_h(ring.lam(3))
    expected = ring.lam(2) - ring.lam() * ring.hyperplane() + ring.hyperplane(2)
    assert quotient == expected
    assert valid == 5
    with pytest.raises(ExactDivisionError):
        divide_by_lambda_plus_h(ring.one())
    rng = random.Random(11)
    for _ in range(10):
        w = _random_value(rng, ring)
        product = (ring.lam() + ring.hyperplane()) * w
        q, valid = divide_by_lambda_plus_h(product)
        diff = (ring.lam() + ring.hyperplane()) * q - product
        assert all(k[0] + k[1] > valid for k in diff.terms)


def test_zlaurent_window_and_products():
    ring = SeriesRing(5, 2, 1)
    a = ZLaurentSeries(ring, -3, 2, {0: ring.one(), 1: ring.lam()})
    b = ZLaurentSeries(ring, -3, 2, {-1: ring.one(), 2: ring.scalar(3)})
    prod = a * b
    assert prod.coefficient(-1) == ring.one()
    assert prod.coefficient(0) == ring.lam()
    assert prod.coefficient(2) == ring.scalar(3)
    # z^3 clamped away by the window
    assert prod.coefficient(3).is_zero()
    with pytest.raises(OrderMismatchError):
        a + ZLaurentSeries(ring, -1, 2, {0: ring.one()})


def test_bernoulli_values():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == F(-1, 2)
    assert bernoulli_number(2) == F(1, 6)
    assert bernoulli_number(12) == F(-691, 2730)
    assert bernoulli_poly(1, F(1, 2)) == 0
    assert bernoulli_poly(1, F(1, 5)) == F(1, 5) - F(1, 2)
    assert bernoulli_poly(2, F(1, 5)) == F(1, 150)
    # generating-function sanity: B_n(x+1) - B_n(x) = n x^(n-1)
    for n in range(1, 8):
        for x in (F(0), F(1, 3), F(7, 5)):
            assert bernoulli_poly(n, x + 1) - bernoulli_poly(n, x) == n * x ** (n - 1)
