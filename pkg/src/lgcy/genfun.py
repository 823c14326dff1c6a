"""Truncated generating functions: J, I^X, I^Y, H-factorizations, H^Y'.

Conventions used throughout:

* the distinguished direction (coordinate dual to the grading sector) is
  variable slot 0: exponent k0 of t on the t-side, of q^(1/d) on the q-side;
* the remaining variables are the coordinates t^{g_s} dual to the sectors
  g_s with N_{g_s} > 0, in a fixed sorted order;
* a(k)^j = sum_s k_s m_j(g_s) and r_j = k0 c_j / d + a(k)^j, so that the
  sector of an index (k0, k) has m_j = frac(r_j) on the t-side;
* t-truncation bounds the total multidegree (k0 counts once, also on the
  q-side where it is a q^(1/d)-exponent).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactalg import (
    Cyclotomic,
    GammaAtom,
    SectorValue,
    SeriesRing,
    ZLaurentSeries,
    gamma_shift_product,
    series_exp,
    series_invert,
)
from .cohseries import (
    CohSeries,
    Orders,
    TOKEN_Q_H,
    TOKEN_T_LAMBDA,
    zlaurent_to_terms,
)
from .lgmodel import GroupElement, LGPair

__all__ = [
    "IdentityError",
    "untwisted_j",
    "untwisted_j_oracle",
    "psi_integral_oracle",
    "i_function_x",
    "i_function_y",
    "modification_factor",
    "y_denominator_levels",
    "y_ray_levels",
    "h_function_x",
    "h_function_y",
    "h_factorization",
    "h_continued",
    "ubar_block",
    "residue_unit_check",
    "fjrw_i_function",
    "z_ddt_distinguished",
    "assert_lambda_divisibility",
    "serialize_series",
    "deserialize_series",
]


class IdentityError(AssertionError):
    """An identity that must hold termwise failed to verify."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


# ---------------------------------------------------------------------------
# the untwisted J-function and its psi-integral oracle
# ---------------------------------------------------------------------------

def _multidegrees(n_vars: int, total: int):
    """All exponent tuples with given total, lexicographic."""
    if n_vars == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _multidegrees(n_vars - 1, total - first):
            yield (first,) + rest


def untwisted_j(pair: LGPair, c: int, orders: Orders) -> CohSeries:
    """Closed-form J: sum over {a_g} of z^(1-sum a) prod t^a / a! on phi_{prod g^a}.

    Variables are all group coordinates, in element order.
    """
    for cj in pair.fermat.weights:
        if c * cj >= pair.fermat.degree:
            raise ValueError("twist out of range: c*c_j < d required")
    elements = pair.group.elements
    ring = SeriesRing(pair.fermat.degree, orders.lam_order, 1)
    z_min, z_max = orders.z_window
    terms: dict = {}
    for total in range(orders.t_order + 1):
        for degs in _multidegrees(len(elements), total):
            z = 1 - total
            if z < z_min or z > z_max:
                continue
            sector = pair.identity
            coeff = Fraction(1)
            for g, a in zip(elements, degs):
                if a:
                    sector = sector * (g ** a)
                    coeff /= factorial(a)
            key = (sector.exps, z, degs)
            value = ring.scalar(coeff)
            terms[key] = terms[key] + value if key in terms else value
    return CohSeries("lg", pair, tuple(g.exps for g in elements), orders,
                     terms, (), c_twist=c)


@lru_cache(maxsize=None)
def psi_integral_oracle(exponents: tuple[int, ...]) -> Fraction:
    """Genus-zero psi-integral over the moduli of stable curves.

    Computed by the string-equation recursion, never by the closed form
    (n-3)!/prod a_i!, so it can serve as an independent oracle for it.
    """
    n = len(exponents)
    if n < 3:
        raise ValueError("need at least three marked points")
    if sum(exponents) != n - 3:
        return Fraction(0)
    if n == 3:
        return Fraction(1)
    exponents = tuple(sorted(exponents))
    # smallest entry is 0 whenever the dimension condition holds
    rest = exponents[1:]
    total = Fraction(0)
    for i, a in enumerate(rest):
        if a > 0:
            lowered = rest[:i] + (a - 1,) + rest[i + 1:]
            total += psi_integral_oracle(tuple(sorted(lowered)))
    return total


def untwisted_j_oracle(pair: LGPair, c: int, orders: Orders) -> CohSeries:
    """J assembled from the psi-integral oracle and the selection rules.

    Independent route: correlators come from ``psi_integral_oracle`` and the
    moduli non-emptiness criterion, duals from the untwisted pairing, not
    from the closed-form product formula.
    """
    for cj in pair.fermat.weights:
        if c * cj >= pair.fermat.degree:
            raise ValueError("twist out of range: c*c_j < d required")
    elements = pair.group.elements
    ring = SeriesRing(pair.fermat.degree, orders.lam_order, 1)
    z_min, z_max = orders.z_window
    jc = pair.grading ** c
    j2c = jc * jc
    terms: dict = {}

    def put(sector, z, degs, coeff):
        if z < z_min or z > z_max or coeff == 0:
            return
        key = (sector.exps, z, tuple(degs))
        value = ring.scalar(coeff)
        terms[key] = terms[key] + value if key in terms else value

    put(pair.identity, 1, (0,) * len(elements), Fraction(1))
    for i, g in enumerate(elements):
        degs = [0] * len(elements)
        degs[i] = 1
        put(g, 0, degs, Fraction(1))
    dual_norm = pair.period ** pair.fermat.n_variables
    for total in range(2, orders.t_order + 1):
        for degs in _multidegrees(len(elements), total):
            insertions = []
            coeff = Fraction(1)
            for g, a in zip(elements, degs):
                insertions.extend([g * jc] * a)
                coeff /= factorial(a)
            for g0 in elements:
                for a in range(total):
                    if 1 + a > -z_min:
                        break
                    if psi_integral_oracle((a,) + (0,) * total) == 0:
                        continue
                    if not pair.is_nonempty(c, 0, [g0 * jc] + insertions):
                        continue
                    corr = Fraction(1, dual_norm) * psi_integral_oracle((a,) + (0,) * total)
                    dual_sector = g0.inverse() * j2c.inverse()
                    put(dual_sector, -a - 1, degs, coeff * corr * dual_norm)
    return CohSeries("lg", pair, tuple(g.exps for g in elements), orders,
                     terms, (), c_twist=c)


# ---------------------------------------------------------------------------
# the hypergeometric I-functions
# ---------------------------------------------------------------------------

def _index_tuples(pair: LGPair, t_order: int):
    """(k0, k) with k0 + sum(k) <= T, plus the sector data they index."""
    sectors = pair.positive_dim_sectors()
    for total in range(t_order + 1):
        for degs in _multidegrees(1 + len(sectors), total):
            yield degs[0], degs[1:], sectors


def _a_vector(pair: LGPair, sectors, k) -> tuple[Fraction, ...]:
    n = pair.fermat.n_variables
    out = [Fraction(0)] * n
    for g, mult in zip(sectors, k):
        if mult:
            for j in range(n):
                out[j] += mult * g.multiplicity(j)
    return tuple(out)


def modification_factor(pair: LGPair, k0: int, k, ring: SeriesRing,
                        z_min: int, z_max: int) -> ZLaurentSeries:
    """M(k0, k) = prod_j prod_{l < floor(r_j)} (-c_j lam - (frac(r_j) + l) z)."""
    sectors = pair.positive_dim_sectors()
    a_vec = _a_vector(pair, sectors, k)
    d = pair.fermat.degree
    result = ZLaurentSeries.constant(ring, z_min, z_max, ring.one())
    for j, cj in enumerate(pair.fermat.weights):
        r = Fraction(k0 * cj, d) + a_vec[j]
        steps = r.numerator // r.denominator
        frac = r - steps
        for l in range(steps):
            factor = ZLaurentSeries(ring, z_min, z_max,
                                    {0: ring.monomial(lam=1, coeff=-Fraction(cj)),
                                     1: ring.scalar(-(frac + l))})
            result = result * factor
    return result


def i_function_x(pair: LGPair, orders: Orders) -> CohSeries:
    """The hypergeometric point on the local quotient-stack cone.

    z t^(d lam/tau) sum_{k,k0} prod (t^{g_s})^{k_s} / (z^{k_s} k_s!) *
    M(k0,k) t^{k0} / (z^{k0} k0!) on the sector j^{k0} prod g_s^{k_s}.
    """
    pair.require_cy()
    d = pair.fermat.degree
    ring = SeriesRing(d, orders.lam_order, 1)
    z_min, z_max = orders.z_window
    wide_min = min(z_min, -(orders.t_order + 2) - orders.t_order)
    terms: dict = {}
    for k0, k, sectors in _index_tuples(pair, orders.t_order):
        sector = pair.grading ** k0
        for g, mult in zip(sectors, k):
            if mult:
                sector = sector * (g ** mult)
        m_factor = modification_factor(pair, k0, k, ring, wide_min, z_max + orders.t_order)
        comb = Fraction(1, factorial(k0))
        for mult in k:
            comb /= factorial(mult)
        value = (m_factor * ring.scalar(comb)).shift(1 - k0 - sum(k))
        value = value.with_window(z_min, z_max)
        zlaurent_to_terms(sector.exps, (k0,) + tuple(k), value, terms)
    variables = ("t",) + tuple(g.exps for g in pair.positive_dim_sectors())
    return CohSeries("x", pair, variables, orders, terms,
                     ((TOKEN_T_LAMBDA, 1),))


def y_denominator_levels(v: Fraction) -> tuple[Fraction, ...]:
    """The l with 0 < l <= v and frac(l) = frac(v), in descending order."""
    if v <= 0:
        return ()
    levels = []
    l = v
    while l > 0:
        levels.append(l)
        l -= 1
    return tuple(levels)


def y_ray_levels(v: Fraction) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """(numerator levels, denominator levels) of one ray factor of I^Y.

    The Gamma-ratio Gamma(1 + c H/tau - frac(-v)) / Gamma(1 + c H/tau + v)
    expands to denominator factors (cH + lz) over 0 < l <= v and numerator
    factors over v < l <= 0, always with frac(l) = frac(v).  The displayed
    denominator-only product is the v > 0 case; for v <= -1 the numerator
    factors (including a bare cH at l = 0 when v is a negative integer) are
    forced by the ratio form, which is what the factorization identity and
    the toric cone statement require.
    """
    if v > 0:
        return (), y_denominator_levels(v)
    frac = v - (v.numerator // v.denominator)
    top = Fraction(0) if frac == 0 else frac - 1  # largest l <= 0 with frac(l) = frac(v)
    levels = []
    l = top
    while l > v:
        levels.append(l)
        l -= 1
    return tuple(levels), ()


def _inverse_linear_h_z(ring: SeriesRing, h_coeff: Fraction, level: Fraction,
                        z_min: int, z_max: int) -> ZLaurentSeries:
    """(h_coeff*H + level*z)^(-1) for level != 0, exact via nilpotency of H."""
    if level == 0:
        raise ZeroDivisionError("level must be nonzero")
    terms = {}
    for n in range(ring.nilpotency):
        coeff = Fraction((-h_coeff) ** n, level ** (n + 1))
        terms[-n - 1] = ring.monomial(h=n, coeff=coeff)
    return ZLaurentSeries(ring, z_min, z_max, terms)


def i_function_y(pair: LGPair, orders: Orders) -> CohSeries:
    """The toric I-function of the canonical-bundle total space, in q.

    Supported on sectors with N_g > 0; carries the q^(H/tau) prefactor.
    The multidegree slot 0 is the exponent of q^(1/d).
    """
    pair.require_cy()
    d = pair.fermat.degree
    z_min, z_max = orders.z_window
    wide_min = z_min - 2 * orders.t_order - 2 * pair.fermat.n_variables
    terms: dict = {}
    for k0, k, sectors in _index_tuples(pair, orders.t_order):
        sector = (pair.grading ** k0).inverse()
        for g, mult in zip(sectors, k):
            if mult:
                sector = sector * (g ** mult)
        n_g = sector.fixed_dim()
        if n_g == 0:
            continue
        ring = SeriesRing(d, orders.lam_order, n_g)
        a_vec = _a_vector(pair, sectors, k)
        value = ZLaurentSeries.constant(ring, wide_min, z_max + orders.t_order,
                                        ring.one())
        for l in range(k0):
            factor = ZLaurentSeries(
                ring, wide_min, z_max + orders.t_order,
                {0: (ring.lam() + ring.hyperplane()) * Fraction(-d),
                 1: ring.scalar(Fraction(-l))})
            value = value * factor
        for j, cj in enumerate(pair.fermat.weights):
            v = Fraction(k0 * cj, d) - a_vec[j]
            numerator_levels, denominator_levels = y_ray_levels(v)
            for level in numerator_levels:
                value = value * ZLaurentSeries(
                    ring, wide_min, z_max + orders.t_order,
                    {0: ring.monomial(h=1, coeff=Fraction(cj)),
                     1: ring.scalar(level)})
            for level in denominator_levels:
                value = value * _inverse_linear_h_z(ring, Fraction(cj), level,
                                                    wide_min, z_max + orders.t_order)
        comb = Fraction(1)
        for mult in k:
            comb /= factorial(mult)
        value = (value * ring.scalar(comb)).shift(1 - sum(k))
        value = value.with_window(z_min, z_max)
        zlaurent_to_terms(sector.exps, (k0,) + tuple(k), value, terms)
    variables = ("q^(1/d)",) + tuple(g.exps for g in pair.positive_dim_sectors())
    return CohSeries("y", pair, variables, orders, terms, ((TOKEN_Q_H, 1),))


# ---------------------------------------------------------------------------
# H-functions and the Gamma factorization
# ---------------------------------------------------------------------------

def _x_atoms(pair: LGPair, k0: int, a_vec) -> tuple:
    d = pair.fermat.degree
    atoms: dict[GammaAtom, int] = {}
    for j, cj in enumerate(pair.fermat.weights):
        atom = GammaAtom(Fraction(cj), Fraction(k0 * cj, d) + a_vec[j])
        atoms[atom] = atoms.get(atom, 0) - 1
    return tuple(sorted(atoms.items()))


def _age_shift(sectors, k) -> int:
    """sum_s (age(g_s) - 1) k_s; the ages of the indexing sectors must be
    integers for the z-grading bookkeeping to make sense."""
    shift = 0
    for g, mult in zip(sectors, k):
        if mult:
            age = g.age()
            if age.denominator != 1:
                raise IdentityError(f"non-integral age on sector {g}")
            shift += (int(age) - 1) * mult
    return shift


def h_function_x(pair: LGPair, orders: Orders) -> CohSeries:
    """H(t, t, z): Gamma denominators as atoms, age-shifted z-powers."""
    pair.require_cy()
    d = pair.fermat.degree
    ring = SeriesRing(d, orders.lam_order, 1)
    terms: dict = {}
    for k0, k, sectors in _index_tuples(pair, orders.t_order):
        sector = pair.grading ** k0
        comb = Fraction(1, factorial(k0))
        for g, mult in zip(sectors, k):
            if mult:
                sector = sector * (g ** mult)
                comb /= factorial(mult)
        a_vec = _a_vector(pair, sectors, k)
        value = SectorValue(ring, {(0, 0, 0, _x_atoms(pair, k0, a_vec)):
                                   Cyclotomic.from_rational(d, comb)})
        key = (sector.exps, _age_shift(sectors, k), (k0,) + tuple(k))
        terms[key] = terms[key] + value if key in terms else value
    variables = ("t",) + tuple(g.exps for g in pair.positive_dim_sectors())
    return CohSeries("x", pair, variables, orders, terms,
                     ((TOKEN_T_LAMBDA, 1),))


def _y_atoms(pair: LGPair, k0: int, a_vec) -> tuple:
    d = pair.fermat.degree
    atoms: dict[GammaAtom, int] = {GammaAtom(Fraction(d), Fraction(k0), Fraction(d)): -1}
    for j, cj in enumerate(pair.fermat.weights):
        atom = GammaAtom(Fraction(0), a_vec[j] - Fraction(k0 * cj, d), Fraction(-cj))
        atoms[atom] = atoms.get(atom, 0) - 1
    return tuple(sorted(atoms.items()))


def h_function_y(pair: LGPair, orders: Orders) -> CohSeries:
    """H^Y before reflection: 1 / (Gamma(1-k0-d(lam+H)/tau) prod_j Gamma(...)).

    The Gamma(1 - d(lam+H)/tau) numerator of the displayed form belongs to
    the Gamma-class operator and is not stored here.
    """
    pair.require_cy()
    d = pair.fermat.degree
    terms: dict = {}
    for k0, k, sectors in _index_tuples(pair, orders.t_order):
        sector = (pair.grading ** k0).inverse()
        for g, mult in zip(sectors, k):
            if mult:
                sector = sector * (g ** mult)
        n_g = sector.fixed_dim()
        if n_g == 0:
            continue
        ring = SeriesRing(d, orders.lam_order, n_g)
        z_shift = 0
        comb = Fraction(1)
        for g, mult in zip(sectors, k):
            if mult:
                z_shift += (int(g.age()) - 1) * mult
                comb /= factorial(mult)
        a_vec = _a_vector(pair, sectors, k)
        value = SectorValue(ring, {(0, 0, 0, _y_atoms(pair, k0, a_vec)):
                                   Cyclotomic.from_rational(d, comb)})
        key = (sector.exps, z_shift, (k0,) + tuple(k))
        terms[key] = terms[key] + value if key in terms else value
    variables = ("q^(1/d)",) + tuple(g.exps for g in pair.positive_dim_sectors())
    return CohSeries("y", pair, variables, orders, terms, ((TOKEN_Q_H, 1),))


def h_factorization(pair: LGPair, series: CohSeries, side: str):
    """Split an I-function as z^(1-Gr) GammaClass tau^(deg0/2) H and verify.

    Returns (gamma_class_operator, h_series).  The verification re-expands
    every Gamma-atom ratio with an integer offset gap through the
    polynomial rewrite and insists on an identically zero residual;
    the first bad coefficient is carried on the raised IdentityError.
    """
    from .transforms import gamma_class_op  # local to avoid a module cycle

    pair.require_cy()
    if side == "x":
        h_series = h_function_x(pair, series.orders)
        _verify_factorization_x(pair, series, h_series)
    elif side == "y":
        h_series = h_function_y(pair, series.orders)
        _verify_factorization_y(pair, series, h_series)
    else:
        raise ValueError("side must be 'x' or 'y'")
    return gamma_class_op(pair, side), h_series


def _wide_window(orders: Orders, pair: LGPair) -> tuple[int, int]:
    z_min, z_max = orders.z_window
    pad = 2 * orders.t_order + 2 * pair.fermat.n_variables + 2
    return z_min - pad, z_max + pad


def _collect_zlaurent(series: CohSeries, sector: tuple, degs: tuple,
                      ring: SeriesRing, window) -> ZLaurentSeries:
    terms = {}
    for (exps, z, d2), value in series.terms.items():
        if exps == sector and d2 == degs:
            terms[z] = value.with_ring(ring)
    return ZLaurentSeries(ring, window[0], window[1], terms)


def _assert_is_clamp(series: CohSeries, sector, degs, wide: ZLaurentSeries,
                     label: str):
    """The stored series must be the window clamp of the wide recomputation."""
    z_min, z_max = series.orders.z_window
    ring = wide.ring
    stored = _collect_zlaurent(series, sector, degs, ring,
                               (wide.z_min, wide.z_max))
    clamped = wide.with_window(z_min, z_max).with_window(wide.z_min, wide.z_max)
    if stored != clamped:
        raise IdentityError(f"{label}: stored series is not the declared clamp",
                            {"sector": list(sector), "degree": list(degs)})


def _verify_factorization_x(pair: LGPair, i_series: CohSeries, h_series: CohSeries):
    """Per-term check I = z^(1-Gr) GammaClass tau^(deg0/2) H on the X side.

    Both closed forms are recomputed on a wide z-window so clamping cannot
    mask a residual; the stored series are asserted to be their clamps.
    """
    d = pair.fermat.degree
    ring = SeriesRing(d, i_series.orders.lam_order, 1)
    window = _wide_window(i_series.orders, pair)
    for k0, k, sectors in _index_tuples(pair, i_series.orders.t_order):
        sector = pair.grading ** k0
        comb = Fraction(1, factorial(k0))
        for g, mult in zip(sectors, k):
            if mult:
                sector = sector * (g ** mult)
                comb /= factorial(mult)
        degs = (k0,) + tuple(k)
        a_vec = _a_vector(pair, sectors, k)
        age = sector.age()
        if age.denominator != 1:
            raise IdentityError("z-grading needs integral ages (SL group)")
        shift = _age_shift(sectors, k)

        i_value = (modification_factor(pair, k0, k, ring, *window)
                   * ring.scalar(comb)).shift(1 - k0 - sum(k))
        _assert_is_clamp(i_series, sector.exps, degs, i_value, "I^X")

        h_stored = h_series.coefficient(sector.exps, shift, degs)
        expected_atoms = _x_atoms(pair, k0, a_vec)
        expected_h = SectorValue(
            ring, {(0, 0, 0, expected_atoms): Cyclotomic.from_rational(d, comb)})
        z_min, z_max = h_series.orders.z_window
        if (z_min <= shift <= z_max) and h_stored != expected_h:
            raise IdentityError("H-function term disagrees with its closed form",
                                {"sector": list(sector.exps), "degree": list(degs)})

        # operator side: z^(1 - age), Gamma-class atoms cancel the H atoms
        # through the integer-gap rewrite, one polynomial block per j.
        recon = ZLaurentSeries.constant(ring, *window, ring.scalar(comb))
        recon = recon.shift(shift + 1 - int(age))
        for j, cj in enumerate(pair.fermat.weights):
            r = Fraction(k0 * cj, d) + a_vec[j]
            gap = r.numerator // r.denominator
            frac = r - gap
            if frac != sector.multiplicity(j):
                raise IdentityError("fractional part disagrees with the sector",
                                    {"sector": list(sector.exps), "j": j})
            recon = recon * gamma_shift_product(Fraction(cj), Fraction(0), frac,
                                                gap, ring, *window)
            recon = recon.shift(-gap)
        diff = i_value - recon
        if not diff.is_zero():
            z_bad = sorted(diff.terms)[0]
            raise IdentityError(
                "Gamma factorization residual on the X side",
                {"sector": list(sector.exps), "z": z_bad, "degree": list(degs),
                 "left": str(i_value.coefficient(z_bad)),
                 "right": str(recon.coefficient(z_bad))})


def _verify_factorization_y(pair: LGPair, i_series: CohSeries, h_series: CohSeries):
    """Y-side analogue; per-j gaps are non-positive, so the check is
    cross-multiplied: I * prod_j (level factors) against the fiber ratio."""
    d = pair.fermat.degree
    window = _wide_window(i_series.orders, pair)
    for k0, k, sectors in _index_tuples(pair, i_series.orders.t_order):
        sector = (pair.grading ** k0).inverse()
        comb = Fraction(1)
        for g, mult in zip(sectors, k):
            if mult:
                sector = sector * (g ** mult)
                comb /= factorial(mult)
        n_g = sector.fixed_dim()
        if n_g == 0:
            continue
        ring = SeriesRing(d, i_series.orders.lam_order, n_g)
        degs = (k0,) + tuple(k)
        a_vec = _a_vector(pair, sectors, k)
        age = sector.age()
        if age.denominator != 1:
            raise IdentityError("z-grading needs integral ages (SL group)")
        shift = _age_shift(sectors, k)

        i_value = ZLaurentSeries.constant(ring, *window, ring.one())
        for l in range(k0):
            i_value = i_value * ZLaurentSeries(
                ring, *window,
                {0: (ring.lam() + ring.hyperplane()) * Fraction(-d),
                 1: ring.scalar(Fraction(-l))})
        for j, cj in enumerate(pair.fermat.weights):
            v = Fraction(k0 * cj, d) - a_vec[j]
            numerator_levels, denominator_levels = y_ray_levels(v)
            for level in numerator_levels:
                i_value = i_value * ZLaurentSeries(
                    ring, *window,
                    {0: ring.monomial(h=1, coeff=Fraction(cj)),
                     1: ring.scalar(level)})
            for level in denominator_levels:
                i_value = i_value * _inverse_linear_h_z(ring, Fraction(cj), level,
                                                        *window)
        i_value = (i_value * ring.scalar(comb)).shift(1 - sum(k))
        _assert_is_clamp(i_series, sector.exps, degs, i_value, "I^Y")

        h_stored = h_series.coefficient(sector.exps, shift, degs)
        expected_atoms = _y_atoms(pair, k0, a_vec)
        expected_h = SectorValue(
            ring, {(0, 0, 0, expected_atoms): Cyclotomic.from_rational(d, comb)})
        z_min, z_max = h_series.orders.z_window
        if (z_min <= shift <= z_max) and h_stored != expected_h:
            raise IdentityError("H-function term disagrees with its closed form",
                                {"sector": list(sector.exps), "degree": list(degs)})

        # cross-multiplied identity: a per-j atom ratio of gap n rewrites as
        # z^-n prod(...); negative gaps multiply the I side, positive
        # gaps (net numerator factors) multiply the operator side.
        lhs = i_value
        rhs = ZLaurentSeries.constant(ring, *window, ring.scalar(comb))
        rhs = rhs.shift(shift + 1 - int(age))
        rhs = rhs * gamma_shift_product(Fraction(d), Fraction(d), Fraction(0),
                                        k0, ring, *window)
        rhs = rhs.shift(-k0)
        for j, cj in enumerate(pair.fermat.weights):
            v = Fraction(k0 * cj, d) - a_vec[j]
            numerator_levels, denominator_levels = y_ray_levels(v)
            gap = -v - sector.multiplicity(j)
            if gap.denominator != 1 or \
                    gap != len(numerator_levels) - len(denominator_levels):
                raise IdentityError(
                    "Gamma-ratio gap disagrees with the level enumeration",
                    {"sector": list(sector.exps), "j": j, "gap": str(gap),
                     "numerator": [str(l) for l in numerator_levels],
                     "denominator": [str(l) for l in denominator_levels]})
            if gap >= 0:
                rhs = rhs * gamma_shift_product(Fraction(0), Fraction(-cj),
                                                sector.multiplicity(j),
                                                int(gap), ring, *window)
                rhs = rhs.shift(-int(gap))
            else:
                lhs = lhs * gamma_shift_product(Fraction(0), Fraction(-cj),
                                                -v, -int(gap), ring, *window)
                lhs = lhs.shift(int(gap))
        diff = lhs - rhs
        if not diff.is_zero():
            z_bad = sorted(diff.terms)[0]
            raise IdentityError(
                "Gamma factorization residual on the Y side",
                {"sector": list(sector.exps), "z": z_bad, "degree": list(degs),
                 "left": str(lhs.coefficient(z_bad)),
                 "right": str(rhs.coefficient(z_bad))})


# ---------------------------------------------------------------------------
# the continued series H^Y' and its building blocks
# ---------------------------------------------------------------------------

def ubar_block(pair: LGPair, xi_power: int, ring: SeriesRing) -> SectorValue:
    """(e^{d(lam+H)} - 1) / (d (e^{lam+H} xi^b - 1)) in the given ring.

    For xi^b = 1 the quotient is the geometric sum (1/d) sum_a e^{a(lam+H)}.
    """
    d = pair.fermat.degree
    b = xi_power % d
    x = ring.lam() + ring.hyperplane()
    if b == 0:
        total = ring.zero()
        for a in range(d):
            total = total + series_exp(x * a)
        return total * Fraction(1, d)
    numerator = series_exp(x * d) - 1
    denominator = (series_exp(x) * ring.root(b) - 1) * d
    return numerator * series_invert(denominator)


def h_continued(pair: LGPair, orders: Orders) -> CohSeries:
    """The analytic continuation H^Y' as a closed-form t-series.

    t^(d lam/tau) sum_k prod (t^{g_s})^{k_s} z^{(age-1)k_s} / k_s! *
    sum_m t^m/(m! prod_j Gamma-atom) *
    sum_b [(e^{d(lam+H)}-1) / (d(e^{lam+H} xi^{b+m}-1))] on 1~_{j^{-b}} prod g_s^{k_s};
    the block with xi^{b+m} = 1 is the geometric sum.
    """
    pair.require_cy()
    d = pair.fermat.degree
    terms: dict = {}
    block_cache: dict = {}
    for m, k, sectors in _index_tuples(pair, orders.t_order):
        base_sector = pair.identity
        comb = Fraction(1, factorial(m))
        for g, mult in zip(sectors, k):
            if mult:
                base_sector = base_sector * (g ** mult)
                comb /= factorial(mult)
        a_vec = _a_vector(pair, sectors, k)
        atoms = _x_atoms(pair, m, a_vec)
        z_shift = _age_shift(sectors, k)
        for b in range(d):
            sector = base_sector * ((pair.grading ** b).inverse())
            n_g = sector.fixed_dim()
            if n_g == 0:
                continue
            ring = SeriesRing(d, orders.lam_order, n_g)
            cache_key = ((b + m) % d, n_g)
            if cache_key not in block_cache:
                block_cache[cache_key] = ubar_block(pair, b + m, ring)
            block = block_cache[cache_key]
            value = block.scale_atoms(atoms) * ring.scalar(comb)
            key = (sector.exps, z_shift, (m,) + tuple(k))
            terms[key] = terms[key] + value if key in terms else value
    variables = ("t",) + tuple(g.exps for g in pair.positive_dim_sectors())
    return CohSeries("y", pair, variables, orders, terms,
                     ((TOKEN_T_LAMBDA, 1),))


def residue_unit_check(m: int, b: int, d: int,
                       expected: Fraction | None = None) -> bool:
    """Residue of Gamma(ds + b + d(lam+H)/tau) at its m-th pole equals
    (-1)^m / (d m!).

    Derivation is symbolic: the pole sits where the argument is -m; the
    functional equation Gamma(x) = Gamma(x+1)/x applied m+1 times exposes a
    simple pole with residue 1/((-1)^m m!) in the argument, and the
    reparameterization s -> argument contributes a Jacobian 1/d.
    ``expected`` overrides the closed-form target (self-test hook).
    """
    if m < 0 or not 0 <= b < d:
        raise ValueError("need m >= 0 and 0 <= b < d")
    # pole location: ds + b + d*u = -m at s = -u - (b+m)/d, with u = (lam+H)/tau.
    s_u, s_const = Fraction(-1), Fraction(-(b + m), d)
    arg_u = d * s_u + d          # coefficient of u in the argument
    arg_const = d * s_const + b  # constant part of the argument
    if arg_u != 0 or arg_const != -m:
        return False
    # Gamma(-m + y) = Gamma(1 + y) / prod_{i=0}^{m} (y - m + i); residue in y:
    denom = Fraction(1)
    for i in range(m):
        denom *= (i - m)
    residue_y = Fraction(1) / denom  # = (-1)^m / m!
    residue_s = residue_y / d        # y = d * (s - s0)
    if expected is None:
        expected = Fraction((-1) ** m, d * factorial(m))
    return residue_s == expected


# ---------------------------------------------------------------------------
# the FJRW I-function
# ---------------------------------------------------------------------------

def z_ddt_distinguished(series: CohSeries) -> CohSeries:
    """z d/dt of a t^(d lam/tau)-dressed series, prefactor term retained."""
    return series.z_ddt_var(0, prefactor_lam_multiple=series.pair.fermat.degree)


def assert_lambda_divisibility(series: CohSeries) -> None:
    """Every positive-dimensional sector coefficient of z d/dt I^X must carry
    lam^{N_g}; the degree -1 slice (prefactor derivative) carries lam^1."""
    for (exps, z, degs), value in series.terms.items():
        n_g = GroupElement(series.pair.fermat, exps).fixed_dim()
        required = 1 if degs[0] < 0 else n_g
        if n_g > 0 and value.lambda_valuation() < required:
            raise IdentityError(
                "lambda divisibility failure",
                {"sector": list(exps), "z": z, "degree": list(degs),
                 "required": required, "found": value.lambda_valuation()})


def fjrw_i_function(pair: LGPair, orders: Orders,
                    sign_convention: str = "display") -> CohSeries:
    """lim_{lam->0} Delta-circ(z d/dt I^X), asserted divisible first.

    The limit exists because every N_g > 0 coefficient is divisible by
    lam^{N_g} (checked, not assumed); the result is narrow-supported.
    """
    from .transforms import delta_circ

    pair.require_cy()
    pair.require_sl()
    derivative = z_ddt_distinguished(i_function_x(pair, orders))
    assert_lambda_divisibility(derivative)
    limited = derivative.nonequivariant_limit()
    result = delta_circ(pair, sign_convention=sign_convention).apply(limited)
    for (exps, _, _) in result.terms:
        if not pair.is_narrow(GroupElement(pair.fermat, exps)):
            raise IdentityError("FJRW output not narrow-supported",
                                {"sector": list(exps)})
    return result


# ---------------------------------------------------------------------------
# serialization (structured text with display strings)
# ---------------------------------------------------------------------------

def _atom_to_json(atom: GammaAtom) -> list:
    return [str(atom.weight), str(atom.h_weight), str(atom.offset)]

def _atom_from_json(data) -> GammaAtom:
    return GammaAtom(Fraction(data[0]), Fraction(data[2]), Fraction(data[1]))


def _value_to_json(value: SectorValue) -> dict:
    monomials = []
    for (lam, h, tau, atoms) in sorted(value.terms):
        coeff = value.terms[(lam, h, tau, atoms)]
        monomials.append({
            "lam": lam, "h": h, "tau": tau,
            "atoms": [[_atom_to_json(a), e] for a, e in atoms],
            "coeff": [str(c) for c in coeff.coeffs],
        })
    return {"display": str(value), "monomials": monomials}


def _value_from_json(data: dict, ring: SeriesRing) -> SectorValue:
    terms = {}
    for mono in data["monomials"]:
        atoms = tuple(sorted((_atom_from_json(a), int(e)) for a, e in mono["atoms"]))
        coeff = Cyclotomic(ring.order, tuple(Fraction(c) for c in mono["coeff"]))
        terms[(mono["lam"], mono["h"], mono["tau"], atoms)] = coeff
    return SectorValue(ring, terms)


def serialize_series(series: CohSeries) -> dict:
    """Structured-text dump: {sector, z-exp, t-multidegree} -> coefficient."""
    from .lgmodel import pair_to_dict

    return {
        "side": series.side,
        "c_twist": series.c_twist,
        "pair": pair_to_dict(series.pair),
        "orders": series.orders.as_dict(),
        "tokens": [[name, exp] for name, exp in series.tokens],
        "variables": [list(v) if isinstance(v, tuple) else v
                      for v in series.variables],
        "terms": [
            {"sector": list(exps), "z": z, "degree": list(degs),
             "value": _value_to_json(value)}
            for (exps, z, degs), value in sorted(series.terms.items())
        ],
    }


def deserialize_series(data: dict) -> CohSeries:
    from .cohseries import _sector_nilpotency
    from .lgmodel import load_pair

    pair = load_pair(data["pair"])
    orders = Orders(t_order=data["orders"]["T"], lam_order=data["orders"]["lambda"],
                    z_min=data["orders"]["zWindow"][0],
                    z_max=data["orders"]["zWindow"][1])
    variables = tuple(tuple(v) if isinstance(v, list) else v
                      for v in data["variables"])
    terms = {}
    for item in data["terms"]:
        exps = tuple(item["sector"])
        ring = SeriesRing(pair.fermat.degree, orders.lam_order,
                          _sector_nilpotency(data["side"], pair, exps))
        terms[(exps, item["z"], tuple(item["degree"]))] = \
            _value_from_json(item["value"], ring)
    return CohSeries(data["side"], pair, variables, orders, terms,
                     tuple((n, e) for n, e in data["tokens"]),
                     c_twist=data["c_twist"])
