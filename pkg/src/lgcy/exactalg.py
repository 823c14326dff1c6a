"""Exact scalar and truncated-series arithmetic.

Everything downstream runs on four layers built here:

* ``Fraction`` (re-exported as ``Rational``) for exact rationals,
* ``Cyclotomic`` for elements of Q(xi) with xi a primitive root of unity,
  kept in the canonical basis 1, xi, ..., xi^(phi(n)-1) modulo the n-th
  cyclotomic polynomial,
* ``SectorValue`` for truncated polynomials in the equivariant parameter
  ``lam`` and a nilpotent hyperplane class ``H`` (H^N = 0 on a sector of
  nilpotency N), with monomials optionally dressed by an opaque invertible
  token ``tau`` (the 2*pi*i token) and by formal Gamma atoms,
* ``ZLaurentSeries`` for finitely supported z-Laurent series with
  ``SectorValue`` coefficients inside an explicit window.

No floating point anywhere; equality is equality of canonical forms.
All values are immutable after construction and safe to share.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

__all__ = [
    "Rational",
    "NonUnitError",
    "OrderMismatchError",
    "ExactDivisionError",
    "Cyclotomic",
    "GammaAtom",
    "SeriesRing",
    "SectorValue",
    "ZLaurentSeries",
    "series_exp",
    "series_invert",
    "divide_by_lambda_plus_h",
    "gamma_ratio_rewrite",
    "gamma_shift_product",
    "bernoulli_number",
    "bernoulli_poly",
    "euler_phi",
    "cyclotomic_polynomial",
]


class NonUnitError(ArithmeticError):
    """Inversion of a value whose constant term vanishes."""


class OrderMismatchError(ArithmeticError):
    """Mixing cyclotomic values or series of incompatible parameters."""


class ExactDivisionError(ArithmeticError):
    """A division that was promised exact left a remainder."""


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the field Q(xi_n)
# ---------------------------------------------------------------------------

def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of monic integer polynomials, ascending coefficients."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        coeff = num[k + len(den) - 1]
        out[k] = coeff
        if coeff:
            for i, d in enumerate(den):
                num[k + i] -= coeff * d
    if any(num[: len(den) - 1]):
        raise ExactDivisionError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending, monic, exact integers."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            phi_d = cyclotomic_polynomial(d)
            new = [0] * (len(den) + len(phi_d) - 1)
            for i, a in enumerate(den):
                if a:
                    for j, b in enumerate(phi_d):
                        new[i + j] += a * b
            den = new
    return tuple(_poly_divide_exact(num, den))


@lru_cache(maxsize=None)
def _power_reduction(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """xi^m in the canonical basis for phi(n) <= m <= 2*phi(n) - 2 plus n-1."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    top = max(2 * phi - 2, n - 1)
    rows: list[tuple[Fraction, ...]] = []
    # x^phi = -(poly[0] + ... + poly[phi-1] x^{phi-1}), poly monic
    current = [Fraction(-poly[i]) for i in range(phi)]
    for _ in range(phi, top + 1):
        rows.append(tuple(current))
        shifted = [Fraction(0)] + current[:-1]
        lead = current[-1]
        if lead:
            for i in range(phi):
                shifted[i] += lead * Fraction(-poly[i])
        current = shifted
    return tuple(rows)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected a rational scalar, got {type(value).__name__}")


class Cyclotomic:
    """Element of Q(xi_n) in reduced canonical form.

    ``coeffs`` always has length phi(n); two values are equal iff their
    coefficient tuples are equal, so reduction gives free equality tests.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        phi = euler_phi(order)
        coeffs = tuple(coeffs)
        if len(coeffs) != phi:
            raise ValueError("coefficient vector has wrong length")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("Cyclotomic is immutable")

    # -- constructors -----------------------------------------------------
    @staticmethod
    def from_rational(order: int, value) -> "Cyclotomic":
        value = _as_fraction(value)
        phi = euler_phi(order)
        return Cyclotomic(order, (value,) + (Fraction(0),) * (phi - 1))

    @staticmethod
    def zero(order: int) -> "Cyclotomic":
        return Cyclotomic.from_rational(order, 0)

    @staticmethod
    def one(order: int) -> "Cyclotomic":
        return Cyclotomic.from_rational(order, 1)

    @staticmethod
    def root(order: int, power: int = 1) -> "Cyclotomic":
        """xi_n^power, reduced."""
        power %= order
        phi = euler_phi(order)
        if power < phi:
            coeffs = [Fraction(0)] * phi
            coeffs[power] = Fraction(1)
            return Cyclotomic(order, coeffs)
        return Cyclotomic(order, _power_reduction(order)[power - phi])

    # -- ring structure ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"cyclotomic orders differ: {self.order} vs {other.order}")
            return other
        return Cyclotomic.from_rational(self.order, other)

    def __add__(self, other):
        other = self._coerce(other)
        return Cyclotomic(self.order,
                          tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        phi = len(self.coeffs)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        out = conv[:phi]
        table = _power_reduction(self.order)
        for m in range(phi, len(conv)):
            c = conv[m]
            if c:
                row = table[m - phi]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return Cyclotomic(self.order, out)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Field inverse via extended Euclid against Phi_n (irreducible)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        if self.is_rational():
            return Cyclotomic.from_rational(self.order, 1 / self.coeffs[0])
        modulus = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        a = list(self.coeffs)
        r0, r1 = modulus, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            r1 = _poly_trim(r1)
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in s1]
                coeffs += [Fraction(0)] * (len(self.coeffs) - len(coeffs))
                return Cyclotomic(self.order, coeffs[: len(self.coeffs)])
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return (isinstance(other, Cyclotomic)
                and self.order == other.order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"Cyclotomic({self.order}, {self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*xi" if c != 1 else "xi")
            else:
                parts.append(f"{c}*xi^{i}" if c != 1 else f"xi^{i}")
        return " + ".join(parts) if parts else "0"


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    b = _poly_trim(list(b))
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for k in range(len(q) - 1, -1, -1):
        coeff = a[k + len(b) - 1] * inv_lead
        q[k] = coeff
        if coeff:
            for i, d in enumerate(b):
                a[k + i] -= coeff * d
    return q, _poly_trim(a[: len(b) - 1])


def cyclo_mul(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    """Product in reduced canonical form; orders must agree."""
    if not isinstance(b, Cyclotomic) or a.order != b.order:
        raise OrderMismatchError("cyclotomic orders differ")
    return a * b


# ---------------------------------------------------------------------------
# Gamma atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class GammaAtom:
    """The opaque symbol Gamma(1 - weight*beta - h_weight*H/tau - offset).

    beta = lam/tau is never expanded; atoms are compared by key and only
    ever combined through integer-offset rewrites (``gamma_shift_product``).
    """

    weight: Fraction
    offset: Fraction
    h_weight: Fraction = Fraction(0)

    def __str__(self) -> str:
        parts = ["1"]
        if self.weight:
            parts.append(f"- {self.weight}*beta")
        if self.h_weight:
            parts.append(f"- {self.h_weight}*H/tau")
        if self.offset:
            parts.append(f"- {self.offset}")
        return "Gamma(" + " ".join(parts) + ")"


AtomsKey = tuple  # sorted tuple of (GammaAtom, nonzero int exponent)


def _merge_atoms(a: AtomsKey, b: AtomsKey) -> AtomsKey:
    if not a:
        return b
    if not b:
        return a
    acc: dict[GammaAtom, int] = dict(a)
    for atom, exp in b:
        new = acc.get(atom, 0) + exp
        if new:
            acc[atom] = new
        else:
            acc.pop(atom, None)
    return tuple(sorted(acc.items()))


# ---------------------------------------------------------------------------
# truncated sector values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesRing:
    """Truncation context: cyclotomic order, lam-order, H-nilpotency.

    A monomial lam^a H^b survives iff a + b <= lam_order and b < nilpotency,
    i.e. the quotient modulo H^N and total (lam, H)-degree > lam_order.
    Working modulo an ideal keeps every operation a true ring map.
    """

    order: int
    lam_order: int
    nilpotency: int = 1

    def __post_init__(self):
        if self.order < 1 or self.lam_order < 0 or self.nilpotency < 1:
            raise ValueError("invalid ring parameters")

    def zero(self) -> "SectorValue":
        return SectorValue(self, {})

    def one(self) -> "SectorValue":
        return self.scalar(1)

    def scalar(self, value) -> "SectorValue":
        if not isinstance(value, Cyclotomic):
            value = Cyclotomic.from_rational(self.order, value)
        elif value.order != self.order:
            raise OrderMismatchError("scalar has wrong cyclotomic order")
        return SectorValue(self, {(0, 0, 0, ()): value})

    def root(self, power: int = 1) -> "SectorValue":
        return self.scalar(Cyclotomic.root(self.order, power))

    def lam(self, power: int = 1) -> "SectorValue":
        return self.monomial(lam=power)

    def hyperplane(self, power: int = 1) -> "SectorValue":
        return self.monomial(h=power)

    def tau(self, power: int = 1) -> "SectorValue":
        return self.monomial(tau=power)

    def monomial(self, lam: int = 0, h: int = 0, tau: int = 0,
                 atoms: AtomsKey = (), coeff=1) -> "SectorValue":
        if not isinstance(coeff, Cyclotomic):
            coeff = Cyclotomic.from_rational(self.order, coeff)
        return SectorValue(self, {(lam, h, tau, tuple(sorted(atoms))): coeff})

    def atom(self, atom: GammaAtom, exponent: int = 1) -> "SectorValue":
        return self.monomial(atoms=((atom, exponent),))


class SectorValue:
    """Truncated polynomial over Q(xi): sum of coeff * lam^a H^b tau^t * atoms.

    Monomial keys are (lam, h, tau, atoms).  lam is a non-negative integer
    bounded by the ring's lam_order (negative or fractional lam powers are
    rejected at construction); h < nilpotency; tau any integer (the 2*pi*i
    token is invertible); atoms a canonical multiset of GammaAtom powers.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: SeriesRing, terms: dict):
        clean: dict = {}
        for (lam, h, tau, atoms), coeff in terms.items():
            if not isinstance(lam, int) or lam < 0:
                raise ValueError(f"lam exponent must be a non-negative integer, got {lam!r}")
            if not isinstance(h, int) or h < 0:
                raise ValueError(f"H exponent must be a non-negative integer, got {h!r}")
            if lam + h > ring.lam_order or h >= ring.nilpotency:
                continue
            if not isinstance(coeff, Cyclotomic):
                coeff = Cyclotomic.from_rational(ring.order, coeff)
            if coeff.is_zero():
                continue
            key = (lam, h, tau, atoms)
            prev = clean.get(key)
            coeff = coeff if prev is None else prev + coeff
            if coeff.is_zero():
                clean.pop(key, None)
            else:
                clean[key] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("SectorValue is immutable")

    # -- helpers -------------------------------------------------------------
    def _check(self, other: "SectorValue"):
        if self.ring != other.ring:
            raise OrderMismatchError(
                f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, SectorValue):
            self._check(other)
            return other
        return self.ring.scalar(other)

    # -- ring operations -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = terms.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
        return SectorValue(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return SectorValue(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        ring = self.ring
        out: dict = {}
        for (l1, h1, t1, a1), c1 in self.terms.items():
            for (l2, h2, t2, a2), c2 in other.terms.items():
                lam = l1 + l2
                h = h1 + h2
                if lam + h > ring.lam_order or h >= ring.nilpotency:
                    continue
                key = (lam, h, t1 + t2, _merge_atoms(a1, a2))
                prod = c1 * c2
                prev = out.get(key)
                total = prod if prev is None else prev + prod
                if total.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = total
        return SectorValue(ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return series_invert(self) ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = self.ring.scalar(other)
        return (isinstance(other, SectorValue)
                and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items(),
                                             key=lambda kv: kv[0]))))

    # -- queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Cyclotomic:
        return self.terms.get((0, 0, 0, ()), Cyclotomic.zero(self.ring.order))

    def coefficient(self, lam: int = 0, h: int = 0, tau: int = 0,
                    atoms: AtomsKey = ()) -> Cyclotomic:
        return self.terms.get((lam, h, tau, tuple(sorted(atoms))),
                              Cyclotomic.zero(self.ring.order))

    def has_atoms(self) -> bool:
        return any(key[3] for key in self.terms)

    def atom_multiset(self) -> set:
        return {key[3] for key in self.terms}

    def lambda_valuation(self) -> int:
        """Largest k with lam^k dividing every monomial; inf -> lam_order+1."""
        if not self.terms:
            return self.ring.lam_order + 1
        return min(key[0] for key in self.terms)

    def h_exponents(self) -> set[int]:
        return {key[1] for key in self.terms}

    def nonequivariant_limit(self) -> "SectorValue":
        """Set lam to 0: keep only lam-degree-zero monomials."""
        return SectorValue(self.ring,
                           {k: c for k, c in self.terms.items() if k[0] == 0})

    def with_ring(self, ring: SeriesRing) -> "SectorValue":
        """Re-truncate into another ring of the same cyclotomic order."""
        if ring.order != self.ring.order:
            raise OrderMismatchError("cannot change cyclotomic order")
        return SectorValue(ring, dict(self.terms))

    def scale_atoms(self, atoms: AtomsKey) -> "SectorValue":
        return SectorValue(self.ring,
                           {(l, h, t, _merge_atoms(a, atoms)): c
                            for (l, h, t, a), c in self.terms.items()})

    def map_monomials(self, fn) -> "SectorValue":
        """fn(key, coeff) -> (key, coeff) or None (drop)."""
        out: dict = {}
        for key, coeff in self.terms.items():
            mapped = fn(key, coeff)
            if mapped is None:
                continue
            k2, c2 = mapped
            prev = out.get(k2)
            total = c2 if prev is None else prev + c2
            if total.is_zero():
                out.pop(k2, None)
            else:
                out[k2] = total
        return SectorValue(self.ring, out)

    def __repr__(self):
        return f"SectorValue({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (lam, h, tau, atoms) in sorted(self.terms):
            coeff = self.terms[(lam, h, tau, atoms)]
            bits = [f"({coeff})"]
            if lam:
                bits.append(f"lam^{lam}")
            if h:
                bits.append(f"H^{h}")
            if tau:
                bits.append(f"tau^{tau}")
            for atom, exp in atoms:
                bits.append(f"{atom}^{exp}" if exp != 1 else str(atom))
            parts.append("*".join(bits))
        return " + ".join(parts)


def series_exp(x: SectorValue) -> SectorValue:
    """Sum x^n / n!, exact at truncation order.

    Requires a nilpotent-plus-truncated argument: zero constant term and
    every monomial of positive (lam, H)-degree, no atoms and no bare tau
    powers (the exponential of a unit is outside the model).
    """
    for (lam, h, tau, atoms) in x.terms:
        if atoms:
            raise NonUnitError("cannot exponentiate Gamma atoms")
        if lam + h == 0:
            raise NonUnitError("series_exp needs a zero constant term")
    result = x.ring.one()
    power = x.ring.one()
    bound = x.ring.lam_order + x.ring.nilpotency
    fact = 1
    for n in range(1, bound + 1):
        power = power * x
        if power.is_zero():
            break
        fact *= n
        result = result + power * Fraction(1, fact)
    return result


def series_invert(x: SectorValue) -> SectorValue:
    """y with x*y = 1 to truncation order.

    The constant term must be a nonzero cyclotomic and every other monomial
    must have positive (lam, H)-degree; geometric-sum callers that hold a
    zero constant term get a NonUnitError and must expand by hand.
    """
    const = x.constant_term()
    if const.is_zero():
        raise NonUnitError("series_invert: zero constant term")
    for (lam, h, tau, atoms) in x.terms:
        if atoms:
            raise NonUnitError("cannot invert Gamma atoms")
        if lam + h == 0 and (lam, h, tau, atoms) != (0, 0, 0, ()):
            raise NonUnitError("non-nilpotent correction term")
    inv_const = const.inverse()
    nil = (x * inv_const) - 1
    result = x.ring.one()
    power = x.ring.one()
    bound = x.ring.lam_order + x.ring.nilpotency
    for k in range(1, bound + 1):
        power = power * nil
        if power.is_zero():
            break
        result = result + power if k % 2 == 0 else result - power
    return result * inv_const


def divide_by_lambda_plus_h(x: SectorValue) -> tuple[SectorValue, int]:
    """Exact quotient x / (lam + H) and the total degree it is valid to.

    Solves (lam + H) * W = x layer by layer in H; raises ExactDivisionError
    if any layer leaves a lam-free remainder.  Dividing by a degree-one
    element costs one order: the quotient is exact for monomials of total
    (lam, H)-degree <= lam_order - 1, and entries above that are dropped.
    """
    ring = x.ring
    # group into slices indexed by (tau, atoms) then by h
    slices: dict[tuple, dict[int, dict[int, Cyclotomic]]] = {}
    for (lam, h, tau, atoms), coeff in x.terms.items():
        slices.setdefault((tau, atoms), {}).setdefault(h, {})[lam] = coeff
    out: dict = {}
    valid = ring.lam_order - 1
    for (tau, atoms), layers in slices.items():
        prev: dict[int, Cyclotomic] = {}
        for h in range(ring.nilpotency):
            v = dict(layers.get(h, {}))
            for lam, coeff in prev.items():
                v[lam] = v.get(lam, Cyclotomic.zero(ring.order)) - coeff
            if not v.get(0, Cyclotomic.zero(ring.order)).is_zero():
                raise ExactDivisionError(
                    f"not divisible by (lam + H): remainder at H^{h}, tau^{tau}")
            w = {lam - 1: c for lam, c in v.items() if lam >= 1 and not c.is_zero()}
            for lam, coeff in w.items():
                if lam + h <= valid:
                    out[(lam, h, tau, atoms)] = coeff
            prev = w
    return SectorValue(ring, out), valid


# ---------------------------------------------------------------------------
# z-Laurent layer
# ---------------------------------------------------------------------------

class ZLaurentSeries:
    """Finitely supported map z-exponent -> SectorValue inside a window.

    The window is part of the value: products clamp to it, so identities
    are checked per fixed truncation.  Windows of operands must agree.
    """

    __slots__ = ("ring", "z_min", "z_max", "terms")

    def __init__(self, ring: SeriesRing, z_min: int, z_max: int, terms: dict):
        if z_min > z_max:
            raise ValueError("empty z window")
        clean = {}
        for z, value in terms.items():
            if z < z_min or z > z_max:
                continue
            if not isinstance(value, SectorValue):
                value = ring.scalar(value)
            if value.is_zero():
                continue
            clean[z] = value
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "z_min", z_min)
        object.__setattr__(self, "z_max", z_max)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("ZLaurentSeries is immutable")

    @staticmethod
    def constant(ring: SeriesRing, z_min: int, z_max: int, value) -> "ZLaurentSeries":
        return ZLaurentSeries(ring, z_min, z_max, {0: value})

    def _check(self, other: "ZLaurentSeries"):
        if (self.ring, self.z_min, self.z_max) != (other.ring, other.z_min, other.z_max):
            raise OrderMismatchError("z-window or ring mismatch")

    def __add__(self, other):
        if not isinstance(other, ZLaurentSeries):
            other = ZLaurentSeries.constant(self.ring, self.z_min, self.z_max, other)
        self._check(other)
        terms = dict(self.terms)
        for z, v in other.terms.items():
            terms[z] = terms[z] + v if z in terms else v
        return ZLaurentSeries(self.ring, self.z_min, self.z_max, terms)

    __radd__ = __add__

    def __neg__(self):
        return ZLaurentSeries(self.ring, self.z_min, self.z_max,
                              {z: -v for z, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ZLaurentSeries):
            other = ZLaurentSeries.constant(self.ring, self.z_min, self.z_max, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ZLaurentSeries):
            # scalar or SectorValue multiplier
            if isinstance(other, SectorValue) or isinstance(other, (int, Fraction, Cyclotomic)):
                return ZLaurentSeries(self.ring, self.z_min, self.z_max,
                                      {z: v * other for z, v in self.terms.items()})
            return NotImplemented
        self._check(other)
        out: dict = {}
        for z1, v1 in self.terms.items():
            for z2, v2 in other.terms.items():
                z = z1 + z2
                if z < self.z_min or z > self.z_max:
                    continue
                prod = v1 * v2
                out[z] = out[z] + prod if z in out else prod
        return ZLaurentSeries(self.ring, self.z_min, self.z_max, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "ZLaurentSeries":
        return ZLaurentSeries(self.ring, self.z_min, self.z_max,
                              {z + k: v for z, v in self.terms.items()})

    def coefficient(self, z: int) -> SectorValue:
        return self.terms.get(z, self.ring.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def map_values(self, fn) -> "ZLaurentSeries":
        return ZLaurentSeries(self.ring, self.z_min, self.z_max,
                              {z: fn(v) for z, v in self.terms.items()})

    def with_window(self, z_min: int, z_max: int) -> "ZLaurentSeries":
        return ZLaurentSeries(self.ring, z_min, z_max, dict(self.terms))

    def __eq__(self, other):
        return (isinstance(other, ZLaurentSeries)
                and self.ring == other.ring
                and (self.z_min, self.z_max) == (other.z_min, other.z_max)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.z_min, self.z_max,
                     tuple(sorted((z, hash(v)) for z, v in self.terms.items()))))

    def __repr__(self):
        inner = " + ".join(f"({v})*z^{z}" for z, v in sorted(self.terms.items()))
        return f"ZLaurent[{self.z_min},{self.z_max}]({inner or '0'})"


def gamma_shift_product(lam_weight: Fraction, h_weight: Fraction, base: Fraction,
                        steps: int, ring: SeriesRing,
                        z_min: int, z_max: int) -> ZLaurentSeries:
    """prod_{l=0}^{steps-1} (x - l*z) with x = -lam_weight*lam - h_weight*H - base*z.

    This is the only rewrite connecting Gamma atoms whose offsets differ by
    integers: Gamma(1 - L - base) / Gamma(1 - L - base - steps) equals
    z^(-steps) times this product after undoing the z-grading conjugation.
    steps = 0 returns 1 (the empty product).
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    result = ZLaurentSeries.constant(ring, z_min, z_max, ring.one())
    lin_sector = ring.zero()
    if lam_weight:
        lin_sector = lin_sector + ring.monomial(lam=1, coeff=-lam_weight)
    if h_weight and ring.nilpotency > 1:
        lin_sector = lin_sector + ring.monomial(h=1, coeff=-h_weight)
    for l in range(steps):
        factor = ZLaurentSeries(ring, z_min, z_max,
                                {0: lin_sector, 1: ring.scalar(-(base + l))})
        result = result * factor
    return result


def gamma_ratio_rewrite(weight: Fraction, base: Fraction, steps: int,
                        ring: SeriesRing, z_min: int = -2, z_max: int = 8) -> ZLaurentSeries:
    """Spec-facing wrapper: x = -weight*lam - base*z, product over the gap."""
    return gamma_shift_product(_as_fraction(weight), Fraction(0),
                               _as_fraction(base), steps, ring, z_min, z_max)


# ---------------------------------------------------------------------------
# Bernoulli data for the Delta^c operator
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (generating function z e^{zx}/(e^z - 1)).

    Recurrence sum_{k<=n} C(n+1,k) B_k = 0, exact.
    """
    from math import comb
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for k in range(n):
        acc += comb(n + 1, k) * bernoulli_number(k)
    return -acc / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum C(n,k) B_k x^{n-k}, exact."""
    from math import comb
    x = _as_fraction(x)
    return sum((comb(n, k) * bernoulli_number(k) * x ** (n - k)
                for k in range(n + 1)), Fraction(0))
