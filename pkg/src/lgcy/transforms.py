"""Sector-blockwise linear operators on the symplectic space.

A plain ``Transform`` stores, per input sector, a list of (output basis
element, entry) with z-Laurent entries; ``apply`` is linear and exact.
The graded operators z^Gr and tau^(deg0/2) shift exponents per monomial,
so they get dedicated classes, as do the two operators whose entries are
not series at all: the generic-s twist operator (entries are exponentials
of s-linear forms) and its euler specializations (entries carry rational
lam-exponents, which never enter a CohSeries untested).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exactalg import (
    ExactDivisionError,
    GammaAtom,
    SectorValue,
    SeriesRing,
    ZLaurentSeries,
    bernoulli_poly,
    divide_by_lambda_plus_h,
)
from .cohseries import CohSeries
from .lgmodel import GroupElement, LGPair, SectorBasisElement

__all__ = [
    "Transform",
    "i_c",
    "delta_circ",
    "u_bar",
    "ubar_block",
    "gamma_class_op",
    "z_grading",
    "deg0_scaling",
    "big_u",
    "pullback_to_z",
    "divide_or_none",
    "DeltaDiamond",
    "delta_diamond",
    "GenericSTransform",
    "delta_c_generic",
    "SpecializedEntry",
    "delta_c_specialized",
    "delta_c_log_entry",
]


class Transform:
    """Blockwise linear operator; blocks: input exps -> ((basis elt, entry), ...).

    Entries are SectorValue (z-degree zero) or ZLaurentSeries.  Application
    promotes each input coefficient into the output sector's ring, so X-side
    scalars multiply H-carrying entries without losing nilpotency headroom.
    """

    def __init__(self, pair: LGPair, side_in: str, side_out: str, blocks: dict,
                 name: str = "", twist_in=None, twist_out=None,
                 symplectic_claimed: bool = False):
        self.pair = pair
        self.side_in = side_in
        self.side_out = side_out
        self.blocks = {tuple(k): tuple(v) for k, v in blocks.items()}
        self.name = name
        self.twist_in = twist_in
        self.twist_out = twist_out
        self.symplectic_claimed = symplectic_claimed

    def _out_ring(self, exps: tuple, lam_order: int) -> SeriesRing:
        nilp = 1
        if self.side_out in ("y", "z"):
            nilp = max(1, GroupElement(self.pair.fermat, exps).fixed_dim())
        return SeriesRing(self.pair.fermat.degree, lam_order, nilp)

    def apply(self, series: CohSeries) -> CohSeries:
        if series.side != self.side_in:
            raise ValueError(f"{self.name}: expected side {self.side_in!r}, "
                             f"got {series.side!r}")
        if self.twist_in is not None and series.c_twist != self.twist_in:
            raise ValueError(f"{self.name}: twist mismatch")
        z_min, z_max = series.orders.z_window
        out_terms: dict = {}
        for (exps, z, degs), value in series.terms.items():
            for element, entry in self.blocks.get(exps, ()):
                ring = self._out_ring(element.g.exps, series.orders.lam_order)
                promoted = value.with_ring(ring)
                if isinstance(entry, ZLaurentSeries):
                    for dz, part in entry.terms.items():
                        z_out = z + dz
                        if z_out < z_min or z_out > z_max:
                            continue
                        key = (element.g.exps, z_out, degs)
                        piece = promoted * part.with_ring(ring)
                        if piece.is_zero():
                            continue
                        out_terms[key] = out_terms[key] + piece \
                            if key in out_terms else piece
                else:
                    piece = promoted * (entry.with_ring(ring)
                                        if isinstance(entry, SectorValue)
                                        else ring.scalar(entry))
                    if piece.is_zero():
                        continue
                    key = (element.g.exps, z, degs)
                    out_terms[key] = out_terms[key] + piece \
                        if key in out_terms else piece
        return CohSeries(self.side_out, series.pair, series.variables,
                         series.orders, out_terms, series.tokens,
                         c_twist=self.twist_out)

    def entry(self, in_exps: tuple, out_exps: tuple):
        for element, value in self.blocks.get(tuple(in_exps), ()):
            if element.g.exps == tuple(out_exps):
                return value
        return None

    def __repr__(self):
        return f"Transform({self.name}, {self.side_in}->{self.side_out})"

    def dump(self) -> dict:
        """Per input basis element, the list of (output element, entry)."""
        from .genfun import _value_to_json

        def entry_json(entry):
            if isinstance(entry, ZLaurentSeries):
                return {"zWindow": [entry.z_min, entry.z_max],
                        "coefficients": {str(z): _value_to_json(v)
                                         for z, v in sorted(entry.terms.items())}}
            return _value_to_json(entry)

        return {
            "name": self.name,
            "sides": [self.side_in, self.side_out],
            "blocks": [
                {"input": list(exps),
                 "outputs": [{"sector": list(el.g.exps), "side": el.side,
                              "entry": entry_json(entry)}
                             for el, entry in outputs]}
                for exps, outputs in sorted(self.blocks.items())
            ],
        }


# ---------------------------------------------------------------------------
# the MLK relabeling and the FJRW sign map
# ---------------------------------------------------------------------------

def i_c(pair: LGPair, c: int) -> Transform:
    """phi^0_g -> phi^c_{g j^-c}; a pairing-preserving basis permutation."""
    d = pair.fermat.degree
    for cj in pair.fermat.weights:
        if c * cj >= d:
            raise ValueError("i_c requires c*c_j < d")
    shift = (pair.grading ** c).inverse()
    blocks = {
        g.exps: ((SectorBasisElement("lg", g * shift), 1),)
        for g in pair.group.elements
    }
    return Transform(pair, "lg", "lg", blocks, name=f"i_{c}",
                     twist_in=0, twist_out=c, symplectic_claimed=True)


def delta_circ(pair: LGPair, sign_convention: str = "display") -> Transform:
    """1_g -> (-1)^(sum_j m_j(g)) phi_{g j^-1}, zero on broad images.

    ``sign_convention="shifted"`` uses exponent sum_j m_j(g j) instead; the
    two differ by the constant (-1)^age(j), which no cone-membership
    statement can see.
    """
    pair.require_sl()
    if sign_convention not in ("display", "shifted"):
        raise ValueError("sign_convention must be 'display' or 'shifted'")
    j_inv = pair.grading.inverse()
    blocks = {}
    for g in pair.group.elements:
        target = g * j_inv
        if not pair.is_narrow(target):
            blocks[g.exps] = ()
            continue
        base = g if sign_convention == "display" else g * pair.grading
        sign = (-1) ** int(base.age())
        blocks[g.exps] = ((SectorBasisElement("fjrw", target), sign),)
    return Transform(pair, "x", "fjrw", blocks, name="delta_circ",
                     symplectic_claimed=True)


# ---------------------------------------------------------------------------
# the analytic-continuation operator and its dressings
# ---------------------------------------------------------------------------

def ubar_block(pair: LGPair, xi_power: int, ring: SeriesRing) -> SectorValue:
    from .genfun import ubar_block as _block
    return _block(pair, xi_power, ring)


def u_bar(pair: LGPair, lam_order: int) -> Transform:
    """1_g -> sum_b [(e^{d(lam+H)}-1)/(d(e^{lam+H} xi^b - 1))] 1~_{g j^-b}.

    The b with xi^b = 1 uses the geometric sum; blocks are truncated at the
    output sector's nilpotency.  Outputs on empty Y-sectors are dropped.
    """
    pair.require_cy()
    d = pair.fermat.degree
    cache: dict = {}
    blocks = {}
    for g in pair.group.elements:
        outputs = []
        for b in range(d):
            target = g * ((pair.grading ** b).inverse())
            n_g = target.fixed_dim()
            if n_g == 0:
                continue
            key = (b, n_g)
            if key not in cache:
                ring = SeriesRing(d, lam_order, n_g)
                cache[key] = ubar_block(pair, b, ring)
            outputs.append((SectorBasisElement("y", target), cache[key]))
        blocks[g.exps] = tuple(outputs)
    return Transform(pair, "x", "y", blocks, name="u_bar",
                     symplectic_claimed=True)


def gamma_class_op(pair: LGPair, side: str, inverse: bool = False) -> Transform:
    """Diagonal Gamma-class: atom-valued entries, never evaluated.

    X side: prod_j Gamma(1 - m_j(g) - c_j beta).  Y side additionally
    Gamma(1 - d(lam+H)/tau), with the per-j atoms carrying H.
    """
    exponent = -1 if inverse else 1
    blocks = {}
    for g in pair.group.elements:
        if side == "x":
            ring = SeriesRing(pair.fermat.degree, 0, 1)
            atoms: dict[GammaAtom, int] = {}
            for j, cj in enumerate(pair.fermat.weights):
                atom = GammaAtom(Fraction(cj), g.multiplicity(j))
                atoms[atom] = atoms.get(atom, 0) + exponent
            value = ring.monomial(atoms=tuple(sorted(atoms.items())))
            blocks[g.exps] = ((SectorBasisElement("x", g), value),)
        elif side == "y":
            n_g = g.fixed_dim()
            if n_g == 0:
                blocks[g.exps] = ()
                continue
            ring = SeriesRing(pair.fermat.degree, 0, n_g)
            atoms = {GammaAtom(Fraction(pair.fermat.degree), Fraction(0),
                               Fraction(pair.fermat.degree)): exponent}
            for j, cj in enumerate(pair.fermat.weights):
                atom = GammaAtom(Fraction(0), g.multiplicity(j), Fraction(-cj))
                atoms[atom] = atoms.get(atom, 0) + exponent
            value = ring.monomial(atoms=tuple(sorted(atoms.items())))
            blocks[g.exps] = ((SectorBasisElement("y", g), value),)
        else:
            raise ValueError("side must be 'x' or 'y'")
    suffix = "^-1" if inverse else ""
    return Transform(pair, side, side, blocks, name=f"gamma_class_{side}{suffix}")


class GradedOperator:
    """Monomial-graded diagonal operator: z or tau exponent shifts.

    z^Gr multiplies lam^a H^b on sector g by z^(a + b + age(g));
    tau^(deg0/2) multiplies by tau^(a + b).  ``weight`` = +1 or -1 picks
    the operator or its inverse.
    """

    def __init__(self, pair: LGPair, kind: str, weight: int = 1):
        if kind not in ("z_grading", "deg0"):
            raise ValueError("kind must be 'z_grading' or 'deg0'")
        self.pair = pair
        self.kind = kind
        self.weight = weight
        self.name = f"{kind}^{weight}"

    def apply(self, series: CohSeries) -> CohSeries:
        z_min, z_max = series.orders.z_window
        out: dict = {}
        for (exps, z, degs), value in series.terms.items():
            if self.kind == "z_grading":
                age = GroupElement(series.pair.fermat, exps).age()
                if age.denominator != 1:
                    raise ValueError("z-grading needs integral sector ages")
                for (lam, h, tau, atoms), coeff in value.terms.items():
                    z_out = z + self.weight * (lam + h + int(age))
                    if z_out < z_min or z_out > z_max:
                        continue
                    key = (exps, z_out, degs)
                    piece = SectorValue(value.ring, {(lam, h, tau, atoms): coeff})
                    out[key] = out[key] + piece if key in out else piece
            else:
                mapped = value.map_monomials(
                    lambda k, c: ((k[0], k[1], k[2] + self.weight * (k[0] + k[1]),
                                   k[3]), c))
                key = (exps, z, degs)
                out[key] = out[key] + mapped if key in out else mapped
        return CohSeries(series.side, series.pair, series.variables,
                         series.orders, out, series.tokens, series.c_twist)


def z_grading(pair: LGPair, weight: int = 1) -> GradedOperator:
    return GradedOperator(pair, "z_grading", weight)


def deg0_scaling(pair: LGPair, weight: int = 1) -> GradedOperator:
    return GradedOperator(pair, "deg0", weight)


class CompositeTransform:
    """Apply a fixed sequence of operators left to right."""

    def __init__(self, stages, name: str):
        self.stages = tuple(stages)
        self.name = name

    def apply(self, series: CohSeries) -> CohSeries:
        for stage in self.stages:
            series = stage.apply(series)
        return series


def big_u(pair: LGPair, lam_order: int) -> CompositeTransform:
    """U = z^-Gr GammaClass(Y) tau^(deg0/2) Ubar tau^(-deg0/2) GammaClass(X)^-1 z^Gr."""
    pair.require_cy()
    return CompositeTransform(
        [
            z_grading(pair, +1),
            gamma_class_op(pair, "x", inverse=True),
            deg0_scaling(pair, -1),
            u_bar(pair, lam_order),
            deg0_scaling(pair, +1),
            gamma_class_op(pair, "y"),
            z_grading(pair, -1),
        ],
        name="big_u",
    )


class PullbackToZ:
    """Ambient restriction: kills 1~_g H^(N_g - 1), keeps lower H-powers."""

    def __init__(self, pair: LGPair):
        self.pair = pair
        self.name = "pullback_to_z"

    def apply(self, series: CohSeries) -> CohSeries:
        out: dict = {}
        for (exps, z, degs), value in series.terms.items():
            n_g = GroupElement(series.pair.fermat, exps).fixed_dim()
            kept = value.map_monomials(
                lambda k, c: (k, c) if k[1] < n_g - 1 else None)
            if kept.is_zero():
                continue
            out[(exps, z, degs)] = kept
        return CohSeries("z", series.pair, series.variables, series.orders,
                         out, series.tokens, series.c_twist)


def pullback_to_z(pair: LGPair) -> PullbackToZ:
    pair.require_cy()
    return PullbackToZ(pair)


def divide_or_none(value: SectorValue) -> SectorValue | None:
    """Quotient by (lam + H) when exact, None otherwise."""
    try:
        quotient, _ = divide_by_lambda_plus_h(value)
    except ExactDivisionError:
        return None
    return quotient


class DeltaDiamond:
    """phi -> -e^(pi i d H / z) / (d (lam + H)) phi for E = -K.

    rank(E) = 1 and c_1(E) = dH, so the sign is (-1)^1 and the Euler class
    d(lam + H).  The division is performed exactly and raises if the input
    is not divisible; pi*i is represented as tau/2, so the sign factor
    expands inside the existing token algebra.
    """

    def __init__(self, pair: LGPair):
        pair.require_cy()
        self.pair = pair
        self.rank_sign = -1
        self.name = "delta_diamond"

    def euler_factor(self, ring: SeriesRing) -> SectorValue:
        return (ring.lam() + ring.hyperplane()) * self.pair.fermat.degree

    def sign_exponential(self, ring: SeriesRing, z_min: int, z_max: int) -> ZLaurentSeries:
        """e^(pi i d H / z) = sum_k (d H)^k (tau/2)^k z^-k / k!, finite in H."""
        d = self.pair.fermat.degree
        terms = {}
        for k in range(ring.nilpotency):
            coeff = Fraction(d ** k, 2 ** k * factorial(k))
            terms[-k] = ring.monomial(h=k, tau=k, coeff=coeff)
        return ZLaurentSeries(ring, z_min, z_max, terms)

    def apply(self, series: CohSeries) -> CohSeries:
        """Divide every coefficient by d(lam+H) and dress with the sign factor.

        Raises ExactDivisionError when a block fails to cancel.
        """
        z_min, z_max = series.orders.z_window
        d = self.pair.fermat.degree
        out: dict = {}
        for (exps, z, degs), value in series.terms.items():
            quotient, _ = divide_by_lambda_plus_h(value)
            quotient = quotient * Fraction(self.rank_sign, d)
            ring = quotient.ring
            sign = self.sign_exponential(ring, z_min, z_max)
            for dz, part in sign.terms.items():
                z_out = z + dz
                if z_out < z_min or z_out > z_max:
                    continue
                piece = quotient * part
                if piece.is_zero():
                    continue
                key = (exps, z_out, degs)
                out[key] = out[key] + piece if key in out else piece
        return CohSeries(series.side, series.pair, series.variables,
                         series.orders, out, series.tokens, series.c_twist)


def delta_diamond(pair: LGPair) -> DeltaDiamond:
    return DeltaDiamond(pair)


# ---------------------------------------------------------------------------
# Delta^c with generic s-parameters
# ---------------------------------------------------------------------------

class SPoly:
    """Polynomial in the variables s^j_k and z, truncated in s-degree and z.

    Monomial keys: (s_mono, z) with s_mono a sorted tuple of ((j, k), e).
    """

    __slots__ = ("s_degree", "z_order", "terms")

    def __init__(self, s_degree: int, z_order: int, terms: dict):
        clean = {}
        for (mono, z), coeff in terms.items():
            if z > z_order or sum(e for _, e in mono) > s_degree or coeff == 0:
                continue
            clean[(mono, z)] = coeff
        self.s_degree = s_degree
        self.z_order = z_order
        self.terms = clean

    @staticmethod
    def constant(s_degree: int, z_order: int, value) -> "SPoly":
        return SPoly(s_degree, z_order, {((), 0): Fraction(value)})

    def __add__(self, other: "SPoly") -> "SPoly":
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return SPoly(self.s_degree, self.z_order, terms)

    def __mul__(self, other) -> "SPoly":
        if isinstance(other, (int, Fraction)):
            return SPoly(self.s_degree, self.z_order,
                         {k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for (m1, z1), c1 in self.terms.items():
            for (m2, z2), c2 in other.terms.items():
                z = z1 + z2
                if z > self.z_order:
                    continue
                merged: dict = dict(m1)
                for var, e in m2:
                    merged[var] = merged.get(var, 0) + e
                mono = tuple(sorted(merged.items()))
                if sum(e for _, e in mono) > self.s_degree:
                    continue
                key = (mono, z)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return SPoly(self.s_degree, self.z_order, out)

    def exp(self) -> "SPoly":
        """exp of an s-linear form (no constant term), truncated."""
        if any(not mono for (mono, _z) in self.terms):
            raise ValueError("exp needs a zero constant term")
        result = SPoly.constant(self.s_degree, self.z_order, 1)
        power = SPoly.constant(self.s_degree, self.z_order, 1)
        fact = 1
        for n in range(1, self.s_degree + 1):
            power = power * self
            if not power.terms:
                break
            fact *= n
            result = result + power * Fraction(1, fact)
        return result

    def __eq__(self, other):
        return (isinstance(other, SPoly) and self.terms == other.terms
                and (self.s_degree, self.z_order) == (other.s_degree, other.z_order))

    def __repr__(self):
        return f"SPoly({self.terms})"


class GenericSTransform:
    """Diagonal operator with entries exp(sum_{j,k} s^j_k B_{k+1}(m_j) z^k/(k+1)!).

    Entries live in the formal s-algebra, not in a CohSeries; the object
    supports entrywise comparison and composition, which is what the MLK
    identity needs.
    """

    def __init__(self, pair: LGPair, c: int, entries: dict, k_max: int,
                 s_degree: int, z_order: int):
        self.pair = pair
        self.c = c
        self.entries = entries  # sector exps -> SPoly
        self.k_max = k_max
        self.s_degree = s_degree
        self.z_order = z_order
        self.name = f"delta_{c}"

    def entry(self, g: GroupElement) -> SPoly:
        return self.entries[g.exps]

    def compose_entrywise(self, other: "GenericSTransform") -> "GenericSTransform":
        entries = {exps: self.entries[exps] * other.entries[exps]
                   for exps in self.entries}
        return GenericSTransform(self.pair, self.c, entries, self.k_max,
                                 self.s_degree, self.z_order)

    def is_identity(self) -> bool:
        one = SPoly.constant(self.s_degree, self.z_order, 1)
        return all(entry == one for entry in self.entries.values())


def delta_c_log_entry(pair: LGPair, c: int, g: GroupElement,
                      k_max: int = 4) -> dict:
    """(j, k) -> B_{k+1}(m_j(phi^c_g)) / (k+1)! with m_j(phi^c_g) = m_j(g j^c)."""
    shifted = g * (pair.grading ** c)
    return {
        (j, k): bernoulli_poly(k + 1, shifted.multiplicity(j)) / factorial(k + 1)
        for j in range(pair.fermat.n_variables)
        for k in range(k_max + 1)
    }


def delta_c_generic(pair: LGPair, c: int, k_max: int = 4, s_degree: int = 2,
                    z_order: int = 6, scale=Fraction(1)) -> GenericSTransform:
    """Delta^c with generic s^j_k, k <= k_max, as a diagonal s-transform.

    ``scale`` substitutes s -> scale*s, giving an exact handle on the
    multiplicativity law Delta(s + s') = Delta(s) Delta(s').
    """
    d = pair.fermat.degree
    for cj in pair.fermat.weights:
        if c * cj >= d:
            raise ValueError("delta_c requires c*c_j < d")
    entries = {}
    for g in pair.group.elements:
        log_entries = delta_c_log_entry(pair, c, g, k_max)
        log_form = SPoly(s_degree, z_order, {})
        for (j, k), coeff in sorted(log_entries.items()):
            coeff = coeff * scale
            if coeff:
                log_form = log_form + SPoly(
                    s_degree, z_order, {((((j, k), 1),), k): coeff})
        entries[g.exps] = log_form.exp()
    return GenericSTransform(pair, c, entries, k_max, s_degree, z_order)


# ---------------------------------------------------------------------------
# Delta^c under the closed euler specializations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpecializedEntry:
    """prod_j (+-lam_j)^(mu_j) * (series in z/lam), lam_j = c_j lam.

    half_turns counts the power of e^(i pi) produced by the (-lam_j) bases;
    mu carries the rational lam-exponents that operator entries may hold
    but series constructors reject.
    series maps n -> coefficient of (z/lam)^n.
    """

    half_turns: Fraction
    mu: tuple[Fraction, ...]
    series: tuple[Fraction, ...]

    def __mul__(self, other: "SpecializedEntry") -> "SpecializedEntry":
        n = len(self.series)
        conv = [Fraction(0)] * n
        for i, a in enumerate(self.series):
            for k, b in enumerate(other.series):
                if i + k < n:
                    conv[i + k] += a * b
        return SpecializedEntry(self.half_turns + other.half_turns,
                                tuple(a + b for a, b in zip(self.mu, other.mu)),
                                tuple(conv))

    def lam_exponent(self) -> Fraction:
        return sum(self.mu, Fraction(0))

    def is_identity(self) -> bool:
        return (self.half_turns == 0 and all(m == 0 for m in self.mu)
                and self.series[0] == 1 and all(c == 0 for c in self.series[1:]))


def delta_c_specialized(pair: LGPair, c: int, spec: str,
                        k_max: int = 4) -> dict:
    """Entries of Delta^c at the euler-inverse specializations, per sector.

    s^j_0 contributes (-+lam_j)^(1/2 - m_j); s^j_k for k>0 contributes
    exp(B_{k+1}(m_j) (k-1)! / ((k+1)! c_j^k) (z/lam)^k).
    """
    if spec not in ("euler-inverse", "euler-inverse-signed"):
        raise ValueError("spec must be one of the euler specializations")
    d = pair.fermat.degree
    for cj in pair.fermat.weights:
        if c * cj >= d:
            raise ValueError("delta_c requires c*c_j < d")
    entries = {}
    for g in pair.group.elements:
        shifted = g * (pair.grading ** c)
        mu = []
        half = Fraction(0)
        series = [Fraction(0)] * (k_max + 1)
        series[0] = Fraction(1)
        for j, cj in enumerate(pair.fermat.weights):
            m = shifted.multiplicity(j)
            exponent = Fraction(1, 2) - m  # -B_1(m)
            mu.append(exponent)
            if spec == "euler-inverse":
                half += exponent
            log_coeffs = [Fraction(0)] * (k_max + 1)
            for k in range(1, k_max + 1):
                log_coeffs[k] = (bernoulli_poly(k + 1, m) * factorial(k - 1)
                                 / (factorial(k + 1) * Fraction(cj) ** k))
            exp_series = [Fraction(0)] * (k_max + 1)
            exp_series[0] = Fraction(1)
            power = [Fraction(0)] * (k_max + 1)
            power[0] = Fraction(1)
            fact = 1
            for n in range(1, k_max + 1):
                nxt = [Fraction(0)] * (k_max + 1)
                for i, a in enumerate(power):
                    if a:
                        for k2, b in enumerate(log_coeffs):
                            if b and i + k2 <= k_max:
                                nxt[i + k2] += a * b
                power = nxt
                fact *= n
                for i in range(k_max + 1):
                    exp_series[i] += power[i] / fact
            conv = [Fraction(0)] * (k_max + 1)
            for i, a in enumerate(series):
                for k2, b in enumerate(exp_series):
                    if i + k2 <= k_max:
                        conv[i + k2] += a * b
            series = conv
        entries[g.exps] = SpecializedEntry(half, tuple(mu), tuple(series))
    return entries
