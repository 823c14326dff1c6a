"""Points of the Givental symplectic space as finite truncated series.

A ``CohSeries`` is a finite map (sector, z-exponent, t-multidegree) ->
SectorValue on one of the state-space sides, together with the truncation
orders it was built at and the common prefactor tokens it carries
(t^(d*lam/tau) on the t-side, q^(H/tau) on the q-side).  Tokens are opaque:
identity checks require them to match syntactically.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exactalg import SectorValue, SeriesRing, ZLaurentSeries
from .lgmodel import GroupElement, LGPair

__all__ = ["Orders", "CohSeries", "TOKEN_T_LAMBDA", "TOKEN_Q_H", "SeriesKey"]

TOKEN_T_LAMBDA = "t^(d*lam/tau)"
TOKEN_Q_H = "q^(H/tau)"

SeriesKey = tuple  # (sector exps, z exponent, degree tuple)


@dataclass(frozen=True)
class Orders:
    """Truncation orders; they travel with every series."""

    t_order: int = 8
    lam_order: int = 4
    z_min: int | None = None
    z_max: int = 2

    @property
    def z_window(self) -> tuple[int, int]:
        z_min = -self.t_order - 2 if self.z_min is None else self.z_min
        return (z_min, self.z_max)

    def as_dict(self) -> dict:
        z_min, z_max = self.z_window
        return {"T": self.t_order, "lambda": self.lam_order,
                "zWindow": [z_min, z_max]}


def _sector_nilpotency(side: str, pair: LGPair, exps: tuple) -> int:
    if side in ("y", "z"):
        return max(1, GroupElement(pair.fermat, exps).fixed_dim())
    return 1


class CohSeries:
    """Immutable truncated element of H((z^-1)) x state space."""

    __slots__ = ("side", "pair", "c_twist", "variables", "orders", "tokens", "terms")

    def __init__(self, side: str, pair: LGPair, variables, orders: Orders,
                 terms: dict, tokens=(), c_twist: int | None = None):
        z_min, z_max = orders.z_window
        clean: dict = {}
        for (exps, z, degs) in sorted(terms):
            value = terms[(exps, z, degs)]
            if z < z_min or z > z_max:
                continue
            if sum(d for d in degs if d > 0) > orders.t_order:
                continue
            if not isinstance(value, SectorValue):
                raise TypeError("series coefficients must be SectorValue")
            if value.is_zero():
                continue
            clean[(tuple(exps), z, tuple(degs))] = value
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "c_twist", c_twist)
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "tokens", tuple(sorted(tokens)))
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("CohSeries is immutable")

    # -- ring helpers ------------------------------------------------------
    def ring_for(self, exps: tuple) -> SeriesRing:
        return SeriesRing(self.pair.fermat.degree, self.orders.lam_order,
                          _sector_nilpotency(self.side, self.pair, exps))

    def signature(self) -> tuple:
        return (self.side, self.c_twist, self.variables, self.tokens)

    # -- linear structure ----------------------------------------------------
    def __add__(self, other: "CohSeries") -> "CohSeries":
        if self.signature() != other.signature():
            raise ValueError("cannot add series with different signatures")
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms[key] + value if key in terms else value
        return self._replace_terms(terms)

    def scale(self, scalar) -> "CohSeries":
        return self._replace_terms({k: v * scalar for k, v in self.terms.items()})

    def _replace_terms(self, terms: dict) -> "CohSeries":
        return CohSeries(self.side, self.pair, self.variables, self.orders,
                         terms, self.tokens, self.c_twist)

    def map_values(self, fn) -> "CohSeries":
        return self._replace_terms({k: fn(k, v) for k, v in self.terms.items()})

    def filter_terms(self, pred) -> "CohSeries":
        return self._replace_terms({k: v for k, v in self.terms.items() if pred(k, v)})

    def with_tokens(self, tokens) -> "CohSeries":
        return CohSeries(self.side, self.pair, self.variables, self.orders,
                         dict(self.terms), tokens, self.c_twist)

    # -- queries ---------------------------------------------------------------
    def coefficient(self, exps, z: int, degs) -> SectorValue:
        key = (tuple(exps), z, tuple(degs))
        if key in self.terms:
            return self.terms[key]
        return self.ring_for(tuple(exps)).zero()

    def sectors(self) -> set[tuple]:
        return {k[0] for k in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def z_slice(self, z: int) -> dict:
        return {k: v for k, v in self.terms.items() if k[1] == z}

    def total_degree(self, key: SeriesKey) -> int:
        return sum(d for d in key[2] if d > 0)

    # -- calculus -----------------------------------------------------------------
    def z_ddt_var(self, var_index: int, prefactor_lam_multiple: int = 0) -> "CohSeries":
        """z * d/d(variable): degree down, z up, times the old exponent.

        When the series carries the t^(d*lam/tau) prefactor the derivative
        picks up the extra d*lam/tau summand on the distinguished variable;
        pass d as ``prefactor_lam_multiple`` to include it (the term keeps a
        tau^-1 token power and is divisible by lam).
        """
        out: dict = {}
        for (exps, z, degs), value in self.terms.items():
            ring = value.ring
            exponent = degs[var_index]
            shifted = tuple(d - 1 if i == var_index else d
                            for i, d in enumerate(degs))
            pieces = []
            if exponent:
                pieces.append(value * exponent)
            if prefactor_lam_multiple:
                pieces.append(value * ring.monomial(lam=1, tau=-1,
                                                    coeff=prefactor_lam_multiple))
            if not pieces:
                continue
            total = pieces[0]
            for piece in pieces[1:]:
                total = total + piece
            key = (exps, z + 1, shifted)
            out[key] = out[key] + total if key in out else total
        return self._replace_terms(out)

    def nonequivariant_limit(self) -> "CohSeries":
        """Set lam = 0; the t^(d*lam/tau) token degenerates to 1 and is dropped."""
        tokens = tuple(t for t in self.tokens if t[0] != TOKEN_T_LAMBDA)
        terms = {}
        for key, value in self.terms.items():
            limited = value.nonequivariant_limit()
            if not limited.is_zero():
                terms[key] = limited
        return CohSeries(self.side, self.pair, self.variables, self.orders,
                         terms, tokens, self.c_twist)

    def restricted(self, orders: Orders) -> "CohSeries":
        """Re-truncate to smaller orders (monotonicity of the checks)."""
        terms = {}
        for (exps, z, degs), value in self.terms.items():
            ring = SeriesRing(value.ring.order, orders.lam_order,
                              value.ring.nilpotency)
            terms[(exps, z, degs)] = value.with_ring(ring)
        return CohSeries(self.side, self.pair, self.variables, orders,
                         terms, self.tokens, self.c_twist)

    # -- comparison ----------------------------------------------------------------
    def compare(self, other: "CohSeries") -> dict | None:
        """None if equal; otherwise a witness for the first difference."""
        if self.tokens != other.tokens:
            return {"kind": "token-mismatch",
                    "left": list(self.tokens), "right": list(other.tokens)}
        if self.side != other.side or self.variables != other.variables:
            return {"kind": "signature-mismatch",
                    "left": [self.side, list(map(str, self.variables))],
                    "right": [other.side, list(map(str, other.variables))]}
        for key in sorted(set(self.terms) | set(other.terms)):
            exps = key[0]
            left = self.terms.get(key, self.ring_for(exps).zero())
            right = other.terms.get(key, other.ring_for(exps).zero())
            if left != right:
                return {"kind": "coefficient",
                        "sector": list(key[0]), "z": key[1],
                        "degree": list(key[2]),
                        "left": str(left), "right": str(right)}
        return None

    def __eq__(self, other):
        return (isinstance(other, CohSeries)
                and self.signature() == other.signature()
                and self.terms == other.terms)

    def __repr__(self):
        return (f"CohSeries(side={self.side!r}, pair={self.pair.name}, "
                f"{len(self.terms)} terms)")


def zlaurent_to_terms(exps: tuple, degs: tuple, series: ZLaurentSeries,
                      accumulator: dict) -> None:
    """Splat a z-Laurent value into per-z series keys."""
    for z, value in series.terms.items():
        key = (exps, z, degs)
        accumulator[key] = accumulator[key] + value if key in accumulator else value
