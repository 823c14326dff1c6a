"""The four pairs shipped for tests and the acceptance suite.

Coverage: weights > 1 (sextic), a non-cyclic group (quartic), and the two
classical hypersurfaces (quintic threefold, elliptic cubic).
"""
from __future__ import annotations

from .lgmodel import FermatData, LGPair, group_from_generators

__all__ = ["quintic", "cubic", "quartic", "sextic", "shipped_pairs"]


def quintic() -> LGPair:
    group = group_from_generators(FermatData((1, 1, 1, 1, 1), 5), [])
    return LGPair(group, name="quintic")


def cubic() -> LGPair:
    group = group_from_generators(FermatData((1, 1, 1), 3), [])
    return LGPair(group, name="cubic")


def quartic() -> LGPair:
    group = group_from_generators(FermatData((1, 1, 1, 1), 4), [(0, 2, 0, 2)])
    return LGPair(group, name="quartic")


def sextic() -> LGPair:
    group = group_from_generators(FermatData((1, 1, 1, 3), 6), [])
    return LGPair(group, name="sextic")


def shipped_pairs() -> dict[str, LGPair]:
    return {p.name: p for p in (quintic(), cubic(), quartic(), sextic())}
