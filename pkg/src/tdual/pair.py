"""Pairs ``(E, h)`` in normal form and their T-duals.

A pair over ``B`` is stored as the triple ``(c, t, b)``: ``c`` is the Chern
class of ``E``, ``t = pi_!(h)`` and ``b`` in ``H^3(B)`` is the residual part,
``h = lift(t) + pi^*(b)``. The validity condition is ``c u t = 0``. Two
triples describe isomorphic pairs iff ``c`` and ``t`` agree and the ``b``
differ by an element of ``c u H^1(B) + t u H^1(B)``.

Duality is ``(c, t, b) -> (-t, -c, b)``, which is an involution on triples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abgroup import Homomorphism, solve_int
from .errors import BaseMismatch, ObstructionNonzero
from .space import GradedClass, SpaceModel, cup, cup_map, make_space

__all__ = [
    "Pair",
    "act_h3",
    "dualize",
    "indeterminacy",
    "make_pair",
    "pairs_isomorphic",
]


@dataclass(frozen=True)
class Pair:
    base: SpaceModel
    c: GradedClass
    t: GradedClass
    b: GradedClass

    def to_json(self):
        return {
            "base": self.base.descriptor,
            "c": self.c.to_json(),
            "t": self.t.to_json(),
            "b": self.b.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        return make_pair(data["base"], data["c"], data["t"], data["b"])


def _as_class(base, degree, x):
    if isinstance(x, GradedClass):
        if x.degree != degree:
            raise ValueError(f"expected a degree-{degree} class, got degree {x.degree}")
        return base.element(degree, x.coords)
    if x is None:
        return base.zero(degree)
    return base.element(degree, x)


def make_pair(base, c, t, b=None):
    """Validated pair; raises ``ObstructionNonzero`` unless ``c u t = 0``."""
    base = make_space(base)
    c = _as_class(base, 2, c)
    t = _as_class(base, 2, t)
    b = _as_class(base, 3, b)
    obstruction = cup(base, c, t, strict=False)
    if not obstruction.is_zero():
        raise ObstructionNonzero(
            f"c u t = {list(obstruction.coords)} in H^4({base.descriptor}) is not zero"
        )
    return Pair(base, c, t, b)


def dualize(p):
    B = p.base
    return Pair(B, B.element(2, (-p.t).coords), B.element(2, (-p.c).coords), p.b)


def act_h3(p, beta):
    """Shift the flux by ``pi^* beta``."""
    if isinstance(beta, GradedClass):
        if beta.degree != 3:
            raise ValueError("the H^3(B) action needs a degree-3 class")
        coords = beta.coords
    else:
        coords = beta
    try:
        beta = p.base.element(3, coords)
    except ValueError as exc:
        raise BaseMismatch(str(exc)) from exc
    G = p.base.group(3)
    return Pair(p.base, p.c, p.t, GradedClass(3, G.reduce(np.add(p.b.coords, beta.coords))))


def indeterminacy(p):
    """``x -> c u x1 + t u x2`` from ``H^1(B)^2`` onto the subgroup ``I``."""
    B = p.base
    f = cup_map(B, p.c, 1)
    g = cup_map(B, p.t, 1)
    H1 = B.group(1)
    M = np.concatenate([f.matrix, g.matrix], axis=1)
    return Homomorphism(H1 + H1, B.group(3), M)


def pairs_isomorphic(p, q):
    if p.base != q.base:
        raise BaseMismatch(f"{p.base.descriptor} vs {q.base.descriptor}")
    if p.c != q.c or p.t != q.t:
        return False
    G = p.base.group(3)
    diff = G.reduce(np.subtract(p.b.coords, q.b.coords))
    if not any(diff):
        return True
    f = indeterminacy(p)
    return f.preimage(diff) is not None
