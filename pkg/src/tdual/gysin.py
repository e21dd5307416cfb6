"""Gysin sequence of a principal circle bundle over a catalog base.

For ``pi: E -> B`` with Chern class ``c`` each degree splits into

    0 -> coker(c u - : H^{n-2}B -> H^nB) -> H^n E -> ker(c u - : H^{n-1}B -> H^{n+1}B) -> 0

and the middle term is assembled explicitly, together with the pullback
``pi^*`` and the fibre integration ``pi_!`` in its canonical generators.

Extension rules, tried in order:

``split``
    the bundle is trivial, the quotient is free, or one end vanishes;
``unique``
    only one abelian group fits between the two ends;
``poincare``
    every catalog total space is a closed oriented manifold of dimension
    ``D = dim B + 1``, so ``tors H^n(E) = tors H^{D+1-n}(E)``; a gluing is
    chosen that realizes the group forced by the dual degree.

Anything left over is reported as :class:`~tdual.abgroup.Ambiguous` and has
no explicit maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .abgroup import (
    AbGroup,
    Ambiguous,
    Homomorphism,
    Resolved,
    _quotient_reps,
    cokernel,
    extension_candidates,
    kernel,
    matmul,
    present,
    zeros,
)
from .errors import DegreeOutOfRange
from .space import GradedClass, SpaceModel, cup, cup_map, make_space

__all__ = [
    "CircleBundle",
    "GysinDegree",
    "GysinResult",
    "euler_obstruction",
    "exactness_report",
    "gysin_cohomology",
    "pullback",
    "pushforward",
]


@dataclass(frozen=True)
class CircleBundle:
    base: SpaceModel
    c: GradedClass

    def __post_init__(self):
        base = make_space(self.base)
        object.__setattr__(self, "base", base)
        c = self.c
        if not isinstance(c, GradedClass):
            c = base.element(2, c)
        if c.degree != 2:
            raise ValueError("a Chern class has degree 2")
        object.__setattr__(self, "c", base.element(2, c.coords))

    @property
    def total_dimension(self):
        return self.base.dimension + 1

    def is_trivial(self):
        return self.c.is_zero()


@dataclass(frozen=True, eq=False)
class GysinDegree:
    degree: int
    coker_part: AbGroup
    ker_part: AbGroup
    assembled: object
    pullback: Homomorphism = field(default=None, repr=False)
    pushforward: Homomorphism = field(default=None, repr=False)
    rule: str = "split"
    # internal: quotient H^n(B) -> coker_part, inclusion ker_part -> H^{n-1}(B)
    quotient: Homomorphism = field(default=None, repr=False)
    inclusion: Homomorphism = field(default=None, repr=False)
    to_parts: np.ndarray = field(default=None, repr=False)
    from_parts: np.ndarray = field(default=None, repr=False)

    @property
    def group(self):
        return self.assembled.group if self.assembled.resolved else None


@dataclass(frozen=True, eq=False)
class GysinResult:
    bundle: CircleBundle
    degrees: dict

    @property
    def base(self):
        return self.bundle.base

    @property
    def dimension(self):
        return self.bundle.total_dimension

    def __getitem__(self, n):
        return self.degrees[n]

    def cohomology(self, n):
        """Resolved group or :class:`Ambiguous`; zero outside ``0..dim E``."""
        if n < 0 or n > self.dimension:
            return Resolved(AbGroup())
        return self.degrees[n].assembled

    def groups(self):
        return [self.cohomology(n) for n in range(self.dimension + 1)]

    def all_resolved(self):
        return all(d.assembled.resolved for d in self.degrees.values())

    def _resolved(self, n):
        if n not in self.degrees:
            raise DegreeOutOfRange(f"degree {n} outside 0..{self.dimension}")
        d = self.degrees[n]
        if not d.assembled.resolved:
            raise DegreeOutOfRange(f"H^{n}(E) is an unresolved extension")
        return d

    def element(self, n, coords):
        d = self._resolved(n)
        if isinstance(coords, int):
            coords = [coords]
        return GradedClass(n, d.group.reduce(coords))

    def generator_class(self, n, index=0):
        d = self._resolved(n)
        e = [0] * d.group.ngens
        e[index] = 1
        return GradedClass(n, tuple(e))

    def fundamental_class(self):
        """The generator ``o_E`` of ``H^{dim E}(E) = Z``."""
        return self.generator_class(self.dimension)

    def lift(self, t):
        """Distinguished class with ``pi_!`` equal to ``t`` (``t`` must lie in
        the kernel of ``c u -``)."""
        n = t.degree + 1
        d = self._resolved(n)
        k = d.inclusion.preimage(t.coords)
        if k is None or d.inclusion(k) != self.base.group(t.degree).reduce(t.coords):
            raise ValueError(f"{t} is not in the kernel of c u -")
        old = [0] * d.coker_part.ngens + list(k)
        v = matmul(d.to_parts, np.array(old, dtype=object).reshape(-1, 1))[:, 0]
        return GradedClass(n, d.group.reduce(v))

    def decompose(self, h):
        """Split ``h`` into ``(t, b)`` with ``h = lift(t) + pi^*(b)``."""
        d = self._resolved(h.degree)
        t = pushforward(self, h)
        rest = d.group.reduce(np.subtract(h.coords, self.lift(t).coords))
        b = d.pullback.preimage(rest)
        if b is None:
            raise ValueError("residual class is not a pullback; the Gysin data is inconsistent")
        return t, GradedClass(h.degree, b)

    def compose(self, t, b):
        d = self._resolved(b.degree)
        coords = np.add(self.lift(t).coords, d.pullback(b.coords))
        return GradedClass(b.degree, d.group.reduce(coords))


def pushforward(result, h):
    """Fibre integration ``pi_!: H^n(E) -> H^{n-1}(B)``."""
    n = h.degree
    if n < 1 or n > result.dimension:
        raise DegreeOutOfRange(f"pi_! is not defined on degree {n}")
    d = result._resolved(n)
    return GradedClass(n - 1, d.pushforward(h.coords))


def pullback(result, x):
    d = result._resolved(x.degree)
    return GradedClass(x.degree, d.pullback(x.coords))


def _assemble(C, K, eps):
    """Presentation of the extension of ``K`` by ``C`` glued along ``eps``."""
    m, n = C.ngens, K.ngens
    cols = []
    R = C.relations()
    for k in range(R.shape[1]):
        cols.append(list(R[:, k]) + [0] * n)
    tors = [(j, e) for j, e in enumerate(K.orders) if e]
    for (j, e), vec in zip(tors, eps):
        col = [-v for v in vec] + [0] * n
        col[m + j] = e
        cols.append(col)
    rel = np.array(cols, dtype=object).T if cols else zeros(m + n, 0)
    return present(rel, m + n)


def _gluings(C, K):
    tors = [e for e in K.orders if e]
    return itertools.product(*[list(_quotient_reps(C, e)) for e in tors])


def _degree_data(n, C, q, K, incl, P, rule, top):
    mC = C.ngens
    G = P.group
    to_parts, from_parts = P.to_canon.copy(), P.from_canon.copy()
    if top and G.ngens == 1:
        # orientation: pi_!(o_E) is the top generator of the base
        sel = from_parts[mC:, :]
        img = matmul(incl.matrix, sel)
        if img.size and img[0, 0] < 0:
            to_parts[0, :] = -to_parts[0, :]
            from_parts[:, 0] = -from_parts[:, 0]
    pb = Homomorphism(q.domain, G, matmul(to_parts[:, :mC], q.matrix))
    pf = Homomorphism(G, incl.codomain, matmul(incl.matrix, from_parts[mC:, :]))
    return GysinDegree(n, C, K, Resolved(G), pb, pf, rule, q, incl, to_parts, from_parts)


def gysin_cohomology(bundle):
    """Solve the Gysin sequence of ``bundle`` in every degree ``0..dim E``."""
    if not isinstance(bundle, CircleBundle):
        bundle = CircleBundle(*bundle)
    B, c = bundle.base, bundle.c
    D = bundle.total_dimension
    parts = {}
    for n in range(D + 1):
        C, q = cokernel(cup_map(B, c, n - 2))
        K, incl = kernel(cup_map(B, c, n - 1))
        parts[n] = (C, q, K, incl)

    degrees = {}
    pending = []
    for n, (C, q, K, incl) in parts.items():
        zero_eps = [tuple([0] * C.ngens)] * sum(1 for e in K.orders if e)
        if bundle.is_trivial() or K.is_free() or C.is_trivial() or K.is_trivial():
            rule = "split"
        elif len(extension_candidates(C, K)) == 1:
            rule = "unique"
        else:
            pending.append(n)
            continue
        degrees[n] = _degree_data(n, C, q, K, incl, _assemble(C, K, zero_eps), rule, n == D)

    progress = True
    while pending and progress:
        progress = False
        for n in list(pending):
            dual = D + 1 - n
            if dual not in degrees:
                continue
            C, q, K, incl = parts[n]
            target = AbGroup(C.rank + K.rank, degrees[dual].group.torsion)
            for eps in _gluings(C, K):
                P = _assemble(C, K, eps)
                if P.group == target:
                    degrees[n] = _degree_data(n, C, q, K, incl, P, "poincare", n == D)
                    pending.remove(n)
                    progress = True
                    break
    for n in pending:
        C, q, K, incl = parts[n]
        cands = extension_candidates(C, K)
        degrees[n] = GysinDegree(
            n, C, K,
            Ambiguous(C.torsion_order() * K.torsion_order(), K.torsion_part(), cands, C.rank + K.rank),
            rule="ambiguous", quotient=q, inclusion=incl,
        )
    return GysinResult(bundle, dict(sorted(degrees.items())))


def euler_obstruction(base, c, c_hat):
    """Return ``(chi, thom_exists)`` with ``chi = c u c_hat`` in degree 4."""
    base = make_space(base)
    if not isinstance(c, GradedClass):
        c = base.element(2, c)
    if not isinstance(c_hat, GradedClass):
        c_hat = base.element(2, c_hat)
    chi = cup(base, c, c_hat, strict=False)
    return chi, chi.is_zero()


def exactness_report(result):
    """Check the long exact sequence degree by degree.

    Returns a list of ``(degree, check, ok)`` triples covering the three
    composites and the three kernel/image identities at ``H^n(B)``,
    ``H^n(E)`` and ``H^{n-1}(B)``.
    """
    from .abgroup import same_subgroup

    B, c = result.base, result.bundle.c
    out = []
    for n, d in result.degrees.items():
        if not d.assembled.resolved:
            out.append((n, "resolved", False))
            continue
        cup_in = cup_map(B, c, n - 2)
        cup_out = cup_map(B, c, n - 1)
        out.append((n, "pushforward o pullback = 0", (d.pushforward @ d.pullback).is_zero()))
        out.append((n, "pullback o cup = 0", (d.pullback @ cup_in).is_zero()))
        out.append((n, "cup o pushforward = 0", (cup_out @ d.pushforward).is_zero()))
        out.append((n, "ker pullback = im cup",
                    same_subgroup(B.group(n), d.pullback.kernel_lattice(), cup_in.matrix)))
        out.append((n, "ker pushforward = im pullback",
                    same_subgroup(d.group, d.pushforward.kernel_lattice(), d.pullback.matrix)))
        out.append((n - 1, "ker cup = im pushforward",
                    same_subgroup(B.group(n - 1), cup_out.kernel_lattice(), d.pushforward.matrix)))
        rank_ok = d.group.rank == d.coker_part.rank + d.ker_part.rank
        order_ok = d.group.torsion_order() * 1 == _torsion_count(d)
        out.append((n, "rank and order accounting", rank_ok and order_ok))
    return out


def _torsion_count(d):
    # |tors H^n E| from the two ends when the free ranks do not interfere
    if d.coker_part.rank == 0 or d.ker_part.is_free():
        return d.coker_part.torsion_order() * d.ker_part.torsion_order()
    return d.group.torsion_order()
