"""Principal T^2-bundles: twisted isomorphism classes and iterated duals.

A T^2-bundle ``F`` over ``B`` is recorded by the Chern classes ``(c0, c1)``
of its two circle quotients ``E0 = F/S0`` and ``E1 = F/S1``. Twisting the
action by ``phi`` in GL(2, Z) replaces ``(c0, c1)`` by ``sigma(phi) (c0, c1)``.

Composition: since ``sigma(phi psi) = sigma(psi) sigma(phi)`` the twisting
is a right action. :func:`twist_compose` returns the product for which
``act_twist(twist_compose(phi, psi), f) == act_twist(phi, act_twist(psi, f))``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .abgroup import Homomorphism, kernel, matmul, same_subgroup
from .errors import BaseMismatch, NotDualizable, ObstructionNonzero
from .gysin import CircleBundle, gysin_cohomology, pullback, pushforward
from .pair import dualize, make_pair
from .space import GradedClass, SpaceModel, cup, make_space

__all__ = [
    "GENERATORS",
    "IteratedDual",
    "OrbitAnswer",
    "Splitting",
    "TorusBundleClass",
    "TwistMatrix",
    "act_twist",
    "iterated_dual",
    "nonuniqueness",
    "orbit_equivalent",
    "sigma",
    "sphere_bundle_h3",
    "twist_compose",
    "zero_splittings",
]


@dataclass(frozen=True)
class TwistMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"{self.rows} is not in GL(2, Z)")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def __matmul__(self, o):
        return TwistMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self):
        s = self.det
        return TwistMatrix(s * self.d, -s * self.b, -s * self.c, s * self.a)


SWAP = TwistMatrix(0, 1, 1, 0)
NEGATE_FIRST = TwistMatrix(-1, 0, 0, 1)
SHEAR = TwistMatrix(1, 1, 0, 1)
GENERATORS = {"swap": SWAP, "negate-first": NEGATE_FIRST, "shear": SHEAR}


def sigma(phi):
    """``phi -> det(phi) * [[a, -c], [-b, d]]``; an involution."""
    s = phi.det
    return TwistMatrix(s * phi.a, -s * phi.c, -s * phi.b, s * phi.d)


def twist_compose(phi, psi):
    return psi @ phi


@dataclass(frozen=True)
class TorusBundleClass:
    base: SpaceModel
    c0: GradedClass
    c1: GradedClass

    def __post_init__(self):
        base = make_space(self.base)
        object.__setattr__(self, "base", base)
        for name in ("c0", "c1"):
            x = getattr(self, name)
            coords = x.coords if isinstance(x, GradedClass) else x
            object.__setattr__(self, name, base.element(2, coords))

    def key(self):
        return (self.c0.coords, self.c1.coords)

    def to_json(self):
        return {"base": self.base.descriptor, "c0": self.c0.to_json(), "c1": self.c1.to_json()}


def _apply(psi, f):
    G = f.base.group(2)
    c0 = [psi.a * x + psi.b * y for x, y in zip(f.c0.coords, f.c1.coords)]
    c1 = [psi.c * x + psi.d * y for x, y in zip(f.c0.coords, f.c1.coords)]
    return TorusBundleClass(f.base, GradedClass(2, G.reduce(c0)), GradedClass(2, G.reduce(c1)))


def act_twist(phi, f):
    """Chern classes of the bundle with its action twisted by ``phi``."""
    return _apply(sigma(phi), f)


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitAnswer:
    answer: str
    witness: TwistMatrix = None
    method: str = ""

    def __bool__(self):
        return self.answer == "yes"

    def to_json(self):
        return {
            "answer": self.answer,
            "witness": [list(r) for r in self.witness.rows] if self.witness else None,
            "method": self.method,
        }


def _row_hnf(C):
    """Row-style Hermite form of a 2 x m integer matrix: returns (U, H)
    with ``H = U C`` and ``U`` in GL(2, Z)."""
    U = [[1, 0], [0, 1]]
    H = [list(C[0]), list(C[1])]
    row = 0
    for col in range(len(H[0])):
        if row == 2:
            break
        # Euclid on the entries (row.., col)
        while any(H[i][col] for i in range(row + 1, 2)):
            i = row + 1
            if H[row][col] == 0 or abs(H[i][col]) < abs(H[row][col]):
                H[row], H[i] = H[i], H[row]
                U[row], U[i] = U[i], U[row]
                continue
            q = H[i][col] // H[row][col]
            H[i] = [x - q * y for x, y in zip(H[i], H[row])]
            U[i] = [x - q * y for x, y in zip(U[i], U[row])]
        if H[row][col] == 0:
            continue
        if H[row][col] < 0:
            H[row] = [-x for x in H[row]]
            U[row] = [-x for x in U[row]]
        for i in range(row):
            q = H[i][col] // H[row][col]
            H[i] = [x - q * y for x, y in zip(H[i], H[row])]
            U[i] = [x - q * y for x, y in zip(U[i], U[row])]
        row += 1
    return TwistMatrix(U[0][0], U[0][1], U[1][0], U[1][1]), H


def _search(f, g, max_length):
    start, goal = f.key(), g.key()
    seen = {start: TwistMatrix.identity()}
    queue = deque([(f, TwistMatrix.identity(), 0)])
    while queue:
        cur, word, depth = queue.popleft()
        if cur.key() == goal:
            return word
        if depth == max_length:
            continue
        for gen in GENERATORS.values():
            nxt = act_twist(gen, cur)
            if nxt.key() not in seen:
                w = twist_compose(gen, word)
                seen[nxt.key()] = w
                queue.append((nxt, w, depth + 1))
    return None


def orbit_equivalent(base, f, g, max_length=12):
    """Are ``f`` and ``g`` in the same GL(2, Z)-orbit?

    Returns an :class:`OrbitAnswer` with ``answer`` in ``yes | no | unknown``
    and, for ``yes``, a ``witness`` with ``act_twist(witness, f) == g``.
    """
    base = make_space(base)
    if f.base != base or g.base != base:
        raise BaseMismatch("classes live over different bases")
    G = base.group(2)
    F = np.array([f.c0.coords, f.c1.coords], dtype=object).T.reshape(G.ngens, 2)
    Gm = np.array([g.c0.coords, g.c1.coords], dtype=object).T.reshape(G.ngens, 2)
    # the subgroup spanned by (c0, c1) is an orbit invariant
    if not same_subgroup(G, F, Gm):
        method = "gcd" if G.ngens == 1 and G.is_free() else "span"
        return OrbitAnswer("no", None, method)
    if G.is_free():
        Uf, Hf = _row_hnf([f.c0.coords, f.c1.coords])
        Ug, Hg = _row_hnf([g.c0.coords, g.c1.coords])
        if Hf == Hg:
            psi = Ug.inverse() @ Uf
            witness = sigma(psi)
            if act_twist(witness, f).key() == g.key():
                return OrbitAnswer("yes", witness, "gcd" if G.ngens == 1 else "hermite")
    word = _search(f, g, max_length)
    if word is not None:
        return OrbitAnswer("yes", word, "search")
    return OrbitAnswer("unknown", None, "search")


def gcd_invariant(f):
    """``gcd`` of the two coefficients over a base with ``H^2 = Z``."""
    return gcd(abs(f.c0.coords[0]), abs(f.c1.coords[0]))


# ---------------------------------------------------------------------------
# splittings and iterated duals


@dataclass(frozen=True)
class Splitting:
    h0: GradedClass
    h1: GradedClass

    def is_trivial(self):
        return self.h0.is_zero() and self.h1.is_zero()

    def to_json(self):
        return {"h0": self.h0.to_json(), "h1": self.h1.to_json()}


@dataclass(frozen=True)
class IteratedDual:
    chat0: GradedClass
    chat1: GradedClass
    split_hat: Splitting
    dual_pairs: tuple = field(default=(), repr=False)

    def bundle(self, base):
        return TorusBundleClass(base, self.chat0, self.chat1)

    def to_json(self):
        return {
            "c_hat": [self.chat0.to_json(), self.chat1.to_json()],
            "split_hat": self.split_hat.to_json(),
        }


def _as_class(base, x):
    if isinstance(x, GradedClass):
        return base.element(2, x.coords)
    return base.element(2, x)


def iterated_dual(base, c0, c1, split):
    """Dualize both circle factors of the T^2-bundle ``(c0, c1)``."""
    base = make_space(base)
    c0, c1 = _as_class(base, c0), _as_class(base, c1)
    chats, hhats, pairs = [], [], []
    for c, h in ((c0, split.h0), (c1, split.h1)):
        R = gysin_cohomology(CircleBundle(base, c))
        try:
            h = R.element(3, h.coords)
            t, b = R.decompose(h)
        except (ValueError, KeyError) as exc:
            raise NotDualizable(str(exc)) from exc
        q = dualize(make_pair(base, c, t, b))
        Rhat = gysin_cohomology(CircleBundle(base, q.c))
        chats.append(q.c)
        hhats.append(Rhat.compose(q.t, q.b))
        pairs.append(q)
    return IteratedDual(chats[0], chats[1], Splitting(hhats[0], hhats[1]), tuple(pairs))


@dataclass(frozen=True, eq=False)
class SphereBundleH3:
    group: object
    restriction: Homomorphism
    injective: bool


def sphere_bundle_h3(base, c0, c1):
    """``H^3(S(L0 + L1))`` and the restriction ``i0^* + i1^*`` to the two
    circle bundles, assuming ``c0 u c1 = 0`` so a Thom class exists.

    Generators of ``H^3(S(V))``: the pullbacks of the ``H^3(B)`` generators,
    then the Thom class ``Th``. ``i0^* Th`` is the distinguished class on
    ``E0`` whose fibre integral is ``-c1`` (and symmetrically on ``E1``).
    """
    base = make_space(base)
    c0, c1 = _as_class(base, c0), _as_class(base, c1)
    if not cup(base, c0, c1, strict=False).is_zero():
        raise ObstructionNonzero("c0 u c1 != 0: the sphere bundle has no Thom class")
    R0 = gysin_cohomology(CircleBundle(base, c0))
    R1 = gysin_cohomology(CircleBundle(base, c1))
    H3B = base.group(3)
    H3SV = H3B + base.group(0)
    th0 = R0.lift(-c1)
    th1 = R1.lift(-c0)
    G0, G1 = R0[3].group, R1[3].group
    cols = []
    for j in range(H3B.ngens):
        e = [0] * H3B.ngens
        e[j] = 1
        beta = GradedClass(3, tuple(e))
        cols.append(list(pullback(R0, beta).coords) + list(pullback(R1, beta).coords))
    cols.append(list(th0.coords) + list(th1.coords))
    M = np.array(cols, dtype=object).T.reshape(G0.ngens + G1.ngens, H3SV.ngens)
    f = Homomorphism(H3SV, G0 + G1, M)
    K, _ = kernel(f)
    return SphereBundleH3(H3SV, f, K.is_trivial())


def zero_splittings(base, c0, c1):
    """The trivial splitting of ``h = 0`` followed by generators of the
    nontrivial ones, ``(r0, r1) = (i0^* X, -i1^* X)`` for ``X`` in
    ``H^3(S(V))``."""
    base = make_space(base)
    c0, c1 = _as_class(base, c0), _as_class(base, c1)
    info = sphere_bundle_h3(base, c0, c1)
    R0 = gysin_cohomology(CircleBundle(base, c0))
    R1 = gysin_cohomology(CircleBundle(base, c1))
    G0, G1 = R0[3].group, R1[3].group
    n0 = G0.ngens
    out = [Splitting(GradedClass(3, (0,) * n0), GradedClass(3, (0,) * G1.ngens))]
    M = info.restriction.matrix
    for j in range(M.shape[1]):
        r0 = G0.reduce(M[:n0, j])
        r1 = G1.reduce([-x for x in M[n0:, j]])
        if not any(r0) and not any(r1):
            continue
        lead = next(x for x in list(r0) + list(r1) if x)
        if lead < 0:
            r0, r1 = G0.reduce([-x for x in r0]), G1.reduce([-x for x in r1])
        out.append(Splitting(GradedClass(3, r0), GradedClass(3, r1)))
    return out


@dataclass(frozen=True)
class NonUniqueness:
    base: SpaceModel
    bundle: TorusBundleClass
    splittings: tuple
    duals: tuple
    orbit: OrbitAnswer
    injective: bool

    @property
    def detected(self):
        return self.orbit.answer == "no"

    def to_json(self):
        return {
            "bundle": self.bundle.to_json(),
            "splittings": [s.to_json() for s in self.splittings],
            "dual_chern_pairs": [[d.chat0.to_json(), d.chat1.to_json()] for d in self.duals],
            "restriction_injective": self.injective,
            "orbit_equivalent": self.orbit.to_json(),
            "non_unique": self.detected,
        }


def nonuniqueness(base="s2", c0=1, c1=1):
    """Iterated duals of ``h = 0`` through the trivial and the first
    nontrivial splitting, and whether their Chern pairs share an orbit."""
    base = make_space(base)
    f = TorusBundleClass(base, c0, c1)
    splits = zero_splittings(base, f.c0, f.c1)
    info = sphere_bundle_h3(base, f.c0, f.c1)
    duals = tuple(iterated_dual(base, f.c0, f.c1, s) for s in splits[:2])
    if len(duals) < 2:
        orbit = OrbitAnswer("yes", TwistMatrix.identity(), "single splitting")
    else:
        orbit = orbit_equivalent(base, duals[0].bundle(base), duals[1].bundle(base))
    return NonUniqueness(base, f, tuple(splits), duals, orbit, info.injective)
