"""Cohomology-ring models of the supported base spaces.

Descriptor grammar::

    pt | s1 | s2 | s3 | surface:g=<int>=0> | cp:r=<int>=1> | torus:n=<1|2|3>
       | lens:k=<int>=2>,r=<int>=1>

``lens:k,r`` is the total space of the circle bundle over CP^r with Chern
class ``k*z``. Its ring is generated by ``x`` in degree 2 (order ``k``) plus
the top class ``vol``; for composite ``k`` the multiplicative structure is an
extrapolation and the model says so in ``metadata``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .abgroup import ZERO, AbGroup, Homomorphism, zeros
from .errors import BadParameters, DegreeOverflow, UnknownDescriptor

__all__ = [
    "CATALOG",
    "GradedClass",
    "SpaceModel",
    "cup",
    "cup_map",
    "lens_like_model",
    "make_space",
    "product_model",
]


@dataclass(frozen=True)
class GradedClass:
    degree: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def is_zero(self):
        return not any(self.coords)

    def __neg__(self):
        return GradedClass(self.degree, tuple(-c for c in self.coords))

    def to_json(self):
        return list(self.coords)


@dataclass(frozen=True, eq=False)
class SpaceModel:
    descriptor: str
    dimension: int
    groups: dict
    names: dict
    cup_tensors: dict = field(repr=False)
    oriented: bool = True
    metadata: dict = field(default_factory=dict)

    @property
    def fundamental_degree(self):
        return self.dimension if self.oriented else None

    def group(self, degree):
        return self.groups.get(degree, ZERO)

    def generator_names(self, degree):
        return self.names.get(degree, ())

    def element(self, degree, coords):
        G = self.group(degree)
        if isinstance(coords, int):
            coords = [coords]
        coords = list(coords)
        if len(coords) != G.ngens:
            raise ValueError(
                f"{self.descriptor}: H^{degree} has {G.ngens} generators, got {len(coords)} coordinates"
            )
        return GradedClass(degree, G.reduce(coords))

    def zero(self, degree):
        return GradedClass(degree, (0,) * self.group(degree).ngens)

    def generator(self, name):
        for deg, names in self.names.items():
            if name in names:
                coords = [0] * len(names)
                coords[names.index(name)] = 1
                return GradedClass(deg, tuple(coords))
        raise KeyError(f"{self.descriptor} has no generator named {name!r}")

    def unit(self):
        return self.generator(self.names[0][0])

    def top_class(self):
        return self.generator(self.names[self.dimension][-1])

    def tensor(self, p, q):
        T = self.cup_tensors.get((p, q))
        if T is None:
            return np.zeros((self.group(p + q).ngens, self.group(p).ngens, self.group(q).ngens), dtype=object)
        return T

    def same_as(self, other):
        return self.descriptor == other.descriptor

    def __eq__(self, other):
        return isinstance(other, SpaceModel) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)


def _cup_total(space, x, y):
    p, q = x.degree, y.degree
    n = p + q
    T = space.tensor(p, q)
    G = space.group(n)
    if G.ngens == 0:
        return space.zero(n)
    out = [0] * G.ngens
    for k in range(G.ngens):
        s = 0
        for i, a in enumerate(x.coords):
            if a:
                for j, b in enumerate(y.coords):
                    if b:
                        s += T[k, i, j] * a * b
        out[k] = s
    return GradedClass(n, G.reduce(out))


def cup(space, x, y, strict=True):
    """Cup product ``x u y``.

    With ``strict`` (the default) a target degree above the dimension raises
    ``DegreeOverflow``; internal callers pass ``strict=False`` and get the
    zero class instead.
    """
    if strict and x.degree + y.degree > space.dimension:
        raise DegreeOverflow(
            f"deg {x.degree} + deg {y.degree} exceeds dim {space.dimension} of {space.descriptor}"
        )
    return _cup_total(space, x, y)


def cup_map(space, c, p):
    """``x -> c u x`` as a homomorphism ``H^p -> H^{p+deg c}``."""
    src = space.group(p)
    dst = space.group(p + c.degree)
    M = zeros(dst.ngens, src.ngens)
    for j in range(src.ngens):
        e = [0] * src.ngens
        e[j] = 1
        M[:, j] = _cup_total(space, c, GradedClass(p, e)).coords
    return Homomorphism(src, dst, M)


# ---------------------------------------------------------------------------
# construction from a basis with a multiplication rule


def _build(descriptor, dimension, basis, mult, metadata=None):
    """``basis``: degree -> list of (name, order); ``mult(a, b)`` returns a
    dict {target name: coefficient} for basis names ``a``, ``b``."""
    groups, names, index = {}, {}, {}
    for deg, gens in basis.items():
        free = [(nm, o) for nm, o in gens if o == 0]
        tors = sorted([(nm, o) for nm, o in gens if o], key=lambda t: t[1])
        ordered = free + tors
        groups[deg] = AbGroup.from_orders([o for _, o in ordered])
        if groups[deg].orders != tuple(o for _, o in ordered):
            raise ValueError(f"degree {deg} of {descriptor} is not in canonical form")
        names[deg] = tuple(nm for nm, _ in ordered)
        for i, (nm, _) in enumerate(ordered):
            index[nm] = (deg, i)
    tensors = {}
    for p, q in itertools.product(names, repeat=2):
        if p + q > dimension:
            continue
        G = groups.get(p + q, ZERO)
        T = np.zeros((G.ngens, len(names[p]), len(names[q])), dtype=object)
        for i, a in enumerate(names[p]):
            for j, b in enumerate(names[q]):
                for target, coef in mult(a, b).items():
                    deg, k = index[target]
                    if deg != p + q:
                        raise ValueError(f"{a} * {b} = {target} has the wrong degree")
                    T[k, i, j] += coef
        for k, d in enumerate(G.orders):
            if d:
                T[k] %= d
        tensors[(p, q)] = T
    space = SpaceModel(descriptor, dimension, groups, names, tensors, True, dict(metadata or {}))
    check_model(space)
    return space


def _exterior_names(n):
    basis = {}
    for p in range(n + 1):
        basis[p] = [("1" if not I else "u" + "u".join(str(i + 1) for i in I), 0)
                    for I in itertools.combinations(range(n), p)]
    return basis


def _exterior_mult(a, b):
    I = [] if a == "1" else [int(t) for t in a.split("u")[1:]]
    J = [] if b == "1" else [int(t) for t in b.split("u")[1:]]
    if set(I) & set(J):
        return {}
    seq = I + J
    inversions = sum(1 for x, y in itertools.combinations(seq, 2) if x > y)
    K = sorted(seq)
    name = "1" if not K else "u" + "u".join(str(i) for i in K)
    return {name: (-1) ** inversions}


def _unit_mult(rest):
    def mult(a, b):
        if a == "1":
            return {b: 1}
        if b == "1":
            return {a: 1}
        return rest(a, b)
    return mult


def _power_mult(symbol, top_power):
    def rest(a, b):
        e = _power(a, symbol) + _power(b, symbol)
        if min(_power(a, symbol), _power(b, symbol)) < 0 or e > top_power:
            return {}
        return {_power_name(symbol, e): 1}
    return _unit_mult(rest)


def _power(name, symbol):
    if name == symbol:
        return 1
    m = re.fullmatch(re.escape(symbol) + r"\^(\d+)", name)
    return int(m.group(1)) if m else -1


def _power_name(symbol, e):
    return symbol if e == 1 else f"{symbol}^{e}"


def _surface(g, descriptor):
    basis = {0: [("1", 0)], 2: [("vol", 0)]}
    if g:
        basis[1] = [(f"a{i}", 0) for i in range(1, g + 1)] + [(f"b{i}", 0) for i in range(1, g + 1)]

    def rest(a, b):
        if a[0] in "ab" and b[0] in "ab" and a[1:] == b[1:] and a[0] != b[0]:
            return {"vol": 1 if a[0] == "a" else -1}
        return {}

    return _build(descriptor, 2, basis, _unit_mult(rest))


def _cp(r, descriptor):
    if r < 1:
        raise BadParameters("cp needs r >= 1")
    basis = {0: [("1", 0)]}
    for l in range(1, r + 1):
        basis[2 * l] = [(_power_name("z", l), 0)]
    return _build(descriptor, 2 * r, basis, _power_mult("z", r))


def lens_like_model(k, r):
    """Ring model of the circle bundle over CP^r with Chern class ``k*z``."""
    if not (isinstance(k, int) and isinstance(r, int)) or k < 2 or r < 1:
        raise BadParameters(f"lens model needs k >= 2 and r >= 1, got k={k}, r={r}")
    basis = {0: [("1", 0)], 2 * r + 1: [("vol", 0)]}
    for l in range(1, r + 1):
        basis[2 * l] = [(_power_name("x", l), k)]
    meta = {"ring_structure": "extrapolated" if not _is_prime(k) else "generated by x"}
    return _build(f"lens:k={k},r={r}", 2 * r + 1, basis, _power_mult("x", r), meta)


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


_GRAMMAR = [
    (r"pt", lambda m: _build("pt", 0, {0: [("1", 0)]}, _unit_mult(lambda a, b: {}))),
    (r"s1", lambda m: _build("s1", 1, _exterior_names(1), _exterior_mult)),
    (r"s2", lambda m: _build("s2", 2, {0: [("1", 0)], 2: [("z", 0)]}, _unit_mult(lambda a, b: {}))),
    (r"s3", lambda m: _build("s3", 3, {0: [("1", 0)], 3: [("vol", 0)]}, _unit_mult(lambda a, b: {}))),
    (r"surface:g=(\d+)", lambda m: _surface(int(m.group(1)), m.group(0))),
    (r"cp:r=(\d+)", lambda m: _cp(int(m.group(1)), m.group(0))),
    (r"torus:n=([123])", lambda m: _build(m.group(0), int(m.group(1)),
                                          _exterior_names(int(m.group(1))), _exterior_mult)),
    (r"lens:k=(\d+),r=(\d+)", lambda m: lens_like_model(int(m.group(1)), int(m.group(2)))),
]

_cache = {}

# representative descriptors used by the randomized and exhaustive checks
CATALOG = (
    "pt", "s1", "s2", "s3",
    "surface:g=0", "surface:g=1", "surface:g=2",
    "cp:r=1", "cp:r=2", "cp:r=3", "cp:r=4",
    "torus:n=1", "torus:n=2", "torus:n=3",
    "lens:k=2,r=2", "lens:k=3,r=2", "lens:k=5,r=3", "lens:k=7,r=2",
)


def make_space(descriptor):
    """Build (and cache) the model named by ``descriptor``."""
    if isinstance(descriptor, SpaceModel):
        return descriptor
    descriptor = descriptor.strip()
    if descriptor in _cache:
        return _cache[descriptor]
    for pattern, factory in _GRAMMAR:
        m = re.fullmatch(pattern, descriptor)
        if m:
            try:
                space = factory(m)
            except BadParameters as exc:
                raise UnknownDescriptor(str(exc)) from exc
            _cache[descriptor] = space
            return space
    raise UnknownDescriptor(f"unsupported space descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# structural checks


def _basis_classes(space, p):
    n = space.group(p).ngens
    for i in range(n):
        e = [0] * n
        e[i] = 1
        yield GradedClass(p, tuple(e))


def check_model(space):
    """Raise ``ValueError`` unless the ring axioms and duality hold."""
    degrees = sorted(space.names)
    one = GradedClass(0, (1,))
    for p in degrees:
        for x in _basis_classes(space, p):
            if _cup_total(space, one, x) != x or _cup_total(space, x, one) != x:
                raise ValueError(f"unit law fails on {space.descriptor} in degree {p}")
    for p, q in itertools.product(degrees, repeat=2):
        if p + q > space.dimension:
            continue
        G = space.group(p + q)
        for x in _basis_classes(space, p):
            for y in _basis_classes(space, q):
                xy = _cup_total(space, x, y)
                yx = _cup_total(space, y, x)
                sign = (-1) ** (p * q)
                if G.reduce([sign * c for c in yx.coords]) != xy.coords:
                    raise ValueError(f"graded commutativity fails on {space.descriptor}")
    for p, q, s in itertools.product(degrees, repeat=3):
        if p + q + s > space.dimension:
            continue
        for x in _basis_classes(space, p):
            for y in _basis_classes(space, q):
                for z in _basis_classes(space, s):
                    a = _cup_total(space, _cup_total(space, x, y), z)
                    b = _cup_total(space, x, _cup_total(space, y, z))
                    if a != b:
                        raise ValueError(f"associativity fails on {space.descriptor}")
    if space.oriented:
        top = space.group(space.dimension)
        if top != AbGroup(1):
            raise ValueError(f"{space.descriptor}: top group is {top}, expected Z")
        for p in range(space.dimension + 1):
            A, B = space.group(p), space.group(space.dimension - p)
            if A.rank != B.rank:
                raise ValueError(f"{space.descriptor}: ranks in degrees {p} and {space.dimension - p} differ")
            if A.rank == 0:
                continue
            P = np.zeros((A.rank, B.rank), dtype=object)
            xs = list(_basis_classes(space, p))[: A.rank]
            ys = list(_basis_classes(space, space.dimension - p))[: B.rank]
            for i, x in enumerate(xs):
                for j, y in enumerate(ys):
                    P[i, j] = _cup_total(space, x, y).coords[0]
            if abs(_det(P)) != 1:
                raise ValueError(f"{space.descriptor}: pairing in degree {p} is not unimodular")


def _det(M):
    n = M.shape[0]
    if n == 0:
        return 1
    if n == 1:
        return M[0, 0]
    return sum((-1) ** j * M[0, j] * _det(np.delete(M[1:], j, axis=1)) for j in range(n) if M[0, j])


def product_model(X, Y, descriptor=None):
    """Künneth product of two torsion-free models."""
    for S in (X, Y):
        if any(G.torsion for G in S.groups.values()):
            raise BadParameters("product_model only handles torsion-free models")
    dim = X.dimension + Y.dimension
    basis = {}
    for p in X.names:
        for q in Y.names:
            for a in X.names[p]:
                for b in Y.names[q]:
                    basis.setdefault(p + q, []).append((f"{a}|{b}", 0))
    deg_of = {}
    for p, ns in X.names.items():
        for nm in ns:
            deg_of[("X", nm)] = p
    for q, ns in Y.names.items():
        for nm in ns:
            deg_of[("Y", nm)] = q

    def basic(S, key, a, b):
        pa, pb = deg_of[(key, a)], deg_of[(key, b)]
        if pa + pb > S.dimension:
            return {}
        x = S.generator(a)
        y = S.generator(b)
        xy = _cup_total(S, x, y)
        return {S.names[pa + pb][i]: c for i, c in enumerate(xy.coords) if c}

    def mult(u, v):
        a1, b1 = u.split("|")
        a2, b2 = v.split("|")
        sign = (-1) ** (deg_of[("Y", b1)] * deg_of[("X", a2)])
        out = {}
        for ta, ca in basic(X, "X", a1, a2).items():
            for tb, cb in basic(Y, "Y", b1, b2).items():
                out[f"{ta}|{tb}"] = out.get(f"{ta}|{tb}", 0) + sign * ca * cb
        return out

    return _build(descriptor or f"{X.descriptor}x{Y.descriptor}", dim, basis, mult)
