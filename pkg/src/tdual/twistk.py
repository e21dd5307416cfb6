"""Desk-scale K-theory of the examples: untwisted groups from cohomology,
twisted groups of 3-manifolds, line bundles over CP^r, the torsion-twist
example over lens-type bases, and the admissibility check on the circle.

There is no general spectral-sequence engine here. ``k_untwisted`` assumes
the Atiyah-Hirzebruch sequence degenerates and refuses inputs where a
differential could hit torsion from a nonzero source; differentials into
torsion-free groups vanish because the sequence degenerates rationally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgroup import AbGroup, Ambiguous, Resolved, is_isomorphic, resolve_extension
from .errors import BadParameters, UnsupportedDimension, UnsupportedTwist
from .gysin import CircleBundle, GysinResult, gysin_cohomology
from .pair import dualize, make_pair
from .space import SpaceModel, lens_like_model, make_space

__all__ = [
    "AdmissibilityReport",
    "KGroups",
    "TorsionReport",
    "k_cpr",
    "k_surface_bundle",
    "k_twisted_3manifold",
    "k_untwisted",
    "same_k",
    "t_admissibility",
    "torsion_example",
    "two_primary_cyclic",
    "verify_tduality_k",
]


@dataclass(frozen=True)
class KGroups:
    k0: object
    k1: object
    assumptions: tuple = ()

    def shifted(self, note=None):
        extra = (note,) if note else ()
        return KGroups(self.k1, self.k0, self.assumptions + extra)

    def to_json(self):
        return {"k0": str(self.k0), "k1": str(self.k1), "assumptions": list(self.assumptions)}

    def __getitem__(self, i):
        return (self.k0, self.k1)[i % 2]


def same_k(a, b):
    """Equality of two K-group entries (resolved or not)."""
    if isinstance(a, AbGroup):
        a = Resolved(a)
    if isinstance(b, AbGroup):
        b = Resolved(b)
    if a.resolved and b.resolved:
        return is_isomorphic(a.group, b.group)
    if a.resolved != b.resolved:
        return False
    return a.rank == b.rank and a.order == b.order and set(a.candidates) == set(b.candidates)


def _sum(a, b):
    if b.resolved:
        return a.plus(b.group)
    if a.resolved:
        return b.plus(a.group)
    raise ValueError("cannot add two unresolved groups")


def two_primary_cyclic(amb):
    """Pick the cyclic candidate when every composition factor is ``Z/2``."""
    if amb.composition_factor != AbGroup(0, (2,)):
        return None
    target = AbGroup(amb.rank, (amb.order,))
    return target if target in amb.candidates else None


# ---------------------------------------------------------------------------
# untwisted K-theory


def _cohomology(source):
    if isinstance(source, GysinResult):
        dim = source.dimension
        groups = {}
        for n in range(dim + 1):
            H = source.cohomology(n)
            if not H.resolved:
                raise UnsupportedDimension(f"H^{n} is an unresolved extension")
            groups[n] = H.group
        return dim, groups
    space = make_space(source)
    return space.dimension, {n: space.group(n) for n in range(space.dimension + 1)}


def _check_degenerate(dim, groups):
    for p in range(dim + 1):
        if groups[p].is_trivial():
            continue
        for q in range(p + 3, dim + 1, 2):
            if groups[q].torsion:
                raise UnsupportedDimension(
                    f"cannot rule out an AHSS differential H^{p} -> H^{q} into torsion"
                )


def _assemble(groups, degrees):
    acc = Resolved(AbGroup())
    split = False
    for p in sorted(degrees, reverse=True):
        H = groups[p]
        if not H.is_trivial() and not (acc.resolved and acc.group.is_trivial()):
            split = True
        acc = resolve_extension(acc, H)
    return acc, split


def k_untwisted(source, rule=None):
    """``K^0`` and ``K^1`` assembled from even and odd cohomology."""
    dim, groups = _cohomology(source)
    _check_degenerate(dim, groups)
    flags = ["AHSS-degenerate"]
    k0, s0 = _assemble(groups, [p for p in groups if p % 2 == 0])
    k1, s1 = _assemble(groups, [p for p in groups if p % 2 == 1])
    out = []
    for k in (k0, k1):
        if not k.resolved and rule is not None:
            picked = rule(k)
            if picked is not None:
                flags.append(f"extension-rule:{getattr(rule, '__name__', 'custom')}")
                k = Resolved(picked)
        out.append(k)
    if s0 or s1:
        flags.append("extension-split")
    if not all(k.resolved for k in out):
        flags.append("extension-ambiguous")
    return KGroups(out[0], out[1], tuple(flags))


# ---------------------------------------------------------------------------
# twisted K-theory


def k_twisted_3manifold(k_of_e, n):
    """Twisted K-theory of a closed oriented 3-manifold with twist ``n``.

    ``n = 0`` returns ``k_of_e`` unchanged.
    """
    if n == 0:
        return k_of_e
    if k_of_e.k0.rank < 1 or k_of_e.k1.rank < 1:
        raise BadParameters("expected the K-theory of a closed oriented 3-manifold")
    k0 = k_of_e.k0.drop_free(1)
    k1 = Resolved(AbGroup(k_of_e.k1.rank - 1) + AbGroup.from_orders(abs(n)))
    return KGroups(k0, k1, k_of_e.assumptions + (f"twist={n}:mayer-vietoris",))


def k_surface_bundle(g, k, n=0):
    """``K(E_k, n)`` for the bundle of degree ``k`` over the genus-``g`` surface."""
    E = gysin_cohomology(CircleBundle(make_space(f"surface:g={g}"), k))
    return k_twisted_3manifold(k_untwisted(E), n)


def verify_tduality_k(g, k, n):
    """Check ``K^i(E_k, n) = K^{i+1}`` of the dual pair for ``i = 0, 1``."""
    base = make_space(f"surface:g={g}")
    p = make_pair(base, k, n)
    q = dualize(p)
    left = k_surface_bundle(g, k, n)
    right = k_surface_bundle(g, q.c.coords[0], q.t.coords[0])
    return same_k(left.k0, right.k1) and same_k(left.k1, right.k0)


def k_cpr(n, k, r):
    """K-theory of ``E_{n,r}`` over CP^r with twist ``k``."""
    if r < 1:
        raise BadParameters("r >= 1 required")
    base = make_space(f"cp:r={r}")
    rule = two_primary_cyclic
    if k == 0:
        return k_untwisted(gysin_cohomology(CircleBundle(base, n)), rule=rule)
    if n == 0:
        dual = dualize(make_pair(base, 0, k))
        K = k_untwisted(gysin_cohomology(CircleBundle(base, dual.c)), rule=rule)
        return K.shifted(f"via T-duality to c={dual.c.coords[0]}, t={dual.t.coords[0]}")
    if r == 1:
        return k_twisted_3manifold(k_untwisted(gysin_cohomology(CircleBundle(base, n))), k)
    raise UnsupportedTwist(f"for r > 1 only the trivial bundle carries twists (n={n}, k={k})")


# ---------------------------------------------------------------------------
# torsion-twist example


@dataclass(frozen=True)
class TorsionReport:
    k: int
    r: int
    kFc: KGroups
    kF0: KGroups
    kF0twisted: KGroups
    distinct: bool
    dual_pair: object = field(default=None, repr=False)

    def to_json(self):
        return {
            "k": self.k,
            "r": self.r,
            "K(F_c)": self.kFc.to_json(),
            "K(F_0)": self.kF0.to_json(),
            "K(F_0,h)": self.kF0twisted.to_json(),
            "dual_pair": self.dual_pair.to_json() if self.dual_pair else None,
            "distinct": self.distinct,
        }


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


def _differ(a, b):
    if a.resolved and b.resolved:
        return not is_isomorphic(a.group, b.group)
    return a.rank != b.rank or a.order != b.order


def torsion_example(k, r):
    """Untwisted vs torsion-twisted K-theory of the trivial bundle over
    ``lens:k,r``, the twist coming from T-duality with ``F_c``."""
    if not _is_prime(k) or r <= 1:
        raise BadParameters(f"need k prime and r > 1, got k={k}, r={r}")
    B = lens_like_model(k, r)
    x = B.generator("x")
    Fc = gysin_cohomology(CircleBundle(B, x))
    kFc = k_untwisted(Fc)
    dual = dualize(make_pair(B, x, B.zero(2), B.zero(3)))
    kB = k_untwisted(B, rule=two_primary_cyclic)
    kF0 = KGroups(_sum(kB.k0, kB.k1), _sum(kB.k1, kB.k0), kB.assumptions + ("kunneth:trivial-bundle",))
    kF0tw = kFc.shifted("T-duality")
    distinct = _differ(kF0.k0, kF0tw.k0) or _differ(kF0.k1, kF0tw.k1)
    return TorsionReport(k, r, kFc, kF0, kF0tw, distinct, dual)


# ---------------------------------------------------------------------------
# T-admissibility on the circle


def _wedge(a, b):
    # a, b: sorted tuples over {"u", "v"}; returns (sign, product) or None
    if set(a) & set(b):
        return None
    seq = list(a) + list(b)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


def _mul(x, y):
    out = {}
    for (ma, sa), ca in x.items():
        for (mb, sb), cb in y.items():
            w = _wedge(ma, mb)
            if w is None:
                continue
            sign, m = w
            key = (m, sa + sb)
            out[key] = out.get(key, 0) + sign * ca * cb
    return {k: v for k, v in out.items() if v}


def _integrate_u(x):
    # fibre integration along the first circle: u ^ rest -> rest
    out = {}
    for (m, s), cf in x.items():
        if m and m[0] == "u":
            key = (m[1:], s)
            out[key] = out.get(key, 0) + cf
    return out


@dataclass(frozen=True)
class AdmissibilityReport:
    theory: str
    g: int
    matrix: tuple
    isIso: bool
    rows: tuple = ("1", "u")
    columns: tuple = ("1", "u")

    def to_json(self):
        sym = "B" if self.theory == "K" else "z"

        def fmt(entry):
            coef, shift = entry
            if coef == 0:
                return "0"
            if shift == 0:
                return str(coef)
            return f"{coef}*{sym}" if shift == 1 else f"{coef}*{sym}^{shift}"

        return {
            "theory": self.theory,
            "g": self.g,
            "images": {
                src: {dst: fmt(e) for dst, e in zip(self.columns, row)}
                for src, row in zip(self.rows, self.matrix)
            },
            "isIso": self.isIso,
        }


def t_admissibility(theory, g):
    """Matrix of ``p-hat_! o g^* o p^*`` on the basis ``(1, u)``.

    ``theory`` is ``"K"`` (periodicity by the Bott map) or ``"HR"``
    (coefficients ``R[z, z^-1]``). Shifts count powers of the periodicity
    element.
    """
    theory = theory.upper()
    if theory not in ("K", "HR"):
        raise BadParameters(f"unknown theory {theory!r}")
    line = {((), 0): 1}
    if g:
        line[(("u", "v"), 1)] = g
    images = []
    for src in ((), ("u",)):
        y = _integrate_u(_mul(line, {(src, 0): 1}))
        row = []
        for dst in ((), ("v",)):
            terms = [(s, cf) for (m, s), cf in y.items() if m == dst]
            if len(terms) > 1:
                raise AssertionError("mixed shifts in one entry")
            row.append((terms[0][1], terms[0][0]) if terms else (0, 0))
        images.append(tuple(row))
    (a, _), (b, sb) = images[0]
    (c, sc), (d, _) = images[1]
    det = a * d - b * c
    if theory == "K":
        # B is invertible; the determinant must be a unit of Z
        iso = abs(det) == 1
    else:
        # z is a unit of R[z, z^-1]; any nonzero real coefficient is a unit
        iso = det != 0
    return AdmissibilityReport(theory, g, tuple(images), iso)
