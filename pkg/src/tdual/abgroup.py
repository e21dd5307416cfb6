"""Finitely generated abelian groups over exact integer arithmetic.

Groups are kept in invariant-factor form ``Z^r + Z/d1 + Z/d2 + ...`` with
``d1 | d2 | ...`` and every ``di >= 2``. Generators are ordered the same way
as the text rendering: the ``r`` free generators first, then one generator
per invariant factor.

Homomorphisms use column vectors: column ``j`` of the matrix is the image of
domain generator ``j`` in codomain coordinates.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

import numpy as np

from .errors import IllFormedHom
from .kernels import identity, smith_normal_form, to_object

__all__ = [
    "AbGroup",
    "Ambiguous",
    "Homomorphism",
    "Presented",
    "Resolved",
    "ZERO",
    "Z",
    "analyze_hom",
    "cokernel",
    "extension_candidates",
    "int_inverse",
    "integer_kernel",
    "is_isomorphic",
    "kernel",
    "present",
    "resolve_extension",
    "smith_normal_form",
    "solve_int",
]


# ---------------------------------------------------------------------------
# integer matrix helpers


def zeros(rows, cols):
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def matmul(A, B):
    A = to_object(A)
    B = to_object(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


def int_inverse(U):
    """Exact inverse of a unimodular integer matrix."""
    U = to_object(U)
    n = U.shape[0]
    aug = [[Fraction(int(U[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    out = zeros(n, n)
    for i in range(n):
        for j in range(n):
            v = aug[i][n + j]
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular")
            out[i, j] = int(v)
    return out


def _diag(D):
    return [D[i, i] for i in range(min(D.shape))]


def integer_kernel(A):
    """Basis (as columns) of the lattice ``{x in Z^n : A x = 0}``."""
    A = to_object(A)
    m, n = A.shape
    if m == 0:
        return identity(n)
    _, D, V = smith_normal_form(A)
    rank = sum(1 for d in _diag(D) if d != 0)
    return V[:, rank:]


def solve_int(A, b):
    """Some integer ``x`` with ``A x = b``, or ``None`` if there is none."""
    A = to_object(A)
    b = [int(v) for v in b]
    m, n = A.shape
    if m == 0:
        return [0] * n
    U, D, V = smith_normal_form(A)
    c = matmul(U, np.array(b, dtype=object).reshape(m, 1))[:, 0]
    z = [0] * n
    diag = _diag(D)
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            z[i] = c[i] // d
    return list(matmul(V, np.array(z, dtype=object).reshape(n, 1))[:, 0])


def lattice_basis(G):
    """Basis columns of the lattice spanned by the columns of ``G``."""
    G = to_object(G)
    m = G.shape[0]
    if G.shape[1] == 0:
        return zeros(m, 0)
    U, D, _ = smith_normal_form(G)
    Uinv = int_inverse(U)
    cols = [Uinv[:, i] * d for i, d in enumerate(_diag(D)) if d != 0]
    if not cols:
        return zeros(m, 0)
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class AbGroup:
    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2; use AbGroup.from_orders")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"{a} does not divide {b}; use AbGroup.from_orders")

    @classmethod
    def from_orders(cls, *orders):
        """Canonicalize a direct sum of cyclic groups (``0`` means ``Z``)."""
        if len(orders) == 1 and not isinstance(orders[0], int):
            orders = tuple(orders[0])
        rank = sum(1 for d in orders if d == 0)
        finite = [abs(int(d)) for d in orders if d != 0]
        return cls(rank, _invariant_factors(finite))

    @classmethod
    def from_elementary_divisors(cls, rank, prime_powers):
        return cls(rank, _invariant_factors(prime_powers))

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text in ("0", ""):
            return cls()
        orders = []
        for term in text.split("+"):
            term = term.strip()
            m = re.fullmatch(r"Z(?:\^(\d+))?", term)
            if m:
                orders += [0] * int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z/(\d+)", term)
            if m:
                orders.append(int(m.group(1)))
                continue
            raise ValueError(f"cannot parse group term {term!r}")
        return cls.from_orders(orders)

    @property
    def orders(self):
        return (0,) * self.rank + self.torsion

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    def torsion_order(self):
        return prod(self.torsion)

    def torsion_part(self):
        return AbGroup(0, self.torsion)

    def free_part(self):
        return AbGroup(self.rank)

    def is_trivial(self):
        return self.ngens == 0

    def is_free(self):
        return not self.torsion

    def is_finite(self):
        return self.rank == 0

    def elementary_divisors(self):
        out = []
        for d in self.torsion:
            out += [p**e for p, e in _factor(d).items()]
        return sorted(out)

    def reduce(self, coords):
        coords = [int(c) for c in coords]
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(c % d if d else c for c, d in zip(coords, self.orders))

    def relations(self):
        """Relation matrix of the standard presentation (columns are relations)."""
        cols = [i for i, d in enumerate(self.orders) if d]
        R = zeros(self.ngens, len(cols))
        for k, i in enumerate(cols):
            R[i, k] = self.orders[i]
        return R

    def __add__(self, other):
        if isinstance(other, (Resolved, Ambiguous)):
            return other.plus(self)
        return AbGroup.from_orders(self.orders + other.orders)

    def __str__(self):
        if self.is_trivial():
            return "0"
        terms = []
        if self.rank == 1:
            terms.append("Z")
        elif self.rank > 1:
            terms.append(f"Z^{self.rank}")
        terms += [f"Z/{d}" for d in self.torsion]
        return " + ".join(terms)


def _factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_factors(finite_orders):
    by_prime = {}
    for d in finite_orders:
        for p, e in _factor(d).items():
            by_prime.setdefault(p, []).append(e)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for p, exps in by_prime.items():
        exps = sorted(exps, reverse=True)
        for i, e in enumerate(exps):
            factors[length - 1 - i] *= p**e
    return tuple(d for d in factors if d > 1)


ZERO = AbGroup()
Z = AbGroup(1)


def is_isomorphic(A, B):
    """True iff the two groups agree after canonicalization."""
    return _canon(A) == _canon(B)


def _canon(G):
    if isinstance(G, AbGroup):
        return AbGroup.from_orders(G.orders)
    if isinstance(G, str):
        return AbGroup.parse(G)
    return AbGroup.from_orders(list(G))


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presented:
    """``Z^m / colspace(R)`` in canonical form.

    ``to_canon`` maps old generator coordinates to canonical coordinates and
    ``from_canon`` expresses each canonical generator in old coordinates.
    """

    group: AbGroup
    to_canon: np.ndarray = field(repr=False)
    from_canon: np.ndarray = field(repr=False)

    def convert(self, coords):
        v = matmul(self.to_canon, np.array([int(c) for c in coords], dtype=object).reshape(-1, 1))
        return self.group.reduce(v[:, 0])


def present(relations, ngens):
    """Canonicalize the group with ``ngens`` generators and relation columns."""
    R = to_object(relations).reshape(ngens, -1) if ngens else zeros(0, 0)
    if ngens == 0:
        return Presented(ZERO, zeros(0, 0), zeros(0, 0))
    U, D, _ = smith_normal_form(R)
    diag = _diag(D)
    orders = [diag[i] if i < len(diag) else 0 for i in range(ngens)]
    free_rows = [i for i, d in enumerate(orders) if d == 0]
    tors_rows = [i for i, d in enumerate(orders) if d > 1]
    rows = free_rows + tors_rows
    Uinv = int_inverse(U)
    group = AbGroup(len(free_rows), tuple(orders[i] for i in tors_rows))
    to_c = U[rows, :] if rows else zeros(0, ngens)
    from_c = Uinv[:, rows] if rows else zeros(ngens, 0)
    return Presented(group, to_c, from_c)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class Homomorphism:
    domain: AbGroup
    codomain: AbGroup
    matrix: np.ndarray = field(repr=False)
    domain_names: tuple = None
    codomain_names: tuple = None

    def __post_init__(self):
        M = to_object(self.matrix).reshape(self.codomain.ngens, self.domain.ngens)
        for i, d in enumerate(self.codomain.orders):
            if d:
                M[i, :] = [x % d for x in M[i, :]]
        object.__setattr__(self, "matrix", M)
        for j, e in enumerate(self.domain.orders):
            if e == 0:
                continue
            for i, d in enumerate(self.codomain.orders):
                v = e * M[i, j]
                if (d == 0 and v != 0) or (d and v % d):
                    raise IllFormedHom(
                        f"generator {j} has order {e} but its image does not"
                    )

    @classmethod
    def zero(cls, domain, codomain):
        return cls(domain, codomain, zeros(codomain.ngens, domain.ngens))

    def __call__(self, coords):
        x = np.array([int(c) for c in coords], dtype=object).reshape(-1, 1)
        if x.shape[0] != self.domain.ngens:
            raise ValueError("coordinate length does not match the domain")
        return self.codomain.reduce(matmul(self.matrix, x)[:, 0])

    def __matmul__(self, other):
        if other.codomain != self.domain:
            raise ValueError("cannot compose: codomain/domain mismatch")
        return Homomorphism(other.domain, self.codomain, matmul(self.matrix, other.matrix))

    def __add__(self, other):
        return Homomorphism(self.domain, self.codomain, self.matrix + other.matrix)

    def is_zero(self):
        return all(x == 0 for x in self.matrix.flat)

    def _extended(self):
        # [M | R_cod]: solutions (x, w) describe x with M x = 0 in the codomain
        return np.concatenate([self.matrix, self.codomain.relations()], axis=1)

    def preimage(self, y):
        """Some domain element mapping to ``y``, or ``None``."""
        x = solve_int(self._extended(), list(y))
        if x is None:
            return None
        return self.domain.reduce(x[: self.domain.ngens])

    def kernel_lattice(self):
        m = self.domain.ngens
        basis = integer_kernel(self._extended())
        return lattice_basis(basis[:m, :])


def kernel(f):
    """Kernel of ``f`` with its inclusion map into the domain."""
    L = f.kernel_lattice()
    rel = f.domain.relations()
    Y = zeros(L.shape[1], rel.shape[1])
    for k in range(rel.shape[1]):
        y = solve_int(L, rel[:, k])
        if y is None:
            raise IllFormedHom("domain relation outside the kernel lattice")
        Y[:, k] = y
    P = present(Y, L.shape[1])
    incl = Homomorphism(P.group, f.domain, matmul(L, P.from_canon))
    return P.group, incl


def cokernel(f):
    """Cokernel of ``f`` with the quotient map from the codomain."""
    P = present(f._extended(), f.codomain.ngens)
    return P.group, Homomorphism(f.codomain, P.group, P.to_canon)


def image(f):
    P = present(f.kernel_lattice(), f.domain.ngens)
    return P.group


def analyze_hom(f):
    """Return ``(kernel, image, cokernel)`` as canonical groups."""
    return kernel(f)[0], image(f), cokernel(f)[0]


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True)
class Resolved:
    group: AbGroup

    resolved = True

    @property
    def rank(self):
        return self.group.rank

    @property
    def order(self):
        return self.group.torsion_order()

    @property
    def candidates(self):
        return (self.group,)

    def plus(self, G):
        return Resolved(self.group + G)

    def drop_free(self, k=1):
        return Resolved(AbGroup(self.group.rank - k, self.group.torsion))

    def __str__(self):
        return str(self.group)


@dataclass(frozen=True)
class Ambiguous:
    """Middle term of an unresolved extension.

    ``order`` is the torsion order accumulated from the two ends and
    ``composition_factor`` the finite quotient glued on at each step.
    """

    order: int
    composition_factor: AbGroup
    candidates: tuple
    rank: int = 0

    resolved = False

    def plus(self, G):
        return Ambiguous(
            self.order * G.torsion_order(),
            self.composition_factor,
            tuple(sorted({c + G for c in self.candidates}, key=_sort_key)),
            self.rank + G.rank,
        )

    def drop_free(self, k=1):
        return Ambiguous(
            self.order,
            self.composition_factor,
            tuple(AbGroup(c.rank - k, c.torsion) for c in self.candidates),
            self.rank - k,
        )

    def __str__(self):
        body = f"order={self.order}, factors={self.composition_factor}"
        if self.rank == 0:
            return body
        free = "Z" if self.rank == 1 else f"Z^{self.rank}"
        return f"{free} + {body}"


def _sort_key(G):
    return (G.rank, len(G.torsion), G.torsion)


def _quotient_reps(sub, e):
    # representatives of sub / e*sub, one coordinate range per generator
    ranges = [range(e) if d == 0 else range(gcd(e, d)) for d in sub.orders]
    for t in itertools.product(*ranges):
        yield t


def extension_candidates(sub, quot):
    """All middle groups ``G`` of short exact sequences ``sub -> G -> quot``."""
    tors = [(j, e) for j, e in enumerate(quot.orders) if e]
    if not tors or sub.is_trivial():
        return (sub + quot,)
    m, n = sub.ngens, quot.ngens
    seen = set()
    choices = [list(_quotient_reps(sub, e)) for _, e in tors]
    base = zeros(m + n, 0)
    sub_rel = sub.relations()
    rel_cols = [np.concatenate([sub_rel[:, k], [0] * n]) for k in range(sub_rel.shape[1])]
    for eps in itertools.product(*choices):
        cols = list(rel_cols)
        for (j, e), vec in zip(tors, eps):
            col = [-v for v in vec] + [0] * n
            col[m + j] = e
            cols.append(col)
        R = np.array(cols, dtype=object).T if cols else base
        seen.add(present(R, m + n).group)
    return tuple(sorted(seen, key=_sort_key))


def resolve_extension(sub, quot, rule=None):
    """Middle term of ``0 -> sub -> G -> quot -> 0``.

    ``sub`` may itself be an unresolved result (iterated extensions). A
    ``rule`` callable may pick one candidate from an ambiguous result; it
    receives the :class:`Ambiguous` value and returns an ``AbGroup`` or
    ``None``.
    """
    if isinstance(sub, AbGroup):
        sub = Resolved(sub)
    if isinstance(sub, Resolved) and sub.group.is_trivial():
        return Resolved(quot)
    if quot.is_trivial():
        return sub
    if quot.is_free():
        return sub.plus(quot)
    found = set()
    for s in sub.candidates:
        found.update(extension_candidates(s, quot))
    candidates = tuple(sorted(found, key=_sort_key))
    if len(candidates) == 1:
        return Resolved(candidates[0])
    sub_order = sub.order
    result = Ambiguous(
        sub_order * quot.torsion_order(),
        quot.torsion_part(),
        candidates,
        sub.rank + quot.rank,
    )
    if rule is not None:
        picked = rule(result)
        if picked is not None:
            if picked not in candidates:
                raise ValueError(f"resolution rule picked {picked}, not a candidate")
            return Resolved(picked)
    return result


def image_lattice(f):
    """Columns generating ``im f + relations`` inside the codomain lattice."""
    return f._extended()


def same_subgroup(G, A, B):
    """Do the column sets ``A`` and ``B`` generate the same subgroup of ``G``?"""
    if G.ngens == 0:
        return True
    R = G.relations()
    LA = np.concatenate([to_object(A).reshape(G.ngens, -1), R], axis=1)
    LB = np.concatenate([to_object(B).reshape(G.ngens, -1), R], axis=1)
    for X, Y in ((LA, LB), (LB, LA)):
        for k in range(X.shape[1]):
            if solve_int(Y, X[:, k]) is None:
                return False
    return True
