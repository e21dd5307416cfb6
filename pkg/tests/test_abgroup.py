import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tdual.abgroup import (
    AbGroup,
    Ambiguous,
    Homomorphism,
    Resolved,
    analyze_hom,
    cokernel,
    extension_candidates,
    is_isomorphic,
    kernel,
    resolve_extension,
)
from tdual.errors import IllFormedHom
from tdual.kernels import smith_normal_form


def G(text):
    return AbGroup.parse(text)


def test_canonical_form():
    assert AbGroup.from_orders(2, 3) == AbGroup(0, (6,))
    assert AbGroup.from_orders(4, 6, 0) == AbGroup(1, (2, 12))
    assert AbGroup.from_orders(1, 1) == AbGroup()
    assert str(AbGroup.from_orders(0, 0, 2, 6)) == "Z^2 + Z/2 + Z/6"
    assert str(AbGroup()) == "0"


@pytest.mark.parametrize("text", ["0", "Z", "Z^3", "Z/2", "Z^2 + Z/2 + Z/6", "Z + Z/12"])
def test_parse_roundtrip(text):
    assert str(G(text)) == text


def test_invalid():
    with pytest.raises(ValueError):
        AbGroup(0, (4, 6))
    with pytest.raises(ValueError):
        G("Q")


def test_elementary_divisors():
    A = AbGroup.from_elementary_divisors(1, [2, 4, 3])
    assert A == G("Z + Z/2 + Z/12")
    assert is_isomorphic(A, G("Z + Z/4 + Z/6"))


def test_ill_formed_hom():
    with pytest.raises(IllFormedHom):
        Homomorphism(G("Z/2"), G("Z"), [[1]])
    with pytest.raises(IllFormedHom):
        Homomorphism(G("Z/2"), G("Z/3"), [[1]])
    Homomorphism(G("Z/2"), G("Z/4"), [[2]])


def test_kernel_cokernel_examples():
    f = Homomorphism(G("Z"), G("Z"), [[2]])
    assert analyze_hom(f) == (G("0"), G("Z"), G("Z/2"))
    f = Homomorphism(G("Z"), G("Z/4"), [[2]])
    assert analyze_hom(f) == (G("Z"), G("Z/2"), G("Z/2"))
    f = Homomorphism(G("Z/6"), G("Z/6"), [[2]])
    K, incl = kernel(f)
    assert K == G("Z/2")
    assert incl([1]) == (3,)


int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: arrays(np.int64, (r, c), elements=st.integers(-12, 12))
    )
)


@given(int_matrices)
def test_cokernel_is_snf(M):
    f = Homomorphism(AbGroup(M.shape[1]), AbGroup(M.shape[0]), M)
    _, D, _ = smith_normal_form(M)
    diag = [int(D[i, i]) for i in range(min(M.shape))] + [0] * max(0, M.shape[0] - M.shape[1])
    assert cokernel(f)[0] == AbGroup.from_orders(diag)


@given(int_matrices)
def test_rank_nullity(M):
    f = Homomorphism(AbGroup(M.shape[1]), AbGroup(M.shape[0]), M)
    K, I, C = analyze_hom(f)
    assert K.rank + I.rank == M.shape[1]
    assert I.rank + C.rank == M.shape[0]


def test_extension_candidates():
    assert set(extension_candidates(G("Z/2"), G("Z/2"))) == {G("Z/4"), G("Z/2 + Z/2")}
    assert extension_candidates(G("Z/2"), G("Z/3")) == (G("Z/6"),)
    assert set(extension_candidates(G("Z"), G("Z/2"))) == {G("Z"), G("Z + Z/2")}


def test_resolve_extension():
    assert resolve_extension(G("Z/2"), G("Z/3")) == Resolved(G("Z/6"))
    r = resolve_extension(G("Z/2"), G("Z/2"))
    assert isinstance(r, Ambiguous) and r.order == 4
    assert resolve_extension(G("Z/5"), G("Z^2")) == Resolved(G("Z^2 + Z/5"))
    assert resolve_extension(G("0"), G("Z/7")) == Resolved(G("Z/7"))


def test_iterated_extension():
    r = resolve_extension(resolve_extension(G("Z/3"), G("Z/3")), G("Z/3"))
    assert set(r.candidates) == {G("Z/27"), G("Z/3 + Z/9"), G("Z/3 + Z/3 + Z/3")}
    assert r.order == 27
    assert str(r.plus(G("Z"))) == "Z + order=27, factors=Z/3"


def test_resolution_rule():
    rule = lambda amb: AbGroup(0, (amb.order,))
    assert resolve_extension(G("Z/2"), G("Z/2"), rule=rule) == Resolved(G("Z/4"))
    with pytest.raises(ValueError):
        resolve_extension(G("Z/2"), G("Z/2"), rule=lambda a: G("Z/8"))


@given(st.lists(st.integers(0, 12), max_size=4), st.integers(0, 2))
def test_split_by_free(orders, rank):
    sub = AbGroup.from_orders(orders)
    assert resolve_extension(sub, AbGroup(rank)) == Resolved(sub + AbGroup(rank))
