import pytest

from tdual.abgroup import AbGroup
from tdual.errors import BadParameters, DegreeOverflow, UnknownDescriptor
from tdual.space import CATALOG, check_model, cup, lens_like_model, make_space, product_model


def G(text):
    return AbGroup.parse(text)


@pytest.mark.parametrize("descriptor", CATALOG)
def test_catalog_models_pass_checks(descriptor):
    check_model(make_space(descriptor))


@pytest.mark.parametrize(
    "descriptor, groups",
    [
        ("pt", ["Z"]),
        ("s1", ["Z", "Z"]),
        ("s3", ["Z", "0", "0", "Z"]),
        ("surface:g=2", ["Z", "Z^4", "Z"]),
        ("cp:r=3", ["Z", "0", "Z", "0", "Z", "0", "Z"]),
        ("torus:n=3", ["Z", "Z^3", "Z^3", "Z"]),
        ("lens:k=3,r=2", ["Z", "0", "Z/3", "0", "Z/3", "Z"]),
    ],
)
def test_groups(descriptor, groups):
    X = make_space(descriptor)
    assert [X.group(d) for d in range(X.dimension + 1)] == [G(g) for g in groups]
    assert X.group(X.dimension + 1) == G("0")
    assert X.group(-1) == G("0")


def test_cup_products():
    B = make_space("cp:r=2")
    z = B.generator("z")
    assert cup(B, z, z) == B.generator("z^2")
    S = make_space("surface:g=1")
    a, b = S.generator("a1"), S.generator("b1")
    assert cup(S, a, b) == S.generator("vol")
    assert cup(S, b, a) == -S.generator("vol")
    assert cup(S, a, a).is_zero()
    T = make_space("torus:n=3")
    assert cup(T, T.generator("u1"), T.generator("u2u3")) == T.generator("u1u2u3")


def test_degree_overflow():
    B = make_space("cp:r=1")
    z = B.generator("z")
    with pytest.raises(DegreeOverflow):
        cup(B, z, z)
    assert cup(B, z, z, strict=False).is_zero()


def test_lens_ring():
    L = make_space("lens:k=5,r=3")
    x = L.generator("x")
    assert cup(L, x, x) == L.generator("x^2")
    x3 = cup(L, cup(L, x, x), x)
    assert x3 == L.generator("x^3")
    assert cup(L, x3, x, strict=False).is_zero()
    assert cup(L, L.unit(), L.generator("vol")) == L.generator("vol")
    assert make_space("lens:k=4,r=2").metadata.get("ring_structure") == "extrapolated"


@pytest.mark.parametrize("bad", ["cp:r=0", "lens:k=1,r=2", "torus:n=4", "klein", "surface:g=-1"])
def test_unknown_descriptor(bad):
    with pytest.raises(UnknownDescriptor):
        make_space(bad)


def test_lens_parameters():
    with pytest.raises(BadParameters):
        lens_like_model(1, 2)


def test_product_model():
    P = product_model(make_space("s2"), make_space("s1"))
    assert [P.group(d) for d in range(4)] == [G("Z"), G("Z"), G("Z"), G("Z")]
    check_model(P)


def test_elements_reduce():
    L = make_space("lens:k=3,r=2")
    assert L.element(2, [4]).coords == (1,)
    with pytest.raises(ValueError):
        L.element(2, [1, 2])
