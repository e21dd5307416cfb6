import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdual.errors import BaseMismatch, NotDualizable, ObstructionNonzero
from tdual.gysin import CircleBundle, gysin_cohomology
from tdual.space import GradedClass, make_space
from tdual.torus import (
    GENERATORS,
    Splitting,
    TorusBundleClass,
    TwistMatrix,
    act_twist,
    gcd_invariant,
    iterated_dual,
    nonuniqueness,
    orbit_equivalent,
    sigma,
    sphere_bundle_h3,
    twist_compose,
    zero_splittings,
)

words = st.lists(st.sampled_from(sorted(GENERATORS)), max_size=8)


def word_matrix(word):
    m = TwistMatrix.identity()
    for name in word:
        m = m @ GENERATORS[name]
    return m


def test_twist_matrix():
    with pytest.raises(ValueError):
        TwistMatrix(2, 0, 0, 1)
    phi = TwistMatrix(2, 1, 1, 1)
    assert phi @ phi.inverse() == TwistMatrix.identity()


@given(words, words)
def test_sigma_is_anti_homomorphic_involution(a, b):
    phi, psi = word_matrix(a), word_matrix(b)
    assert sigma(sigma(phi)) == phi
    assert sigma(phi @ psi) == sigma(psi) @ sigma(phi)


@given(words, words, st.integers(-9, 9), st.integers(-9, 9))
def test_action_composition(a, b, x, y):
    phi, psi = word_matrix(a), word_matrix(b)
    f = TorusBundleClass("s2", x, y)
    assert act_twist(twist_compose(phi, psi), f) == act_twist(phi, act_twist(psi, f))


@given(words, st.integers(-9, 9), st.integers(-9, 9))
def test_orbit_witness_s2(a, x, y):
    f = TorusBundleClass("s2", x, y)
    g = act_twist(word_matrix(a), f)
    ans = orbit_equivalent("s2", f, g)
    assert ans.answer == "yes"
    assert act_twist(ans.witness, f) == g
    assert gcd_invariant(f) == gcd_invariant(g)


@given(words, st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_orbit_witness_torus(a, v):
    B = "torus:n=3"
    f = TorusBundleClass(B, v[:3], v[3:])
    g = act_twist(word_matrix(a), f)
    ans = orbit_equivalent(B, f, g)
    assert ans.answer == "yes" and act_twist(ans.witness, f) == g


def test_orbit_no():
    f, g = TorusBundleClass("s2", 0, 0), TorusBundleClass("s2", -1, 1)
    assert orbit_equivalent("s2", f, g).answer == "no"
    assert orbit_equivalent("s2", TorusBundleClass("s2", 2, 4), TorusBundleClass("s2", 6, 0)).answer == "no"


def test_orbit_torsion_base():
    L = "lens:k=5,r=2"
    ans = orbit_equivalent(L, TorusBundleClass(L, [1], [0]), TorusBundleClass(L, [2], [0]))
    assert ans.answer == "yes"
    assert act_twist(ans.witness, TorusBundleClass(L, [1], [0])) == TorusBundleClass(L, [2], [0])
    ans = orbit_equivalent(L, TorusBundleClass(L, [1], [0]), TorusBundleClass(L, [0], [0]))
    assert ans.answer == "no"


def test_orbit_base_mismatch():
    with pytest.raises(BaseMismatch):
        orbit_equivalent("s2", TorusBundleClass("s2", 1, 0), TorusBundleClass("cp:r=1", 1, 0))


def test_zero_splittings_s2():
    splits = zero_splittings("s2", 1, 1)
    assert splits[0].is_trivial()
    assert len(splits) == 2
    assert (splits[1].h0.coords, splits[1].h1.coords) == ((1,), (-1,))
    assert sphere_bundle_h3("s2", 1, 1).injective


def test_zero_splittings_obstructed():
    with pytest.raises(ObstructionNonzero):
        zero_splittings("cp:r=2", 1, 1)


def test_iterated_duals_s2():
    nu = nonuniqueness("s2", 1, 1)
    pairs = [(d.chat0.coords, d.chat1.coords) for d in nu.duals]
    assert pairs == [((0,), (0,)), ((-1,), (1,))]
    assert nu.orbit.answer == "no"
    assert nu.detected


def test_iterated_dual_trivial_bundle():
    # trivial T^2-bundle over T^2: fluxes with fibre integrals t_i give duals -t_i
    B = make_space("surface:g=1")
    R = gysin_cohomology(CircleBundle(B, 0))
    split = Splitting(R.lift(B.element(2, [2])), R.lift(B.element(2, [-5])))
    d = iterated_dual(B, 0, 0, split)
    assert (d.chat0.coords, d.chat1.coords) == ((-2,), (5,))


def test_not_dualizable():
    with pytest.raises(NotDualizable):
        iterated_dual("s2", 1, 1, Splitting(GradedClass(3, (1, 2)), GradedClass(3, (0,))))
