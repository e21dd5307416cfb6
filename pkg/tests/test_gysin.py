import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdual.abgroup import AbGroup
from tdual.errors import DegreeOutOfRange
from tdual.gysin import CircleBundle, euler_obstruction, exactness_report, gysin_cohomology, pushforward
from tdual.space import CATALOG, make_space


def G(text):
    return AbGroup.parse(text)


def groups(R):
    return [str(R.cohomology(n)) for n in range(R.dimension + 1)]


@pytest.mark.parametrize("g", [0, 1, 2, 3])
@pytest.mark.parametrize("k", [-3, 0, 1, 4])
def test_surface_bundles(g, k):
    R = gysin_cohomology(CircleBundle(f"surface:g={g}", k))
    if k:
        expected = [G("Z"), AbGroup(2 * g), AbGroup.from_orders([0] * (2 * g) + [abs(k)]), G("Z")]
    else:
        expected = [G("Z"), AbGroup(2 * g + 1), AbGroup(2 * g + 1), G("Z")]
    assert [R.cohomology(n).group for n in range(4)] == expected


def test_hopf_bundle():
    R = gysin_cohomology(CircleBundle("s2", 1))
    assert groups(R) == ["Z", "0", "0", "Z"]
    assert pushforward(R, R.fundamental_class()).coords == (1,)


def test_lens_total_space():
    # circle bundle of c = x over lens:3,2: cohomology of the lens space in
    # degrees 2..4 is killed
    R = gysin_cohomology(CircleBundle("lens:k=3,r=2", [1]))
    assert groups(R) == ["Z", "Z", "0", "0", "0", "Z", "Z"]
    assert R[5].rule == "poincare"


def test_cp_bundles():
    R = gysin_cohomology(CircleBundle("cp:r=3", 5))
    assert groups(R) == ["Z", "0", "Z/5", "0", "Z/5", "0", "Z/5", "Z"]


@pytest.mark.parametrize("descriptor", CATALOG)
def test_exactness(descriptor):
    B = make_space(descriptor)
    ranges = [range(-2, 3) if o == 0 else range(o) for o in B.group(2).orders]
    for c in itertools.islice(itertools.product(*ranges), 40):
        R = gysin_cohomology(CircleBundle(B, list(c)))
        bad = [x for x in exactness_report(R) if not x[2]]
        assert not bad, (descriptor, c, bad)


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_lift_decompose_compose(k, t, b):
    # H^3(B) = 0 here, so every h in H^3(E) is lift(pi_! h)
    R = gysin_cohomology(CircleBundle("surface:g=1", k))
    B = R.base
    tt = B.element(2, [t]) if k == 0 else B.zero(2)
    h = R.lift(tt)
    assert pushforward(R, h) == tt
    t2, b2 = R.decompose(h)
    assert t2 == tt
    assert R.compose(t2, b2) == h


def test_lift_rejects_non_kernel():
    R = gysin_cohomology(CircleBundle("cp:r=2", 1))
    with pytest.raises(ValueError):
        R.lift(R.base.generator("z"))


def test_degree_out_of_range():
    R = gysin_cohomology(CircleBundle("s2", 1))
    with pytest.raises(DegreeOutOfRange):
        pushforward(R, R.generator_class(0).__class__(0, (1,)))


def test_euler_obstruction():
    chi, ok = euler_obstruction("cp:r=2", 1, 2)
    assert chi.coords == (2,) and not ok
    chi, ok = euler_obstruction("s2", 1, 1)
    assert ok
