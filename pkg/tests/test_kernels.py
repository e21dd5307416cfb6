import itertools
import os
import subprocess
import sys
from math import gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tdual.kernels import det_exact, smith_normal_form, snf_exact, snf_int64, to_object
from tdual.verify import snf_certificate
from tdual._jit import jit_enabled


def minors_gcd(M, k):
    r, c = M.shape
    g = 0
    for rows in itertools.combinations(range(r), k):
        for cols in itertools.combinations(range(c), k):
            g = gcd(g, det_exact(M[np.ix_(rows, cols)]))
    return g


def test_small_example():
    U, D, V = smith_normal_form([[2, 4], [6, 8]])
    assert [D[0, 0], D[1, 1]] == [2, 4]
    assert snf_certificate(U, D, V, np.array([[2, 4], [6, 8]]))


def test_empty_and_zero():
    U, D, V = smith_normal_form(np.zeros((3, 2), dtype=int))
    assert not D.any()
    U, D, V = smith_normal_form(np.zeros((0, 2), dtype=int))
    assert D.shape == (0, 2)


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: arrays(np.int64, (r, c), elements=st.integers(-30, 30))
    )
)


@given(matrices)
def test_certificate(M):
    U, D, V = smith_normal_form(M)
    assert snf_certificate(U, D, V, M)


@given(matrices)
def test_diagonal_matches_minor_gcds(M):
    # d_1 * ... * d_k = gcd of the k x k minors
    _, D, _ = smith_normal_form(M)
    prod = 1
    for k in range(1, min(M.shape) + 1):
        prod *= D[k - 1, k - 1]
        assert prod == minors_gcd(to_object(M), k)


@given(matrices)
def test_paths_agree(M):
    a = smith_normal_form(M, use_jit=False)
    b = smith_normal_form(M, use_jit=True)
    for x, y in zip(a, b):
        assert (x == y).all()


def test_overflow_falls_back_to_exact():
    big = 1 << 70
    M = np.array([[big, 3], [5, big + 1]], dtype=object)
    U, D, V = smith_normal_form(M)
    assert snf_certificate(U, D, V, M)


@pytest.mark.skipif(not jit_enabled(), reason="numba not available")
def test_int64_kernel_reports_overflow():
    M = np.array([[1 << 62, 1], [1, 1 << 62]], dtype=np.int64)
    assert snf_int64(M)[3] != 0


def test_env_flag_disables_jit():
    code = "from tdual._jit import jit_enabled; print(jit_enabled())"
    env = dict(os.environ, TDUAL_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"


def test_det_exact():
    assert det_exact(np.array([[2, 1], [7, 4]])) == 1
    assert det_exact(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])) == -1
    assert det_exact(np.zeros((0, 0))) == 1
