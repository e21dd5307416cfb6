"""Smith normal form kernels.

Two implementations of the same elimination schedule:

* ``snf_int64``: numba-compiled, works on ``int64`` and bails out with a
  nonzero status as soon as a product ``q*b`` or an entry of the working
  matrices would leave ``[-2**61, 2**61]``; every ``a - q*b`` computed under
  that guard fits in 63 bits.
* ``snf_exact``: numpy ``object`` arrays holding Python ints, so never
  overflows.

``smith_normal_form`` tries the compiled kernel first and falls back to the
exact one, so callers always get an exact answer.
"""

import numpy as np

from ._jit import jit_enabled, njit

LIMIT = 1 << 61

OK = 0
OVERFLOW = 1


@njit(cache=True)
def _fits(q, b, lim):
    # |q * b| <= lim without forming the product
    if q == 0 or b == 0:
        return True
    return abs(q) <= lim // abs(b)


@njit(cache=True)
def _row_op(A, U, i, t, q, lim):
    # row_i -= q * row_t on A and U; returns False on overflow
    for j in range(A.shape[1]):
        if not _fits(q, A[t, j], lim):
            return False
        v = A[i, j] - q * A[t, j]
        if v > lim or v < -lim:
            return False
        A[i, j] = v
    for j in range(U.shape[1]):
        if not _fits(q, U[t, j], lim):
            return False
        v = U[i, j] - q * U[t, j]
        if v > lim or v < -lim:
            return False
        U[i, j] = v
    return True


@njit(cache=True)
def _col_op(A, V, j, t, q, lim):
    # col_j -= q * col_t on A and V
    for i in range(A.shape[0]):
        if not _fits(q, A[i, t], lim):
            return False
        v = A[i, j] - q * A[i, t]
        if v > lim or v < -lim:
            return False
        A[i, j] = v
    for i in range(V.shape[0]):
        if not _fits(q, V[i, t], lim):
            return False
        v = V[i, j] - q * V[i, t]
        if v > lim or v < -lim:
            return False
        V[i, j] = v
    return True


@njit(cache=True)
def _swap_rows(A, i, k):
    for j in range(A.shape[1]):
        tmp = A[i, j]
        A[i, j] = A[k, j]
        A[k, j] = tmp


@njit(cache=True)
def _swap_cols(A, j, k):
    for i in range(A.shape[0]):
        tmp = A[i, j]
        A[i, j] = A[i, k]
        A[i, k] = tmp


@njit(cache=True)
def snf_int64(M):
    m, n = M.shape
    A = M.copy()
    U = np.eye(m, dtype=np.int64)
    V = np.eye(n, dtype=np.int64)
    lim = np.int64(LIMIT)
    for i in range(m):
        for j in range(n):
            if A[i, j] > lim or A[i, j] < -lim:
                return U, A, V, OVERFLOW
    r = min(m, n)
    for t in range(r):
        # smallest nonzero |entry| in the trailing block
        best = np.int64(0)
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                a = abs(A[i, j])
                if a != 0 and (best == 0 or a < best):
                    best = a
                    bi = i
                    bj = j
        if bi < 0:
            break
        _swap_rows(A, t, bi)
        _swap_rows(U, t, bi)
        _swap_cols(A, t, bj)
        _swap_cols(V, t, bj)
        while True:
            p = A[t, t]
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    if not _row_op(A, U, i, t, A[i, t] // p, lim):
                        return U, A, V, OVERFLOW
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    if not _col_op(A, V, j, t, A[t, j] // p, lim):
                        return U, A, V, OVERFLOW
            # leftover remainders in the pivot row/column: move the smallest in
            best = np.int64(0)
            bi = -1
            bj = -1
            for i in range(t + 1, m):
                a = abs(A[i, t])
                if a != 0 and (best == 0 or a < best):
                    best = a
                    bi = i
                    bj = t
            for j in range(t + 1, n):
                a = abs(A[t, j])
                if a != 0 and (best == 0 or a < best):
                    best = a
                    bi = t
                    bj = j
            if bi >= 0:
                if bi != t:
                    _swap_rows(A, t, bi)
                    _swap_rows(U, t, bi)
                else:
                    _swap_cols(A, t, bj)
                    _swap_cols(V, t, bj)
                continue
            # divisibility of the trailing block by the pivot
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i, j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            if not _row_op(A, U, t, bad, np.int64(-1), lim):
                return U, A, V, OVERFLOW
        if A[t, t] < 0:
            for j in range(n):
                A[t, j] = -A[t, j]
            for j in range(m):
                U[t, j] = -U[t, j]
    return U, A, V, OK


def snf_exact(M):
    """Same schedule as ``snf_int64`` on object arrays of Python ints."""
    A = np.array(M, dtype=object).reshape(np.shape(M))
    m, n = A.shape
    U = identity(m)
    V = identity(n)

    def smallest(block_rows, block_cols):
        best = None
        for i in block_rows:
            for j in block_cols:
                a = abs(A[i, j])
                if a and (best is None or a < best[0]):
                    best = (a, i, j)
        return best

    for t in range(min(m, n)):
        found = smallest(range(t, m), range(t, n))
        if found is None:
            break
        _, bi, bj = found
        A[[t, bi], :] = A[[bi, t], :]
        U[[t, bi], :] = U[[bi, t], :]
        A[:, [t, bj]] = A[:, [bj, t]]
        V[:, [t, bj]] = V[:, [bj, t]]
        while True:
            p = A[t, t]
            for i in range(t + 1, m):
                if A[i, t]:
                    q = A[i, t] // p
                    A[i, :] = A[i, :] - q * A[t, :]
                    U[i, :] = U[i, :] - q * U[t, :]
            for j in range(t + 1, n):
                if A[t, j]:
                    q = A[t, j] // p
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
            col = smallest(range(t + 1, m), [t])
            row = smallest([t], range(t + 1, n))
            if col or row:
                if row is None or (col is not None and col[0] <= row[0]):
                    _, bi, _ = col
                    A[[t, bi], :] = A[[bi, t], :]
                    U[[t, bi], :] = U[[bi, t], :]
                else:
                    _, _, bj = row
                    A[:, [t, bj]] = A[:, [bj, t]]
                    V[:, [t, bj]] = V[:, [bj, t]]
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i, j] % p),
                None,
            )
            if bad is None:
                break
            A[t, :] = A[t, :] + A[bad, :]
            U[t, :] = U[t, :] + U[bad, :]
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            U[t, :] = -U[t, :]
    return U, A, V


def identity(n):
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def det_exact(M):
    """Bareiss fraction-free determinant of a square integer matrix."""
    A = [[int(x) for x in row] for row in np.asarray(M, dtype=object)]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def to_object(M):
    arr = np.asarray(M, dtype=object)
    out = np.empty(arr.size, dtype=object)
    out[:] = [int(x) for x in arr.ravel()]
    return out.reshape(arr.shape)


def smith_normal_form(M, use_jit=None):
    """Return exact ``(U, D, V)`` with ``D = U @ M @ V`` as object arrays.

    ``use_jit=None`` follows the ``TDUAL_DISABLE_JIT`` environment flag.
    """
    A = to_object(M)
    if A.ndim != 2:
        raise ValueError("expected a 2-d integer matrix")
    if use_jit is None:
        use_jit = jit_enabled()
    if use_jit and A.size and max(abs(x) for x in A.flat) <= LIMIT:
        U, D, V, status = snf_int64(A.astype(np.int64))
        if status == OK:
            return to_object(U), to_object(D), to_object(V)
    return snf_exact(A)
