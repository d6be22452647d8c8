"""Hot inner loops over F_q lookup tables.

Every kernel comes in two flavours: ``*_nb`` compiled with numba and
``*_np`` written against numpy only. The public dispatchers pick one through
:func:`nearbycycles._accel.resolve_backend`; both must return identical
results (``tests/test_kernels.py`` checks this).

Field elements are integer codes; ``add``/``mul``/``neg``/``inv`` are the
tables of :class:`nearbycycles.ffield.FieldDesc`.
"""
import numpy as np

from ._accel import njit, resolve_backend

# vectorised head block for the numpy zero counter
_HEAD_LIMIT = 1 << 20


# --- zero counting of a diagonal form ------------------------------------

@njit
def _count_zeros_nb(add, terms):
    n, q = terms.shape
    idx = np.zeros(n, dtype=np.int64)
    partial = np.zeros(n, dtype=np.int64)
    for i in range(n - 1):
        partial[i + 1] = add[partial[i], terms[i, 0]]
    last = terms[n - 1]
    count = 0
    outer = 1
    for _ in range(n - 1):
        outer *= q
    for _ in range(outer):
        s = partial[n - 1]
        for x in range(q):
            if add[s, last[x]] == 0:
                count += 1
        # odometer over the first n-1 coordinates
        j = n - 2
        while j >= 0:
            idx[j] += 1
            if idx[j] < q:
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            break
        for i in range(j, n - 1):
            partial[i + 1] = add[partial[i], terms[i, idx[i]]]
    return count


def _count_zeros_np(add, terms):
    n, q = terms.shape
    head = 0
    size = 1
    while head < n and size * q <= _HEAD_LIMIT:
        head += 1
        size *= q
    vals = np.zeros(1, dtype=np.int64)
    for i in range(head):
        vals = add[vals[:, None], terms[i][None, :]].ravel()
    if head == n:
        return int(np.count_nonzero(vals == 0))
    count = 0
    tail = n - head
    for flat in range(q**tail):
        s = 0
        for i in range(head, n):
            flat, x = divmod(flat, q)
            s = add[s, terms[i, x]]
        count += int(np.count_nonzero(add[vals, s] == 0))
    return count


def count_zeros(add, terms, backend=None):
    """Number of x in F_q^n with sum_i terms[i, x_i] == 0.

    ``terms[i, x]`` is the code of the i-th summand evaluated at the code x,
    so for a diagonal quadric ``terms[i] = mul[a_i, square]``.
    """
    terms = np.ascontiguousarray(terms, dtype=np.int64)
    add = np.ascontiguousarray(add, dtype=np.int64)
    if resolve_backend(backend) == "numba":
        return int(_count_zeros_nb(add, terms))
    return _count_zeros_np(add, terms)


# --- additive convolution of integer-valued functions on F_q ---------------

@njit
def _convolve_nb(add, a, b):
    q = a.shape[0]
    out = np.zeros(q, dtype=np.int64)
    for s in range(q):
        if a[s] == 0:
            continue
        for u in range(q):
            if b[u] != 0:
                out[add[s, u]] += a[s] * b[u]
    return out


def _convolve_np(add, a, b):
    out = np.zeros(len(a), dtype=a.dtype)
    for u in range(len(b)):
        if b[u] != 0:
            # add[:, u] is a permutation, so fancy-index accumulation is safe
            out[add[:, u]] += a * b[u]
    return out


def convolve(add, a, b, backend=None):
    """(a * b)(t) = sum_{s + u = t} a(s) b(u), exact.

    Inputs are sequences of Python ints. The numba path is only taken when
    the result provably fits in int64; otherwise object arrays keep
    arbitrary precision.
    """
    q = len(a)
    bound = max(map(abs, a), default=0) * max(map(abs, b), default=0) * q
    if resolve_backend(backend) == "numba" and bound < 2**62:
        out = _convolve_nb(
            np.ascontiguousarray(add, dtype=np.int64),
            np.asarray(a, dtype=np.int64),
            np.asarray(b, dtype=np.int64),
        )
        return [int(v) for v in out]
    dtype = np.int64 if bound < 2**62 else object
    out = _convolve_np(add, np.array(list(a), dtype=dtype), np.array(list(b), dtype=dtype))
    return [int(v) for v in out]


# --- batched reduced row echelon form ---------------------------------------

@njit
def _batch_rref_nb(add, mul, neg, inv, mats):
    N, r, c = mats.shape
    out = mats.copy()
    ranks = np.zeros(N, dtype=np.int64)
    for b in range(N):
        M = out[b]
        rank = 0
        for col in range(c):
            if rank == r:
                break
            piv = -1
            for i in range(rank, r):
                if M[i, col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(c):
                    t = M[piv, j]
                    M[piv, j] = M[rank, j]
                    M[rank, j] = t
            f = inv[M[rank, col]]
            for j in range(c):
                M[rank, j] = mul[f, M[rank, j]]
            for i in range(r):
                if i != rank and M[i, col] != 0:
                    g = neg[M[i, col]]
                    for j in range(c):
                        M[i, j] = add[M[i, j], mul[g, M[rank, j]]]
            rank += 1
        ranks[b] = rank
    return out, ranks


def _batch_rref_np(add, mul, neg, inv, mats):
    N, r, c = mats.shape
    M = mats.copy()
    ranks = np.zeros(N, dtype=np.int64)
    rows = np.arange(r)
    for col in range(c):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= ranks[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = np.argmax(cand[b], axis=1)
        rk = ranks[b]
        prow = M[b, piv].copy()
        M[b, piv] = M[b, rk]
        prow = mul[inv[prow[:, col]][:, None], prow]
        M[b, rk] = prow
        for i in range(r):
            coeff = M[b, i, col]
            sel = (rk != i) & (coeff != 0)
            if not sel.any():
                continue
            bb = b[sel]
            M[bb, i] = add[M[bb, i], mul[neg[coeff[sel]][:, None], prow[sel]]]
        ranks[b] += 1
    return M, ranks


def batch_rref(add, mul, neg, inv, mats, backend=None):
    """Row-reduce a stack of matrices of codes.

    Returns ``(rref, ranks)``; zero rows are moved to the bottom so that
    ``rref[b, :ranks[b]]`` is the canonical basis of the row space.
    """
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if mats.ndim != 3:
        raise ValueError("expected a (N, rows, cols) stack")
    if mats.shape[0] == 0:
        return mats.copy(), np.zeros(0, dtype=np.int64)
    tables = [np.ascontiguousarray(t, dtype=np.int64) for t in (add, mul, neg, inv)]
    if resolve_backend(backend) == "numba":
        return _batch_rref_nb(*tables, mats)
    return _batch_rref_np(*tables, mats)
