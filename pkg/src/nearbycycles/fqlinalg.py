"""Dense linear algebra over F_q on integer-code arrays."""
from __future__ import annotations

import numpy as np

from . import kernels


def asarray(F, rows) -> np.ndarray:
    """Integer matrix -> codes. Integers land in the prime subfield, whose
    codes are 0..p-1, so reduction mod p is the embedding."""
    return np.asarray(rows, dtype=np.int64) % F.p


def matmul(F, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[-2]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    add, mul = F.add, F.mul
    out = np.zeros(np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (A.shape[-2], B.shape[-1]), dtype=np.int64)
    for l in range(A.shape[-1]):
        out = add[out, mul[A[..., :, l, None], B[..., None, l, :]]]
    return out


def transpose(A):
    return np.swapaxes(np.asarray(A), -1, -2)


def scale(F, c, A):
    return F.mul[c, np.asarray(A, dtype=np.int64)]


def sub(F, A, B):
    return F.add[np.asarray(A, dtype=np.int64), F.neg[np.asarray(B, dtype=np.int64)]]


def rref(F, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1]), []
    R, ranks = kernels.batch_rref(F.add, F.mul, F.neg, F.inv, M[None])
    r = int(ranks[0])
    R = R[0, :r]
    pivots = [int(np.flatnonzero(row)[0]) for row in R]
    return R, pivots


def rank(F, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return int(kernels.batch_rref(F.add, F.mul, F.neg, F.inv, M[None])[1][0])


def nullspace(F, M) -> np.ndarray:
    """Rows spanning {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    ncols = M.shape[1]
    R, pivots = rref(F, M)
    free = [j for j in range(ncols) if j not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for t, j in enumerate(free):
        basis[t, j] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = F.neg[R[i, j]]
    return basis


def solve(F, A, b):
    """One solution x of A x = b, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.hstack([A, b])
    R, pivots = rref(F, aug)
    n = A.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def inverse(F, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, pivots = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return R[:n, n:]


def in_rowspace(F, R, v) -> bool:
    R = np.asarray(R, dtype=np.int64)
    if R.shape[0] == 0:
        return not np.any(v)
    return rank(F, np.vstack([R, np.asarray(v, dtype=np.int64)[None]])) == rank(F, R)


def bilinear(F, X, G, Y) -> np.ndarray:
    """x_i^T G y_i for matching rows of the stacks X and Y."""
    XG = matmul(F, np.asarray(X)[:, None, :], G)[:, 0, :]
    add, mul = F.add, F.mul
    Y = np.asarray(Y, dtype=np.int64)
    out = np.zeros(XG.shape[0], dtype=np.int64)
    for j in range(XG.shape[1]):
        out = add[out, mul[XG[:, j], Y[:, j]]]
    return out


def line_representatives(F, dim: int) -> np.ndarray:
    """One normalised vector (first nonzero entry 1) per line of F_q^dim."""
    q = F.q
    chunks = []
    for lead in range(dim):
        rest = dim - lead - 1
        block = np.zeros((q**rest, dim), dtype=np.int64)
        block[:, lead] = 1
        if rest:
            codes = np.arange(q**rest)
            for j in range(rest):
                block[:, dim - 1 - j] = (codes // q**j) % q
        chunks.append(block)
    if not chunks:
        return np.zeros((0, 0), dtype=np.int64)
    return np.vstack(chunks)


def all_vectors(F, dim: int) -> np.ndarray:
    codes = np.arange(F.q**dim)
    out = np.empty((codes.size, dim), dtype=np.int64)
    for j in range(dim):
        out[:, dim - 1 - j] = (codes // F.q**j) % F.q
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
