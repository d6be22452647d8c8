"""Exact linear algebra over Q and Z for small integer matrices."""
from __future__ import annotations

from fractions import Fraction


def _to_fractions(M):
    return [[Fraction(x) for x in row] for row in M]


def _echelon(M):
    A = _to_fractions(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        lead = A[r][c]
        A[r] = [x / lead for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A[:r], pivots


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(_echelon(M)[1])


def nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} as a list of vectors."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    ncols = len(M[0])
    R, pivots = _echelon(M)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][j]
        basis.append(v)
    return basis


def matvec(M, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in M]


def elementary_divisors(M) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix."""
    A = [[int(x) for x in row] for row in M]
    if not A or not A[0]:
        return []
    rows, cols = len(A), len(A[0])
    out = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            piv = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    f = A[i][t] // piv
                    A[i] = [x - f * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
                        break
            if not done:
                continue
            piv = A[t][t]
            for j in range(t + 1, cols):
                if A[t][j]:
                    f = A[t][j] // piv
                    for row in A:
                        row[j] -= f * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        done = False
                        break
            if not done:
                continue
            # divisibility condition of the Smith form
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % piv), None)
            if bad is not None:
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
                done = False
        out.append(abs(A[t][t]))
        t += 1
    return out


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0
