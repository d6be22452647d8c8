"""Special fibers of the local model and of its blow-up, by enumeration.

Over the residue field the lattice L becomes a 2n-dimensional space with a
nilpotent operator J (the action of pi) and an alternating form psi. A point
of the special fiber is an n-dimensional subspace F with

* psi(F, F) = 0,
* J F contained in F,
* rank(J restricted to F) <= 1.

The determinant condition and the remaining wedge condition hold
automatically here: pi and its conjugate both reduce to J, which is
nilpotent, so every characteristic polynomial is T^n and the n-th exterior
power of J|F vanishes.

Points of the blow-up are pairs (F, F0), F0 a line with F0 in F, J F in F0
and J F0 = 0.

Subspaces are row spaces; vectors are rows and J acts by ``v -> v @ J.T``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from . import fqlinalg as la
from . import kernels
from .errors import InvariantViolation, TooLarge
from .ffield import FieldDesc, make_field
from .hermitian import HermitianDatum

# q^(2n) candidate vectors seed the closure search; beyond this we refuse
MAX_CANDIDATE_VECTORS = 10**6
# Schubert-cell enumeration in the exhaustive oracle
MAX_GRASSMANNIAN = 10**8
_CELL_CHUNK = 1 << 15


@dataclass(frozen=True, order=True)
class SubspaceBasis:
    """Canonical (RREF) basis of a subspace; equal subspaces compare equal."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int = dc_field(default=0, compare=False)

    @classmethod
    def span(cls, F: FieldDesc, M) -> SubspaceBasis:
        M = np.asarray(M, dtype=np.int64)
        R, _ = la.rref(F, M)
        return cls(tuple(tuple(int(x) for x in r) for r in R), M.shape[1])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.dim, self.ncols)

    @property
    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.rows]


@dataclass(frozen=True, eq=False)
class SpecialFiberAmbient:
    field: FieldDesc
    n: int
    J: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        F, n = self.field, self.n
        J = la.asarray(F, self.J) if F.k == 1 else np.asarray(self.J, dtype=np.int64)
        psi = la.asarray(F, self.psi) if F.k == 1 else np.asarray(self.psi, dtype=np.int64)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "psi", psi)
        if J.shape != (2 * n, 2 * n) or psi.shape != (2 * n, 2 * n):
            raise InvariantViolation("J and psi must be 2n x 2n")
        if np.any(la.matmul(F, J, J)):
            raise InvariantViolation("J^2 != 0")
        if la.rank(F, J) != n:
            raise InvariantViolation("rank(J) != n")
        if np.any(np.diag(psi)) or np.any(psi != F.neg[psi.T]):
            raise InvariantViolation("psi is not alternating")
        if la.rank(F, psi) != 2 * n:
            raise InvariantViolation("psi is degenerate")
        # psi(Jx, y) + psi(x, Jy) = 0  <=>  J^T psi + psi J = 0
        if np.any(F.add[la.matmul(F, J.T, psi), la.matmul(F, psi, J)]):
            raise InvariantViolation("J is not skew-adjoint for psi")
        B = self.pairing_matrix
        if np.any(B != B.T):
            raise InvariantViolation("{Jx, Jy} = psi(Jx, y) is not symmetric")
        image = la.rref(F, J.T)[0]
        if la.rank(F, la.matmul(F, la.matmul(F, self.preimage_matrix(image), B), la.transpose(self.preimage_matrix(image)))) != n:
            raise InvariantViolation("{.,.} is degenerate on im(J)")

    @property
    def pairing_matrix(self) -> np.ndarray:
        """B with psi(Jx, y) = x^T B y."""
        return la.matmul(self.field, self.J.T, self.psi)

    def preimage_matrix(self, W) -> np.ndarray:
        """Rows x_i with J x_i = w_i for the rows w_i of W (all in im J)."""
        out = []
        for w in np.asarray(W, dtype=np.int64):
            x = la.solve(self.field, self.J, w)
            if x is None:
                raise ValueError("vector not in the image of J")
            out.append(x)
        return np.array(out, dtype=np.int64).reshape(len(out), 2 * self.n)

    def apply_J(self, rows) -> np.ndarray:
        return la.matmul(self.field, np.asarray(rows, dtype=np.int64), self.J.T)

    def image_J(self) -> SubspaceBasis:
        return SubspaceBasis.span(self.field, self.J.T)

    def symmetric_pairing(self, v, w) -> int:
        """{v, w} for v, w in im(J)."""
        x = self.preimage_matrix([w])[0]
        return int(la.bilinear(self.field, np.asarray([v]), self.psi, x[None])[0])

    def transport(self, g) -> SpecialFiberAmbient:
        """The same structure in coordinates x' = g x."""
        F = self.field
        g = np.asarray(g, dtype=np.int64)
        gi = la.inverse(F, g)
        J = la.matmul(F, la.matmul(F, g, self.J), gi)
        psi = la.matmul(F, la.matmul(F, gi.T, self.psi), gi)
        return SpecialFiberAmbient(F, self.n, J, psi)


def build_ambient(datum: HermitianDatum, field: FieldDesc | None = None) -> SpecialFiberAmbient:
    """Basis e_1..e_n, pi e_1..pi e_n of L/pL.

    With Tr(c) = 2c, Tr(c/pi) = 0 and Tr(-pi c) = 0 the trace form gives
    psi(pi e_i, e_i) = 2 c_i, psi(e_i, pi e_i) = -2 c_i, all other pairings 0.
    """
    if field is None:
        field = make_field(datum.p)
    if field.p != datum.p:
        raise ValueError("field characteristic must match the datum")
    n = datum.n
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    psi = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i, c in enumerate(datum.diag):
        J[n + i, i] = 1
        psi[n + i, i] = (2 * c) % field.p
        psi[i, n + i] = (-2 * c) % field.p
    return SpecialFiberAmbient(field, n, J, psi)


# --- conditions -----------------------------------------------------------

def conditions(amb: SpecialFiberAmbient, basis: SubspaceBasis) -> dict[str, bool]:
    F = amb.field
    R = basis.array
    JR = amb.apply_J(R)
    return {
        "dimension": basis.dim == amb.n,
        "isotropic": not np.any(la.matmul(F, la.matmul(F, R, amb.psi), R.T)),
        "J_stable": la.rank(F, np.vstack([R, JR])) == basis.dim,
        "rank_J_le_1": la.rank(F, JR) <= 1,
    }


def is_special_fiber_point(amb, basis) -> bool:
    return all(conditions(amb, basis).values())


def _check_guard(amb: SpecialFiberAmbient):
    if amb.field.q ** (2 * amb.n) > MAX_CANDIDATE_VECTORS:
        raise TooLarge(
            f"q^(2n) = {amb.field.q}^{2 * amb.n} exceeds the enumeration guard {MAX_CANDIDATE_VECTORS}"
        )


def _complement(F, S, P):
    """Rows of P extending the row space of S to that of S + P."""
    chosen = []
    current = S
    r = la.rank(F, current) if current.shape[0] else 0
    for row in P:
        trial = np.vstack([current, row[None]])
        r2 = la.rank(F, trial)
        if r2 > r:
            chosen.append(row)
            current, r = trial, r2
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), P.shape[1])


def _unique_spans(stack, ranks):
    """Deduplicate RREF stacks into canonical SubspaceBasis objects."""
    out = set()
    if len(stack) == 0:
        return out
    flat = np.concatenate([ranks[:, None], stack.reshape(len(stack), -1)], axis=1)
    uniq = np.unique(flat, axis=0)
    ncols = stack.shape[2]
    for row in uniq:
        r = int(row[0])
        body = row[1:].reshape(stack.shape[1], ncols)[:r]
        out.add(SubspaceBasis(tuple(tuple(int(x) for x in b) for b in body), ncols))
    return out


def enumerate_special_fiber(amb: SpecialFiberAmbient, backend=None) -> list[SubspaceBasis]:
    """All F_q-points of the special fiber, sorted.

    Closure search: every J-stable subspace is reached from 0 by steps
    S -> S + <v, Jv>, and the three defining conditions pass to subspaces,
    so it suffices to grow admissible subspaces one such step at a time.
    Only v in the psi-orthogonal of S can keep isotropy, and v matters
    modulo S and up to scalars.
    """
    _check_guard(amb)
    F, n = amb.field, amb.n
    dim2 = 2 * n
    levels: dict[int, set[SubspaceBasis]] = {0: {SubspaceBasis((), dim2)}}
    for d in range(n):
        for S_basis in sorted(levels.get(d, ())):
            S = S_basis.array
            if d:
                perp = la.nullspace(F, la.matmul(F, S, amb.psi))
            else:
                perp = np.eye(dim2, dtype=np.int64)
            comp = _complement(F, S, perp)
            if comp.shape[0] == 0:
                continue
            V = la.matmul(F, la.line_representatives(F, comp.shape[0]), comp)
            JV = amb.apply_J(V)
            # <v, Jv> isotropic
            keep = la.bilinear(F, JV, amb.psi, V) == 0
            # J(S + <v, Jv>) = JS + <Jv> must stay of dimension <= 1
            JS, _ = la.rref(F, amb.apply_J(S)) if d else (np.zeros((0, dim2), dtype=np.int64), [])
            if JS.shape[0] > 1:
                raise InvariantViolation("intermediate subspace with rank(J) > 1")
            if JS.shape[0] == 1:
                w = JS[0]
                piv = int(np.flatnonzero(w)[0])
                multiple = F.mul[JV[:, piv][:, None], w[None, :]]
                keep &= np.all(multiple == JV, axis=1)
            V, JV = V[keep], JV[keep]
            if len(V) == 0:
                continue
            stack = np.concatenate(
                [np.broadcast_to(S, (len(V), d, dim2)), V[:, None, :], JV[:, None, :]], axis=1
            )
            R, ranks = kernels.batch_rref(F.add, F.mul, F.neg, F.inv, stack, backend=backend)
            for sub in _unique_spans(R, ranks):
                levels.setdefault(sub.dim, set()).add(sub)
    points = sorted(levels.get(n, ()))
    for pt in points:
        if not is_special_fiber_point(amb, pt):
            raise InvariantViolation(f"enumerated subspace fails re-verification: {pt.rows}")
    return points


def enumerate_special_fiber_exhaustive(amb: SpecialFiberAmbient, backend=None) -> list[SubspaceBasis]:
    """Unpruned oracle: test every n-dimensional subspace, cell by cell."""
    F, n = amb.field, amb.n
    dim2 = 2 * n
    if la.gaussian_binomial(dim2, n, F.q) > MAX_GRASSMANNIAN:
        raise TooLarge("Grassmannian too large for exhaustive enumeration")
    found = []
    for piv in combinations(range(dim2), n):
        free = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, dim2) if j not in piv]
        base = np.zeros((n, dim2), dtype=np.int64)
        for i, pc in enumerate(piv):
            base[i, pc] = 1
        total = F.q ** len(free)
        for start in range(0, total, _CELL_CHUNK):
            codes = np.arange(start, min(total, start + _CELL_CHUNK))
            R = np.repeat(base[None], len(codes), axis=0)
            for t, (i, j) in enumerate(free):
                R[:, i, j] = (codes // F.q**t) % F.q
            found.extend(_filter_cell(amb, R, list(piv), backend))
    found.sort()
    return found


def _filter_cell(amb, R, piv, backend):
    F = amb.field
    iso = ~np.any(la.matmul(F, la.matmul(F, R, amb.psi), la.transpose(R)), axis=(1, 2))
    JR = la.matmul(F, R, amb.J.T)
    # a vector w lies in an RREF row space iff w = w[pivots] @ R
    recon = la.matmul(F, JR[:, :, piv], R)
    stable = np.all(recon == JR, axis=(1, 2))
    _, ranks = kernels.batch_rref(F.add, F.mul, F.neg, F.inv, JR, backend=backend)
    ok = iso & stable & (ranks <= 1)
    return [SubspaceBasis(tuple(tuple(int(x) for x in r) for r in M), R.shape[2]) for M in R[ok]]


def find_singular_locus(points, amb: SpecialFiberAmbient) -> list[SubspaceBasis]:
    F = amb.field
    return [pt for pt in points if la.rank(F, amb.apply_J(pt.array)) == 0]


def enumerate_blowup(amb: SpecialFiberAmbient, points=None, backend=None):
    """Sorted pairs (F, F0) of the blow-up's special fiber."""
    F = amb.field
    if points is None:
        points = enumerate_special_fiber(amb, backend)
    pairs = []
    for pt in points:
        R = pt.array
        JR = amb.apply_J(R)
        W = la.matmul(F, la.line_representatives(F, pt.dim), R)
        JW = amb.apply_J(W)
        killed = ~np.any(JW, axis=1)
        stack = np.concatenate([W[:, None, :], np.broadcast_to(JR, (len(W),) + JR.shape)], axis=1)
        _, ranks = kernels.batch_rref(F.add, F.mul, F.neg, F.inv, stack, backend=backend)
        for w in W[killed & (ranks <= 1)]:
            pairs.append((pt, SubspaceBasis.span(F, w[None])))
    pairs.sort()
    for pt, line in pairs:
        if not _is_blowup_pair(amb, pt, line):
            raise InvariantViolation(f"blow-up pair fails re-verification: {pt.rows}, {line.rows}")
    return pairs


def _is_blowup_pair(amb, pt, line) -> bool:
    F = amb.field
    R, w = pt.array, line.array
    JR = amb.apply_J(R)
    return (
        line.dim == 1
        and la.rank(F, np.vstack([R, w])) == pt.dim
        and la.rank(F, np.vstack([w, JR])) == 1
        and not np.any(amb.apply_J(w))
        and is_special_fiber_point(amb, pt)
    )


@dataclass(frozen=True)
class Strata:
    z1_count: int
    z2_count: int
    q_count: int
    off_strata_count: int
    total: int


def stratify_blowup(pairs, amb: SpecialFiberAmbient) -> Strata:
    center = amb.image_J()
    z1 = z2 = qc = off = 0
    iso_cache: dict[SubspaceBasis, bool] = {}
    for pt, line in pairs:
        if line not in iso_cache:
            w = line.array[0]
            iso_cache[line] = amb.symmetric_pairing(w, w) == 0
        iso = iso_cache[line]
        in_z1 = pt == center
        z1 += in_z1
        z2 += iso
        qc += in_z1 and iso
        off += not in_z1 and not iso
    return Strata(z1, z2, qc, off, len(pairs))


# --- JSON fixtures ----------------------------------------------------------

def subspaces_to_json(points) -> str:
    return json.dumps([[list(r) for r in pt.rows] for pt in points])


def subspaces_from_json(text: str, ncols: int) -> list[SubspaceBasis]:
    return [SubspaceBasis(tuple(tuple(int(x) for x in r) for r in rows), ncols) for rows in json.loads(text)]
