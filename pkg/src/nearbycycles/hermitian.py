"""Diagonal hermitian data over the ramified quadratic extension of Q_p.

A datum is a self-dual lattice with orthogonal basis e_1..e_n on which the
hermitian form is Diag(c_1, ..., c_n), c_i p-adic units stored by residue.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .errors import ClassificationMismatch, InvalidInput, NotAUnit
from .ffield import _check_characteristic, is_norm_unit, least_nonresidue, make_field
from .quadric import DiagonalQuadraticForm, classify_diagonal_form


@dataclass(frozen=True)
class HermitianDatum:
    p: int
    diag: tuple[int, ...]
    # optional non-norm unit delta and the slot whose entry is +-delta
    delta: int | None = None
    delta_slot: int | None = None

    def __post_init__(self):
        _check_characteristic(self.p)
        diag = tuple(int(c) for c in self.diag)
        object.__setattr__(self, "diag", diag)
        if len(diag) < 2:
            raise InvalidInput("hermitian rank must be >= 2")
        for c in diag:
            if c % self.p == 0:
                raise NotAUnit(f"diagonal entry {c} is not a unit at {self.p}")
        if (self.delta is None) != (self.delta_slot is None):
            raise InvalidInput("delta and delta_slot go together")
        if self.delta is not None:
            if is_norm_unit(self.delta, self.p):
                raise InvalidInput(f"delta = {self.delta} is a norm at p = {self.p}")
            if not 0 <= self.delta_slot < len(diag):
                raise InvalidInput("delta_slot out of range")
            if diag[self.delta_slot] % self.p not in (self.delta % self.p, -self.delta % self.p):
                raise InvalidInput("the tagged entry must be +-delta")

    @property
    def n(self) -> int:
        return len(self.diag)

    @classmethod
    def standard(cls, p: int, n: int, split: bool = True) -> HermitianDatum:
        """Diag(1,...,1,-1,...,-1) with ceil(n/2) ones; the non-split variant
        replaces the last entry by -delta, delta the least non-residue."""
        if n < 2:
            raise InvalidInput("hermitian rank must be >= 2")
        ones = (n + 1) // 2
        diag = [1] * ones + [-1] * (n - ones)
        if split:
            return cls(p, tuple(diag))
        delta = least_nonresidue(p)
        diag[-1] = -delta
        return cls(p, tuple(diag), delta=delta, delta_slot=n - 1)

    def discriminant(self) -> int:
        return (-1) ** (self.n * (self.n - 1) // 2) * prod(self.diag)


def classify_hermitian(datum: HermitianDatum) -> str:
    return "split" if is_norm_unit(datum.discriminant(), datum.p) else "nonsplit"


def epsilon_of(datum: HermitianDatum):
    """Sign of the Frobenius eigenvalue on the top nearby-cycles stalk.

    Rank 2 always gives +1 regardless of the class of the datum.
    """
    if datum.n % 2:
        return None
    if datum.n == 2:
        return 1
    return 1 if classify_hermitian(datum) == "split" else -1


def residual_quadric(datum: HermitianDatum) -> DiagonalQuadraticForm:
    """The quadric of isotropic lines in pi*L / p*pi*L, over F_p."""
    form = DiagonalQuadraticForm.from_ints(make_field(datum.p), datum.diag)
    if datum.n % 2 == 0:
        quad_split = classify_diagonal_form(form).split
        herm_split = classify_hermitian(datum) == "split"
        if quad_split != herm_split:
            raise ClassificationMismatch(
                f"hermitian class {classify_hermitian(datum)} vs quadric split={quad_split} for {datum}"
            )
    return form
