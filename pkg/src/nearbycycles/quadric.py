"""Projective point counts of diagonal quadrics sum a_i x_i^2 = 0 over F_q."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DivisibilityViolation, EpsilonMismatch, TooLarge
from .ffield import FieldDesc, FieldElem, quad_char

# affine points enumerated by the brute-force counter
MAX_AFFINE_POINTS = 10**8


@dataclass(frozen=True)
class DiagonalQuadraticForm:
    field: FieldDesc
    entries: tuple[int, ...]  # element codes

    def __post_init__(self):
        codes = tuple(int(e.value if isinstance(e, FieldElem) else e) for e in self.entries)
        if len(codes) < 2:
            raise ValueError("a diagonal form needs at least two variables")
        if any(not 0 < c < self.field.q for c in codes):
            raise ValueError(f"diagonal entries must be nonzero codes of {self.field!r}")
        object.__setattr__(self, "entries", codes)

    @classmethod
    def from_ints(cls, field: FieldDesc, coeffs) -> DiagonalQuadraticForm:
        """Entries given as integers, read in the prime subfield."""
        codes = []
        for c in coeffs:
            r = int(c) % field.p
            if r == 0:
                raise ValueError(f"entry {c} vanishes mod {field.p}")
            codes.append(r)
        return cls(field, tuple(codes))

    @property
    def n(self) -> int:
        return len(self.entries)

    def coefficients(self) -> list[FieldElem]:
        return [FieldElem(self.field, c) for c in self.entries]

    def over(self, field: FieldDesc) -> DiagonalQuadraticForm:
        """Base change of a form with prime-subfield entries."""
        if field.p != self.field.p:
            raise ValueError("base change needs the same characteristic")
        if any(c >= self.field.p for c in self.entries):
            raise ValueError("only forms with prime-subfield entries can be base-changed")
        return DiagonalQuadraticForm(field, self.entries)

    def evaluate(self, x) -> int:
        F = self.field
        s = 0
        for a, xi in zip(self.entries, x):
            s = F.add[s, F.mul[a, F.square[int(xi)]]]
        return int(s)

    def __str__(self):
        return " + ".join(f"{FieldElem(self.field, a)!r}*x{i + 1}^2" for i, a in enumerate(self.entries))


def count_affine_zeros(form: DiagonalQuadraticForm, backend=None) -> int:
    F = form.field
    if F.q**form.n > MAX_AFFINE_POINTS:
        raise TooLarge(f"q^n = {F.q}^{form.n} exceeds {MAX_AFFINE_POINTS}")
    terms = F.mul[np.array(form.entries)[:, None], F.square[None, :]]
    return kernels.count_zeros(F.add, terms, backend=backend)


def count_projective_points_bruteforce(form: DiagonalQuadraticForm, backend=None) -> int:
    affine = count_affine_zeros(form, backend)
    quo, rem = divmod(affine - 1, form.field.q - 1)
    if rem:
        raise DivisibilityViolation(f"N_affine - 1 = {affine - 1} not divisible by q - 1")
    return quo


def count_points_weil(n: int, epsilon, field: FieldDesc) -> int:
    """1 + q + ... + q^(n-2), plus epsilon * q^(m-1) when n = 2m.

    The epsilon term is the Jacobi-sum correction chi(-1)^m j_m (split) or
    its negative (non-split), with j_m = chi(-1)^m q^(m-1) substituted.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n % 2:
        if epsilon is not None:
            raise EpsilonMismatch("odd n carries no epsilon")
    elif epsilon not in (1, -1):
        raise EpsilonMismatch("even n needs epsilon = +1 or -1")
    q = field.q
    base = sum(q**i for i in range(n - 1))
    if n % 2:
        return base
    return base + epsilon * q ** (n // 2 - 1)


@dataclass(frozen=True)
class FormClass:
    split: bool | None  # None for odd n
    discriminant_class: str  # "square" or "nonsquare"

    @property
    def epsilon(self):
        if self.split is None:
            return None
        return 1 if self.split else -1


def classify_diagonal_form(form: DiagonalQuadraticForm) -> FormClass:
    F = form.field
    prod = F.one
    for a in form.coefficients():
        prod = prod * a
    disc = "square" if quad_char(prod) == 1 else "nonsquare"
    if form.n % 2:
        return FormClass(None, disc)
    signed = prod * ((-F.one) ** (form.n // 2))
    return FormClass(quad_char(signed) == 1, disc)


def epsilon_of_form(form: DiagonalQuadraticForm):
    return classify_diagonal_form(form).epsilon
