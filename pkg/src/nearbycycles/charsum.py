"""Quadratic-character Jacobi sums j_m over F_q.

``j_m = (1/(q-1)) * sum over u in (F_q^x)^(2m) with u_1 + ... + u_2m = 0 of
chi(u_1)...chi(u_2m)``, where chi is the quadratic character. The sum is
computed by repeated additive convolution of chi with itself (the oracle) and
compared against the closed form ``chi(-1)^m q^(m-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import kernels
from .errors import DivisibilityViolation
from .ffield import FieldDesc, FieldElem, quad_char


@dataclass(frozen=True)
class SignedCountVector:
    """An integer-valued function on F_q, indexed by element code."""

    field: FieldDesc
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.field.q:
            raise ValueError("a count vector needs one value per field element")

    def __getitem__(self, x) -> int:
        if isinstance(x, FieldElem):
            x = x.value
        return self.values[x]

    def as_dict(self) -> dict[int, int]:
        return dict(enumerate(self.values))


def _base(field):
    return tuple(int(c) for c in field.chi)


@lru_cache(maxsize=None)
def _power(field: FieldDesc, k: int, backend) -> tuple[int, ...]:
    if k == 1:
        return _base(field)
    prev = _power(field, k - 1, backend)
    return tuple(kernels.convolve(field.add, prev, _base(field), backend=backend))


def char_convolution_power(field: FieldDesc, k: int, backend=None) -> SignedCountVector:
    """c_k(t) = sum over (F_q^x)^k with u_1+...+u_k = t of chi(u_1)...chi(u_k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return SignedCountVector(field, _power(field, k, backend))


def jacobi_sum_bruteforce(field: FieldDesc, m: int, backend=None) -> int:
    if m < 1:
        raise ValueError("m must be >= 1")
    total = char_convolution_power(field, 2 * m, backend)[0]
    quo, rem = divmod(total, field.q - 1)
    if rem:
        raise DivisibilityViolation(f"c_{2 * m}(0) = {total} is not divisible by q-1 = {field.q - 1}")
    return quo


def jacobi_sum_closed(field: FieldDesc, m: int) -> int:
    if m < 1:
        raise ValueError("m must be >= 1")
    return quad_char(-field.one) ** m * field.q ** (m - 1)


def jacobi_sum_literal(field: FieldDesc, m: int) -> int:
    """Direct summation over all (q-1)^(2m) tuples. Only for tiny cases."""
    if (field.q - 1) ** (2 * m) > 10**7:
        raise ValueError("literal summation is limited to (q-1)^(2m) <= 1e7")
    units = field.nonzero()
    chi = {u: quad_char(u) for u in units}
    total = 0
    for tup in product(units, repeat=2 * m):
        s = field.zero
        sign = 1
        for u in tup:
            s = s + u
            sign *= chi[u]
        if s.value == 0:
            total += sign
    quo, rem = divmod(total, field.q - 1)
    if rem:
        raise DivisibilityViolation(f"literal sum {total} not divisible by q-1")
    return quo


def recursion_terms(field: FieldDesc, m: int, backend=None) -> dict[str, int]:
    """Every quantity appearing in the m -> m-1 reduction, each evaluated
    from the convolution oracle rather than from the closed form."""
    if m < 2:
        raise ValueError("the recursion needs m >= 2")
    chi = field.chi
    chi_m1 = quad_char(-field.one)
    one = field.one.value
    j_m = jacobi_sum_bruteforce(field, m, backend)
    j_prev = jacobi_sum_bruteforce(field, m - 1, backend)
    # sum over v_1 + ... + v_{2m-1} = 1
    shifted = char_convolution_power(field, 2 * m - 1, backend)[one]
    # S = sum over w not in {0, 1} of c_{2m-2}(w) chi(1 - w)
    c_even = char_convolution_power(field, 2 * m - 2, backend)
    S = 0
    for w in range(field.q):
        if w in (0, one):
            continue
        one_minus_w = field.add[one, field.neg[w]]
        S += c_even[w] * int(chi[one_minus_w])
    return {
        "j_m": j_m,
        "j_m_minus_1": j_prev,
        "chi_minus_1": chi_m1,
        "shifted_sum": shifted,
        "S": S,
    }


def verify_recursion(field: FieldDesc, m: int, backend=None) -> bool:
    t = recursion_terms(field, m, backend)
    chi_m1, j_m, j_prev = t["chi_minus_1"], t["j_m"], t["j_m_minus_1"]
    star = j_m == chi_m1 * t["shifted_sum"]
    star_star = j_m == chi_m1 * (field.q - 1) * j_prev + chi_m1 * t["S"]
    inner = t["S"] == j_prev
    step = j_m == chi_m1 * field.q * j_prev
    return star and star_star and inner and step


def base_case_sum(field: FieldDesc) -> int:
    """sum over x in F_q minus {0, 1} of chi(x (1 - x))."""
    total = 0
    for x in field.elements():
        if x.value in (0, 1):
            continue
        total += quad_char(x * (1 - x))
    return total
