"""Finite fields F_q of odd characteristic.

Elements are encoded as integers ``0 <= code < q`` holding the base-p digits
of their coefficient vector (constant term first), so that the prime subfield
F_p sits inside F_q as the codes ``0..p-1``. Scalar arithmetic goes through
:class:`FieldElem`; vectorised code uses the lookup tables on
:class:`FieldDesc` (``add``, ``mul``, ``neg``, ``inv``, ``chi``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import DegenerateDegree, EvenCharacteristic, NotAUnit, NotPrime

# tables are q*q; beyond this only scalar arithmetic is available
MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --- polynomials over F_p: lists of ints, constant term first -------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_divmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] * inv_lead % p
        quo[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * y) % p
        rem = _trim(rem)
    return _trim(quo), rem


def _poly_mod(a, b, p):
    return _poly_divmod(a, b, p)[1]


def _poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base, e, mod, p):
    result = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus, p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p.

    f of degree k is irreducible iff x^(p^k) = x mod f and
    gcd(x^(p^(k/r)) - x, f) = 1 for every prime r dividing k.
    """
    f = _trim(modulus)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**k, f, p), x, p):
        return False
    for r in _prime_factors(k):
        h = _poly_sub(_poly_powmod(x, p ** (k // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) > 1:
            return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k.

    Candidates are compared as coefficient tuples ordered from the constant
    term up; the returned tuple includes the leading 1.
    """
    if k == 1:
        return (0, 1)
    for low in product(range(p), repeat=k):
        # product() is lexicographic with low[0] (the constant term) most significant
        coeffs = tuple(low) + (1,)
        if coeffs[0] == 0:
            continue
        if is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldDesc:
    """F_q with q = p**k, realised as F_p[x]/(modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        _check_characteristic(self.p)
        if self.k < 1:
            raise DegenerateDegree(f"extension degree must be >= 1, got {self.k}")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.k + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self):
        return f"F_{self.q}" if self.k == 1 else f"F_{self.q}[mod={self.modulus}]"

    # -- element construction ----------------------------------------------
    def __call__(self, n: int) -> FieldElem:
        """Image of the integer n under Z -> F_p -> F_q."""
        return FieldElem(self, int(n) % self.p)

    def from_code(self, code: int) -> FieldElem:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElem(self, int(code))

    def from_coeffs(self, coeffs) -> FieldElem:
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        if len(coeffs) != self.k:
            raise ValueError("too many coefficients")
        return FieldElem(self, self.encode(coeffs))

    def encode(self, coeffs) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + int(c) % self.p
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def elements(self):
        return [FieldElem(self, c) for c in range(self.q)]

    def nonzero(self):
        return [FieldElem(self, c) for c in range(1, self.q)]

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    # -- scalar arithmetic on codes ------------------------------------------
    def _mul_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        prod = _poly_mul(list(self.decode(a)), list(self.decode(b)), self.p)
        return self.encode(_poly_mod(prod, list(self.modulus), self.p) if prod else [])

    def _add_codes(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.encode([(x + y) % self.p for x, y in zip(self.decode(a), self.decode(b))])

    def _neg_code(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self.encode([-x % self.p for x in self.decode(a)])

    def _pow_code(self, a: int, e: int) -> int:
        if e < 0:
            a = self._pow_code(a, self.q - 2)
            e = -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_codes(result, base)
            base = self._mul_codes(base, base)
            e >>= 1
        return result

    # -- lookup tables for vectorised kernels ----------------------------------
    def _require_tables(self):
        if self.q > MAX_TABLE_ORDER:
            raise ValueError(f"lookup tables are limited to q <= {MAX_TABLE_ORDER}")

    @cached_property
    def coeff_table(self) -> np.ndarray:
        """(q, k) array: row c holds the coefficient vector of code c."""
        codes = np.arange(self.q)
        out = np.empty((self.q, self.k), dtype=np.int64)
        for i in range(self.k):
            out[:, i] = (codes // self.p**i) % self.p
        return out

    def _encode_array(self, coeffs: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.k, dtype=np.int64)
        return (coeffs % self.p) @ weights

    @cached_property
    def add(self) -> np.ndarray:
        self._require_tables()
        c = self.coeff_table
        return self._encode_array(c[:, None, :] + c[None, :, :])

    @cached_property
    def mul(self) -> np.ndarray:
        self._require_tables()
        p, k = self.p, self.k
        c = self.coeff_table
        if k == 1:
            return (c[:, 0][:, None] * c[:, 0][None, :]) % p
        # x^j mod modulus for j < 2k - 1, as coefficient rows
        red = np.zeros((2 * k - 1, k), dtype=np.int64)
        for j in range(2 * k - 1):
            r = _poly_mod([0] * j + [1], list(self.modulus), p)
            red[j, : len(r)] = r
        raw = np.zeros((self.q, self.q, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                raw[:, :, i + j] += c[:, None, i] * c[None, :, j]
        return self._encode_array((raw % p) @ red)

    @cached_property
    def neg(self) -> np.ndarray:
        return self._encode_array(-self.coeff_table)

    @cached_property
    def inv(self) -> np.ndarray:
        """Multiplicative inverses; entry 0 is 0 by convention."""
        m = self.mul
        out = np.zeros(self.q, dtype=np.int64)
        a, b = np.nonzero(m == 1)
        out[a] = b
        return out

    @cached_property
    def chi(self) -> np.ndarray:
        """Quadratic character of every code, as int64 in {-1, 0, 1}."""
        return np.array([quad_char(FieldElem(self, c)) for c in range(self.q)], dtype=np.int64)

    @cached_property
    def square(self) -> np.ndarray:
        m = self.mul
        idx = np.arange(self.q)
        return m[idx, idx]


def _check_characteristic(p: int):
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")


def make_field(p: int, k: int = 1) -> FieldDesc:
    """Build F_{p^k} with the lexicographically least irreducible modulus."""
    _check_characteristic(p)
    if k < 1:
        raise DegenerateDegree(f"extension degree must be >= 1, got {k}")
    return FieldDesc(int(p), int(k), least_irreducible(int(p), int(k)))


@dataclass(frozen=True)
class FieldElem:
    field: FieldDesc
    value: int

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.field.decode(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field._add_codes(self.value, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field._neg_code(self.value))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field._add_codes(self.value, self.field._neg_code(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field._mul_codes(self.value, o))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElem(self.field, self.field._pow_code(self.value, self.field.q - 2))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FieldElem(self.field, o).inverse()

    def __pow__(self, e: int):
        if e < 0 and self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElem(self.field, self.field._pow_code(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.value}"
        return f"{self.coefficients}"


def quad_char(x: FieldElem) -> int:
    """Quadratic character of F_q, extended by 0 at 0."""
    if x.value == 0:
        return 0
    r = x ** ((x.field.q - 1) // 2)
    if r.value == 1:
        return 1
    if r.value == x.field.p - 1:
        return -1
    raise AssertionError(f"x^((q-1)/2) = {r!r} is not +-1")


def is_norm_unit(delta: int, p: int) -> bool:
    """Whether the p-adic unit with residue ``delta`` is a norm from the
    ramified quadratic extension of Q_p.

    The norm form a^2 - pi^2 b^2 reduces to a^2 mod p, so by Hensel a unit is
    a norm iff its residue is a nonzero square.
    """
    _check_characteristic(p)
    if delta % p == 0:
        raise NotAUnit(f"{delta} is divisible by {p}")
    return pow(delta % p, (p - 1) // 2, p) == 1


def least_nonresidue(p: int) -> int:
    _check_characteristic(p)
    for d in range(2, p):
        if not is_norm_unit(d, p):
            return d
    raise AssertionError("unreachable for odd p")
