import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nearbycycles.charsum import (
    base_case_sum,
    char_convolution_power,
    jacobi_sum_bruteforce,
    jacobi_sum_closed,
    jacobi_sum_literal,
    recursion_terms,
    verify_recursion,
)
from nearbycycles.ffield import make_field, quad_char

FIELDS = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 11: (11, 1), 13: (13, 1)}


def field(q):
    return make_field(*FIELDS[q])


def test_c1_is_the_character():
    assert char_convolution_power(field(3), 1).as_dict() == {0: 0, 1: 1, 2: -1}


@pytest.mark.parametrize("q,expected", [(3, -2), (5, 4)])
def test_c2_at_zero(q, expected):
    assert char_convolution_power(field(q), 2)[0] == expected


def test_c2_by_hand_enumeration_f5():
    F = field(5)
    total = sum(quad_char(u) * quad_char(v) for u, v in itertools.product(F.nonzero(), repeat=2) if (u + v).value == 0)
    assert total == 4


@pytest.mark.parametrize("q,m,expected", [(3, 1, -1), (5, 1, 1), (5, 2, 5)])
def test_bruteforce_examples(q, m, expected):
    assert jacobi_sum_bruteforce(field(q), m) == expected


@pytest.mark.parametrize("q,m,expected", [(3, 2, 3), (3, 1, -1), (7, 3, -49)])
def test_closed_examples(q, m, expected):
    assert jacobi_sum_closed(field(q), m) == expected


@pytest.mark.parametrize("q", sorted(FIELDS))
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_oracle_equals_closed_form(q, m, backend):
    assert jacobi_sum_bruteforce(field(q), m, backend) == jacobi_sum_closed(field(q), m)


@pytest.mark.parametrize("q,m", [(3, 1), (3, 2), (5, 1), (5, 2)])
def test_literal_sum_second_tier(q, m):
    assert jacobi_sum_literal(field(q), m) == jacobi_sum_closed(field(q), m)


def test_literal_sum_refuses_large_cases():
    with pytest.raises(ValueError):
        jacobi_sum_literal(field(13), 4)


@pytest.mark.parametrize("q", sorted(FIELDS))
@pytest.mark.parametrize("m", [2, 3, 4])
def test_recursion(q, m):
    assert verify_recursion(field(q), m)


def test_recursion_terms_are_independent_evaluations():
    t = recursion_terms(field(7), 3)
    assert t["S"] == t["j_m_minus_1"] == jacobi_sum_closed(field(7), 2)
    assert t["j_m"] == t["chi_minus_1"] * t["shifted_sum"]


@pytest.mark.parametrize("q", sorted(FIELDS))
def test_odd_lengths_vanish_at_zero(q):
    for j in (1, 3, 5, 7, 9):
        assert char_convolution_power(field(q), j)[0] == 0


@pytest.mark.parametrize("q", sorted(FIELDS))
def test_base_case(q):
    F = field(q)
    assert base_case_sum(F) == -quad_char(-F.one)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(FIELDS)), st.integers(1, 6), st.integers(1, 6))
def test_convolution_powers_compose(q, a, b):
    """c_{a+b}(t) = sum_s c_a(s) c_b(t - s)."""
    F = field(q)
    ca, cb, cab = (char_convolution_power(F, k) for k in (a, b, a + b))
    for t in range(F.q):
        assert cab[t] == sum(ca[s] * cb[int(F.add[t, F.neg[s]])] for s in range(F.q))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(FIELDS)), st.integers(1, 8))
def test_scaling_symmetry(q, k):
    """c_k(a t) = chi(a)^k c_k(t) for a nonzero."""
    F = field(q)
    c = char_convolution_power(F, k)
    for a in F.nonzero():
        for t in range(F.q):
            assert c[int(F.mul[a.value, t])] == quad_char(a) ** k * c[t]


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        char_convolution_power(field(3), 0)
    with pytest.raises(ValueError):
        jacobi_sum_bruteforce(field(3), 0)
    with pytest.raises(ValueError):
        recursion_terms(field(3), 1)
