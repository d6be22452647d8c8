import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nearbycycles.errors import EpsilonMismatch, TooLarge
from nearbycycles.ffield import make_field, quad_char
from nearbycycles.quadric import (
    DiagonalQuadraticForm,
    classify_diagonal_form,
    count_affine_zeros,
    count_points_weil,
    count_projective_points_bruteforce,
    epsilon_of_form,
)


def form(p, coeffs, k=1):
    return DiagonalQuadraticForm.from_ints(make_field(p, k), coeffs)


def naive_projective_count(f):
    F = f.field
    zeros = sum(f.evaluate(x) == 0 for x in itertools.product(range(F.q), repeat=f.n))
    return (zeros - 1) // (F.q - 1)


@pytest.mark.parametrize("p,coeffs,expected", [
    (3, (1, -1), 2),
    (3, (1, 1, 1), 4),
    (3, (1, 1, -1, -1), 16),
    (3, (1, 1, 1, 2), 10),
    (3, (1, 1), 0),
])
def test_bruteforce_examples(p, coeffs, expected, backend):
    assert count_projective_points_bruteforce(form(p, coeffs), backend) == expected


@pytest.mark.parametrize("n,eps,expected", [(3, None, 4), (4, 1, 16), (4, -1, 10), (2, 1, 2), (2, -1, 0)])
def test_weil_examples(n, eps, expected):
    assert count_points_weil(n, eps, make_field(3)) == expected


def test_weil_epsilon_parity():
    F = make_field(3)
    with pytest.raises(EpsilonMismatch):
        count_points_weil(3, 1, F)
    with pytest.raises(EpsilonMismatch):
        count_points_weil(4, None, F)


def test_classify_examples():
    assert classify_diagonal_form(form(3, (1, -1))).split is True
    assert classify_diagonal_form(form(3, (1, 1))).split is False
    c = classify_diagonal_form(form(5, (1, 1, 1)))
    assert c.discriminant_class == "square" and c.split is None and c.epsilon is None


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bruteforce_equals_weil(p, n):
    if p**n > 10**6:
        pytest.skip("covered by the acceptance grid")
    nonres = next(d for d in range(2, p) if quad_char(make_field(p)(d)) == -1)
    for coeffs in ([1] * (n - 1) + [1], [1] * (n - 1) + [nonres], [1, -1] * (n // 2) + [1] * (n % 2)):
        f = form(p, coeffs)
        assert count_projective_points_bruteforce(f) == count_points_weil(n, epsilon_of_form(f), f.field)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_over_f9(n):
    F9 = make_field(3, 2)
    for coeffs in ([1] * n, [1] * (n - 1) + [2]):
        f = form(3, coeffs).over(F9)
        # every element of F_3 is a square in F_9
        assert epsilon_of_form(f) in (None, 1)
        assert count_projective_points_bruteforce(f) == count_points_weil(n, epsilon_of_form(f), F9)


def test_eps_squares_under_base_change():
    f = form(3, (1, 1, 1, 2))
    assert epsilon_of_form(f) == -1
    assert epsilon_of_form(f.over(make_field(3, 2))) == 1


def test_weil_predicts_f9_count_from_f3_eps():
    # Q(n=4, eps=-1, p=3) over F_9: 1 + 9 + 81 + (eps)^2 * 9 = 100
    f = form(3, (1, 1, 1, 2)).over(make_field(3, 2))
    assert count_projective_points_bruteforce(f) == 100


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(1, 6), min_size=2, max_size=4))
def test_random_forms_match_weil_and_naive(p, raw):
    coeffs = [c % p or 1 for c in raw]
    f = form(p, coeffs)
    count = count_projective_points_bruteforce(f)
    assert count == count_points_weil(f.n, epsilon_of_form(f), f.field)
    if p**f.n <= 2500:
        assert count == naive_projective_count(f)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(1, 6), min_size=2, max_size=4), st.integers(1, 6))
def test_scaling_a_variable_by_a_square_preserves_count(p, raw, s):
    coeffs = [c % p or 1 for c in raw]
    s = s % p or 1
    scaled = [coeffs[0] * s * s] + coeffs[1:]
    assert count_projective_points_bruteforce(form(p, coeffs)) == count_projective_points_bruteforce(form(p, scaled))


def test_affine_guard():
    with pytest.raises(TooLarge):
        count_affine_zeros(form(7, [1] * 10))


def test_form_validation():
    F = make_field(3)
    with pytest.raises(ValueError):
        DiagonalQuadraticForm(F, (1,))
    with pytest.raises(ValueError):
        DiagonalQuadraticForm(F, (1, 0))
    with pytest.raises(ValueError):
        DiagonalQuadraticForm.from_ints(F, (1, 3))
    with pytest.raises(ValueError):
        DiagonalQuadraticForm(make_field(3, 2), (1, 4)).over(make_field(3, 2))
