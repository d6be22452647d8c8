import json

import pytest

from nearbycycles import cohomology as coh
from nearbycycles.errors import EpsilonMismatch, InvalidInput, PageMismatch
from nearbycycles.ffield import make_field
from nearbycycles.hermitian import HermitianDatum
from nearbycycles.quadric import DiagonalQuadraticForm, count_projective_points_bruteforce, epsilon_of_form

EVEN_EPS = (1, -1)


def eps_values(n):
    return (None,) if n % 2 else EVEN_EPS


def grid():
    return [(n, e, p) for p in (3, 5, 7) for n in range(3, 11) for e in eps_values(n)]


def test_frobweight_twist():
    w = coh.FrobWeight(-1, 2)
    t = w.twisted()
    assert (t.sign, t.exponent, t.twist) == (-1, 3, 1)
    assert t.eigenvalue(3) == -27
    with pytest.raises(ValueError):
        coh.FrobWeight(2, 0)


def test_projective_space_tables():
    P1 = coh.cohomology_projective_space(1, 3)
    assert P1.as_table() == {0: [1], 2: [3]}
    P3 = coh.cohomology_projective_space(3, 3)
    assert P3.total_rank() == 4
    assert coh.predicted_point_count(P3, 1) == 40
    assert all(P3.rank(d) == 0 for d in range(1, 7, 2))


def test_quadric_tables():
    Q3 = coh.cohomology_quadric(3, None, 3)
    assert [Q3.rank(d) for d in range(3)] == [1, 0, 1]
    Q4 = coh.cohomology_quadric(4, 1, 3)
    assert sorted(w.eigenvalue(3) for w in Q4.weights(2)) == [3, 3]
    assert coh.predicted_point_count(Q4, 1) == 16
    Q4n = coh.cohomology_quadric(4, -1, 3)
    assert coh.predicted_point_count(Q4n, 1) == 10
    assert coh.predicted_point_count(Q4n, 2) == 100
    with pytest.raises(EpsilonMismatch):
        coh.cohomology_quadric(4, None, 3)
    with pytest.raises(EpsilonMismatch):
        coh.cohomology_quadric(3, 1, 3)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("k", [1, 2])
def test_quadric_table_predicts_brute_force(p, n, k):
    if (p**k) ** n > 10**6:
        pytest.skip("brute force too large")
    nonres = next(d for d in range(2, p) if pow(d, (p - 1) // 2, p) == p - 1)
    for coeffs in ((1,) * (n - 1) + (-1,), (1,) * (n - 1) + (-nonres,)):
        f = DiagonalQuadraticForm.from_ints(make_field(p), coeffs)
        e = epsilon_of_form(f)
        table = coh.cohomology_quadric(n, e, p)
        assert coh.predicted_point_count(table, k) == count_projective_points_bruteforce(f.over(make_field(p, k)))


def test_p1_bundle():
    point = coh.point_module(3)
    assert coh.cohomology_p1_bundle(point).as_table() == coh.cohomology_projective_space(1, 3).as_table()
    Z2 = coh.cohomology_p1_bundle(coh.cohomology_quadric(3, None, 3))
    assert coh.predicted_point_count(Z2, 1) == 16
    Z2n = coh.cohomology_p1_bundle(coh.cohomology_quadric(4, -1, 3))
    assert coh.predicted_point_count(Z2n, 1) == 40


def test_predicted_count_rejects_k0():
    with pytest.raises(ValueError):
        coh.predicted_point_count(coh.point_module(3), 0)


def test_E1_K_layout():
    page = coh.build_E1_K(3, None, 3)
    assert page.rank(0, 0) == 2
    top = page.weights(-1, 2 * (3 - 2) + 2)
    assert [w.eigenvalue(3) for w in top] == [3 ** (3 - 1)]
    for n in (3, 4, 5, 6):
        pg = coh.build_E1_K(n, eps_values(n)[0], 5)
        assert all(pg.rank(1, b) == 0 for b in range(2 * (n - 2) + 1, 2 * n))
        assert set(a for a, _ in pg.entries) <= {-1, 0, 1}


def test_E1_Z1_phi_matrix():
    page = coh.build_E1_Z1(4, 1, 3)
    left = [c.symbol for c in page.entries[(-1, 2)]]
    mid = [c.symbol for c in page.entries[(0, 2)]]
    phi = page.differentials[(-1, 2)]
    image = {mid[i]: row[0] for i, row in enumerate(phi) if row[0]}
    assert left == ["i1*h^0(-1)"]
    assert image == {"Z1:h^1": -2, "Q:i1*h^1": -2}


def test_E1_Z1_psi_is_identity_on_restrictions():
    page = coh.build_E1_Z1(4, -1, 3)
    mid = [c.symbol for c in page.entries[(0, 2)]]
    right = [c.symbol for c in page.entries[(1, 2)]]
    psi = page.differentials[(0, 2)]
    for j, s in enumerate(mid):
        if s.startswith("Q:"):
            col = [psi[i][j] for i in range(len(right))]
            assert col == [int(r == s[2:]) for r in right]


def test_gysin_kills_prim():
    page = coh.build_E1_Z1(6, -1, 5)
    left = [c.symbol for c in page.entries[(-1, 6)]]
    j = left.index("prim(-1)")
    assert all(row[j] == 0 for row in page.differentials[(-1, 6)])


@pytest.mark.parametrize("n,e,p", grid())
def test_E2_closed_form(n, e, p):
    res = coh.compute_E2_Z1(coh.build_E1_Z1(n, e, p))
    got = {ab: [w.eigenvalue(p) for w in ws] for ab, ws in res.page.nonzero().items()}
    want = {(0, 0): [1]}
    if n % 2 == 0:
        want[(-1, n)] = [e * p ** (n // 2)]
    assert got == want
    assert all(ok for b, ok in res.phi_injective.items() if b % 2 == 0 and b != n)
    assert all(ok for b, ok in res.psi_surjective.items() if b <= 2 * (n - 2))
    # the surviving class (0, 0) is exactly the failure of exactness at b = 0
    assert not res.exact_middle[0]
    assert all(ok for b, ok in res.exact_middle.items() if b != 0)
    assert res.unit_divisors


@pytest.mark.parametrize("n,e,p", grid())
def test_euler_characteristic_is_conserved(n, e, p):
    E1 = coh.build_E1_Z1(n, e, p)
    E2 = coh.compute_E2_Z1(E1).page
    for b in range(2 * n):
        chi1 = sum((-1) ** a * E1.rank(a, b) for a in (-1, 0, 1))
        chi2 = sum((-1) ** a * E2.rank(a, b) for a in (-1, 0, 1))
        assert chi1 == chi2


def test_differentials_respect_weights():
    for n, e, p in grid()[:20]:
        page = coh.build_E1_Z1(n, e, p)
        for (a, b), M in page.differentials.items():
            src, dst = page.entries.get((a, b), ()), page.entries.get((a + 1, b), ())
            for i, row in enumerate(M):
                for j, x in enumerate(row):
                    if x:
                        assert src[j].weight.key == dst[i].weight.key


def test_tampered_page_raises():
    page = coh.build_E1_Z1(4, 1, 3)
    page.differentials[(-1, 2)] = [[0], [0], [0]]
    with pytest.raises(PageMismatch):
        coh.compute_E2_Z1(page)


def test_stalks_do_not_depend_on_closed_form_assertion():
    for n, e, p in grid():
        assert coh.nearby_cycles_stalks(n, e, p, check_closed_form=True) == coh.nearby_cycles_stalks(n, e, p, check_closed_form=False)


@pytest.mark.parametrize("n,e,p,table", [
    (5, None, 3, {0: [1]}),
    (2, None, 3, {0: [1], 1: [3]}),
    (4, -1, 3, {0: [1], 3: [-9]}),
    (6, -1, 5, {0: [1], 5: [-125]}),
])
def test_stalk_examples(n, e, p, table):
    stalks = coh.nearby_cycles_stalks(n, e, p)
    assert {d: [w.eigenvalue(p) for w in ws] for d, ws in stalks.items()} == table


@pytest.mark.parametrize("n,e,p,trace", [(3, None, 3, 1), (4, 1, 3, -8), (2, None, 5, -4), (4, -1, 3, 10), (7, None, 7, 1)])
def test_kramer_trace(n, e, p, trace):
    assert coh.kramer_ss_trace(n, e, p) == trace


@pytest.mark.parametrize("n,split,k", [(3, True, 1), (3, False, 1), (3, True, 2), (4, True, 1), (4, False, 1)])
def test_lefschetz_consistency(n, split, k):
    rep = coh.lefschetz_consistency(HermitianDatum.standard(3, n, split), k)
    assert rep.consistent and rep.stalk_sum == rep.expected == sum(3 ** (i * k) for i in range(n))


def test_lefschetz_worked_values():
    rep = coh.lefschetz_consistency(HermitianDatum.standard(3, 4, True))
    assert (rep.n_points, rep.singular_trace, rep.stalk_sum) == (49, -8, 40)
    rep = coh.lefschetz_consistency(HermitianDatum.standard(3, 4, False))
    assert (rep.n_points, rep.singular_trace, rep.stalk_sum) == (31, 10, 40)


def test_lefschetz_rank_two_nonsplit_is_flagged():
    rep = coh.lefschetz_consistency(HermitianDatum.standard(3, 2, False))
    assert not rep.consistent and rep.note
    assert (rep.stalk_sum, rep.expected) == (-2, 4)


def test_page_serialisation():
    page = coh.compute_E2_Z1(coh.build_E1_Z1(4, 1, 3)).page
    rows = page.to_json()
    assert json.loads(json.dumps(rows)) == rows
    entry = next(r for r in rows if (r["a"], r["b"]) == (-1, 4))
    assert entry["rank"] == 1 and entry["weights"] == [9]
    text = page.render_text()
    assert "a=-1" in text and "b=4" in text


def test_pre_conditions():
    with pytest.raises(InvalidInput):
        coh.build_E1_Z1(2, 1, 3)
    with pytest.raises(InvalidInput):
        coh.nearby_cycles_stalks(1, None, 3)
    with pytest.raises(ValueError):
        coh.compute_E2_Z1(coh.build_E1_K(3, None, 3))
