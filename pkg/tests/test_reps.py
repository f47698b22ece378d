import numpy as np
import pytest

from spinchains.reps import (SiteSpec, drinfeld_polynomials, evaluation_L,
                             make_irrep, weight_functions)


def commutation_residual(irrep):
    worst = 0.0
    N = irrep.rank
    for i in range(N):
        for j in range(N):
            for k in range(N):
                for l in range(N):
                    a, b = irrep.e(i, j), irrep.e(k, l)
                    comm = a @ b - b @ a
                    want = (j == k) * irrep.e(i, l) - (l == i) * irrep.e(k, j)
                    worst = max(worst, np.abs(comm - want).max())
    return worst


@pytest.mark.parametrize("rank,kind,param", [
    (2, "fundamental", None),
    (3, "fundamental", None),
    (2, "symmetric_power", 2),
    (3, "symmetric_power", 2),
    (2, "gl2_spin", 1.5),
])
def test_gl_commutation_relations(rank, kind, param):
    irrep = make_irrep(rank, kind, param)
    assert commutation_residual(irrep) < 1e-12


def test_dimensions_and_weights():
    assert make_irrep(3, "fundamental").dim == 3
    assert make_irrep(2, "symmetric_power", 3).dim == 4
    assert make_irrep(3, "symmetric_power", 2).dim == 6
    assert make_irrep(2, "gl2_spin", 1).weight == (2, 0)
    assert make_irrep(3, "symmetric_power", 2).weight == (2, 0, 0)


def test_highest_weight_vector():
    # first basis vector is highest weight: killed by raising operators,
    # diagonal generators read off the weight
    irrep = make_irrep(3, "symmetric_power", 2)
    e0 = np.zeros(irrep.dim)
    e0[0] = 1.0
    for i in range(3):
        for j in range(i + 1, 3):
            assert np.abs(irrep.e(i, j) @ e0).max() < 1e-14
    for k in range(3):
        assert (irrep.e(k, k) @ e0)[0] == pytest.approx(irrep.weight[k])


def test_evaluation_L_fundamental_is_shifted_permutation_action():
    irrep = make_irrep(2, "fundamental")
    lam = 0.31 + 0.17j
    L = evaluation_L(SiteSpec(irrep, 0.5), lam).data
    # on the fundamental the generator block reduces to i P
    P = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            P[2 * i + j, 2 * j + i] = 1.0
    assert np.abs(L - ((lam + 0.5) * np.eye(4) + 1j * P)).max() < 1e-14


def test_drinfeld_polynomials_fundamental():
    sites = [SiteSpec(make_irrep(3, "fundamental"), a) for a in (0.0, 0.4)]
    polys = drinfeld_polynomials(sites)
    lam = 0.7 - 0.2j
    assert polys[0](lam) == pytest.approx((lam + 1j) * (lam + 0.4 + 1j))
    for k in (1, 2):
        assert polys[k](lam) == pytest.approx(lam * (lam + 0.4))


def test_drinfeld_polynomials_spin():
    # spin-s gl(2): P_k(lam) = (lam + i alpha_k)^ell
    irrep = make_irrep(2, "symmetric_power", 2)
    sites = [SiteSpec(irrep, 0.0)] * 3
    polys = drinfeld_polynomials(sites)
    lam = 0.3 + 0.9j
    assert polys[0](lam) == pytest.approx((lam + 2j) ** 3)
    assert polys[1](lam) == pytest.approx(lam ** 3)


def test_weight_functions_match_polynomials():
    sites = [SiteSpec(make_irrep(2, "symmetric_power", 2), 0.1),
             SiteSpec(make_irrep(2, "fundamental"), -0.3)]
    mus = weight_functions(sites)
    lam = 1.1 + 0.2j
    want0 = (lam + 0.1 + 2j) * (lam - 0.3 + 1j)
    want1 = (lam + 0.1) * (lam - 0.3)
    assert mus[0](lam) == pytest.approx(want0)
    assert mus[1](lam) == pytest.approx(want1)
