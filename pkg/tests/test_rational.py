import numpy as np
import pytest
from fractions import Fraction

from spinchains.rational import (GaussianRational, I, gadjugate, gdet, gdot,
                                 geye, gmat, grat, is_zero_matrix)


def test_basic_arithmetic():
    a = grat(Fraction(1, 3), Fraction(2, 5))
    b = grat(Fraction(-1, 2), 1)
    assert complex(a + b) == pytest.approx(complex(a) + complex(b))
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert complex(a - b) == pytest.approx(complex(a) - complex(b))
    assert complex(a / b) == pytest.approx(complex(a) / complex(b))
    assert (a / b) * b == a


def test_identities():
    assert I * I == grat(-1)
    z = grat(Fraction(3, 7), Fraction(-5, 11))
    assert z + (-z) == grat(0)
    assert z * grat(1) == z
    assert (z / z) == grat(1)
    assert z.is_zero() is False
    assert grat(0).is_zero() is True


def test_hash_eq_consistency():
    a = grat(Fraction(2, 4), Fraction(6, 9))
    b = grat(Fraction(1, 2), Fraction(2, 3))
    assert a == b
    assert hash(a) == hash(b)


def test_re_im_fractions():
    z = grat(Fraction(1, 3), Fraction(2, 7))
    assert z.re == Fraction(1, 3)
    assert z.im == Fraction(2, 7)


def test_gdot_matches_numpy():
    rng = np.random.default_rng(7)
    am = rng.integers(-4, 5, (4, 4))
    bm = rng.integers(-4, 5, (4, 4))
    A = gmat([[grat(int(x)) for x in row] for row in am])
    B = gmat([[grat(int(x)) for x in row] for row in bm])
    C = gdot(A, B)
    assert np.array_equal(np.vectorize(complex)(C), (am @ bm).astype(complex))


def test_det_and_adjugate_vs_float():
    rng = np.random.default_rng(11)
    m = rng.integers(-3, 4, (5, 5)) + 1j * rng.integers(-3, 4, (5, 5))
    M = gmat([[grat(int(x.real), int(x.imag)) for x in row] for row in m])
    d = gdet(M)
    assert complex(d) == pytest.approx(np.linalg.det(m), rel=1e-10)
    adj = gadjugate(M)
    # M adj(M) = det(M) I
    prod = gdot(M, adj)
    expect = geye(5) * 1
    for i in range(5):
        for j in range(5):
            want = d if i == j else grat(0)
            assert prod[i, j] == want


def test_is_zero_matrix():
    Z = gmat([[grat(0), grat(0)], [grat(0), grat(0)]])
    assert is_zero_matrix(Z)
    Z[1, 0] = grat(0, Fraction(1, 10 ** 40))
    assert not is_zero_matrix(Z)


def test_lazy_reduction_keeps_values_exact():
    z = grat(Fraction(1, 3))
    for _ in range(200):
        z = z * grat(Fraction(3, 5)) + grat(Fraction(1, 7))
    w = grat(Fraction(1, 3))
    wf = Fraction(1, 3)
    for _ in range(200):
        wf = wf * Fraction(3, 5) + Fraction(1, 7)
    assert z.re == wf and z.im == 0
