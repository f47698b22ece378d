import numpy as np
import pytest

from spinchains import oracle
from spinchains.chain import BoundaryDescriptor, fundamental_chain, transfer


def _sorted(vals):
    return sorted(vals, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def test_eigensolver_on_known_spectrum():
    # similarity transform of a chosen diagonal: eigenvalues known exactly
    rng = np.random.default_rng(3)
    want = np.array([1.0, -2.0, 0.5 + 0.5j, 0.5 - 0.5j, 3.0, -0.25j])
    Q = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    m = Q @ np.diag(want) @ np.linalg.inv(Q)
    got = oracle.eigenvalues_dense(m)
    for w, g in zip(_sorted(list(want)), _sorted(list(got))):
        assert abs(w - g) < 1e-10


def test_eigensolver_degenerate_and_defective():
    # Jordan block: defective, eigenvalue 2 with multiplicity 3
    J = np.array([[2, 1, 0], [0, 2, 1], [0, 0, 2]], dtype=complex)
    got = oracle.eigenvalues_dense(J)
    assert np.abs(np.array(got) - 2.0).max() < 1e-4  # eigenvalue condition ~ eps^(1/3)
    got = oracle.eigenvalues_dense(np.diag([1.0, 1.0, 5.0]).astype(complex))
    assert _sorted(list(got))[:2] == [1.0, 1.0]


def test_eigensolver_backward_error_report():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    vals, rep = oracle.eigenvalues_dense(m, report=True)
    assert rep["backward_error"] < 1e-12
    # char poly check at a probe point: prod (z - eig) = det(zI - m)
    z = 0.83 + 0.41j
    p = np.prod([z - v for v in vals])
    assert abs(p - np.linalg.det(z * np.eye(12) - m)) / abs(p) < 1e-8


def test_weight_sectors_block_structure():
    spec = fundamental_chain(2, 3)
    sectors = oracle.weight_sectors(spec)
    assert sorted(sectors.sizes()) == [1, 1, 3, 3]
    t = transfer(spec, 0.37 + 0.11j).data
    assert sectors.off_block_residual(t) < 1e-12


def test_weight_sectors_fallback_snp():
    spec = fundamental_chain(2, 2, BoundaryDescriptor.snp(np.eye(2, dtype=complex)))
    sectors = oracle.weight_sectors(spec)
    assert sectors.sizes() == [4]


def test_spectrum_matches_direct_diagonalization():
    spec = fundamental_chain(2, 2, BoundaryDescriptor.open(1, 1.5))
    lams = [0.37 + 0.11j, -0.62 + 0.29j, 1.13 - 0.4j]
    ss = oracle.spectrum(spec, lams)
    for j, lam in enumerate(lams):
        evs = np.linalg.eigvals(transfer(spec, lam).data)
        got = ss.at(j)
        for v in evs:
            assert min(abs(got - v)) < 1e-9


def test_branch_continuation_consistent_under_doubling():
    # inserting midpoints must not change which values each branch takes
    spec = fundamental_chain(2, 2)
    lams = [0.37 + 0.11j, 1.13 - 0.4j]
    dense = [lams[0], 0.5 * (lams[0] + lams[1]), lams[1]]
    a = oracle.spectrum(spec, lams)
    b = oracle.spectrum(spec, dense)
    pairs_a = _sorted([row[1] for row in a.branches])
    pairs_b = _sorted([row[2] for row in b.branches])
    assert np.allclose(pairs_a, pairs_b, atol=1e-10)
    # and branch endpoints pair up identically
    ends_a = {(round(r[0].real, 8), round(r[0].imag, 8),
               round(r[-1].real, 8), round(r[-1].imag, 8)) for r in a.branches}
    ends_b = {(round(r[0].real, 8), round(r[0].imag, 8),
               round(r[-1].real, 8), round(r[-1].imag, 8)) for r in b.branches}
    assert ends_a == ends_b


def test_budget_exceeded_raises_with_partial():
    with pytest.raises(oracle.EigensolverError):
        rng = np.random.default_rng(1)
        m = rng.normal(size=(8, 8))
        oracle.eigenvalues_dense(m, max_sweeps_per_eig=0)
