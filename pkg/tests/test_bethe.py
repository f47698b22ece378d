import numpy as np
import pytest

from spinchains.bethe import (BetheRootSet, SolveStrategy, bae_residual,
                              boundary_polynomials, e_fn, empty_rootset,
                              eigenvalue_formula, pseudo_vacuum_eigenvalue,
                              solve_bae)
from spinchains.chain import (BoundaryDescriptor, ChainSpec,
                              fundamental_chain, transfer)
from spinchains.reps import SiteSpec, make_irrep


def test_e_fn():
    lam = 0.4 + 0.3j
    assert e_fn(2, lam) == pytest.approx((lam + 1j) / (lam - 1j))
    assert e_fn(-1, lam) == pytest.approx((lam - 0.5j) / (lam + 0.5j))


def test_rootset_bookkeeping():
    rs = BetheRootSet([[0.1, 0.2], [0.3]])
    assert rs.counts == (2, 1)
    assert rs.level(2) == [0.3]
    assert empty_rootset(3).counts == (0, 0)


def test_closed_vacuum_formula():
    # Lambda0 = (lam + i)^ell + (N-1) lam^ell on fundamental homogeneous chains
    for N, ells in ((2, range(1, 5)), (3, range(1, 4))):
        for ell in ells:
            spec = fundamental_chain(N, ell)
            for lam in (0.37 + 0.11j, -0.62 + 0.29j, 1.13 - 0.4j):
                want = (lam + 1j) ** ell + (N - 1) * lam ** ell
                assert pseudo_vacuum_eigenvalue(spec, lam) == pytest.approx(want, abs=1e-12)


def test_vacuum_is_transfer_eigenvalue():
    for boundary in (None,
                     BoundaryDescriptor.open(1, 1.5),
                     BoundaryDescriptor.open(1, 2.0 + 1.0j)):
        spec = fundamental_chain(2, 2, boundary)
        lam = 0.53 + 0.21j
        t = transfer(spec, lam).data
        w = np.zeros(spec.quantum_dim)
        w[0] = 1.0
        tw = t @ w
        lam0 = pseudo_vacuum_eigenvalue(spec, lam)
        assert np.abs(tw - lam0 * w).max() < 1e-10 * max(1.0, abs(lam0))


def test_known_roots_gl2():
    spec = fundamental_chain(2, 2)
    sols = solve_bae("closed", spec, (1,), SolveStrategy(restarts=40))
    assert len(sols) == 1
    assert abs(complex(sols[0].level(1)[0])) < 1e-10  # singlet root at 0
    spec = fundamental_chain(2, 3)
    sols = solve_bae("closed", spec, (1,), SolveStrategy(restarts=60))
    got = sorted(complex(s.level(1)[0]).real for s in sols)
    want = [-1 / (2 * np.sqrt(3)), 1 / (2 * np.sqrt(3))]
    assert np.allclose(got, want, atol=1e-10)


def test_bae_residual_zero_at_solution_nonzero_off():
    spec = fundamental_chain(2, 3)
    s = solve_bae("closed", spec, (1,), SolveStrategy(restarts=60))[0]
    assert np.abs(bae_residual("closed", spec, s)).max() < 1e-9
    bad = BetheRootSet([[complex(s.level(1)[0]) + 0.1]])
    assert np.abs(bae_residual("closed", spec, bad)).max() > 1e-3


def test_formula_matches_transfer_eigenvalue():
    spec = fundamental_chain(2, 2)
    F = eigenvalue_formula(spec)
    s = solve_bae("closed", spec, (1,), SolveStrategy(restarts=40))[0]
    lam = 0.37 + 0.11j
    evs = np.linalg.eigvals(transfer(spec, lam).data)
    assert min(abs(evs - F(lam, s))) < 1e-10


def test_open_solutions_and_formula():
    spec = fundamental_chain(2, 2, BoundaryDescriptor.open(1, 1.0))
    F = eigenvalue_formula(spec)
    lam = 0.43 - 0.27j
    evs = np.linalg.eigvals(transfer(spec, lam).data)
    found = [F(lam)]
    for counts in ((1,), (2,)):
        for s in solve_bae("open", spec, counts, SolveStrategy(restarts=150)):
            if not s.singular:
                found.append(F(lam, s))
    assert len(found) == 4
    for v in found:
        assert min(abs(evs - v)) < 1e-9


def test_boundary_polynomial_extraction_cached_and_consistent():
    spec = fundamental_chain(3, 2, BoundaryDescriptor.open(2, 1.3))
    p1 = boundary_polynomials(spec)
    p2 = boundary_polynomials(spec)
    assert p1 is p2  # cached on the spec


def test_singular_string_flagged():
    # the exact two-string {-i/2, +i/2} makes the cleared system vacuous
    spec = fundamental_chain(2, 4)
    rs = BetheRootSet([[-0.5j, 0.5j]])
    terms = bae_residual("closed", spec, rs)
    assert np.abs(terms).max() < 1e-12


def test_nested_solver_gl3():
    spec = fundamental_chain(3, 2)
    sols = solve_bae("closed", spec, (1, 0), SolveStrategy(restarts=80))
    F = eigenvalue_formula(spec)
    lam = 0.71 + 0.37j
    evs = np.linalg.eigvals(transfer(spec, lam).data)
    assert len(sols) >= 1
    for s in sols:
        assert min(abs(evs - F(lam, s))) < 1e-9
