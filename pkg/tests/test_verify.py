import numpy as np
import pytest

from spinchains import verify
from spinchains.bethe import BetheRootSet, SolveStrategy, solve_bae
from spinchains.chain import BoundaryDescriptor, fundamental_chain

LAMS = [0.37 + 0.11j, -0.62 + 0.29j, 1.13 - 0.4j]


def test_weyl_dimension_knowns():
    assert verify.weyl_dimension((1, 0)) == 2
    assert verify.weyl_dimension((2, 0)) == 3
    assert verify.weyl_dimension((1, 1)) == 1
    assert verify.weyl_dimension((1, 0, 0)) == 3
    assert verify.weyl_dimension((1, 1, 0)) == 3
    assert verify.weyl_dimension((2, 1, 0)) == 8


def test_counts_weight_and_dominance():
    spec = fundamental_chain(2, 3)
    assert verify.counts_weight(spec, (1,)) == (2, 1)
    assert verify.counts_weight(spec, (2,)) == (1, 2)
    assert verify.counts_dominant(spec, (1,))
    assert not verify.counts_dominant(spec, (2,))
    # open: blockwise dominance
    spec = fundamental_chain(2, 2, BoundaryDescriptor.open(1, 1.0))
    assert verify.counts_dominant(spec, (2,))


def test_m_vectors_bound():
    spec = fundamental_chain(2, 3)
    assert verify.m_vectors(spec) == [(0,), (1,), (2,), (3,)]
    spec = fundamental_chain(3, 1)
    assert verify.cartan_bound(spec) == 2
    assert (1, 0) in verify.m_vectors(spec)
    assert (0, 1) in verify.m_vectors(spec)  # weight 1*(N-2) = 1 <= 2
    assert (1, 1) not in verify.m_vectors(spec)  # weight 3 > 2
    spec = fundamental_chain(3, 2)
    assert (1, 1) in verify.m_vectors(spec)


def test_match_spectrum_complete_gl2():
    spec = fundamental_chain(2, 2)
    sols, swept = verify.sweep_solutions(spec, SolveStrategy(restarts=80))
    report = verify.match_spectrum(spec, sols, LAMS)
    assert report.complete
    assert report.tally == 4
    assert not report.unclaimed
    doc = report.to_dict()
    assert doc["complete"] and doc["tally"] == 4


def test_match_spectrum_reports_corrupted_solution_unmatched():
    spec = fundamental_chain(2, 2)
    sols, _ = verify.sweep_solutions(spec, SolveStrategy(restarts=80))
    sols.append(BetheRootSet([[0.4 + 0.2j]]))
    report = verify.match_spectrum(spec, sols, LAMS)
    bad = [r for r in report.records if not r["matched"]]
    assert len(bad) == 1
    assert bad[0]["mismatch"] > 1e-3


def test_completeness_report_excludes_non_dominant():
    spec = fundamental_chain(2, 2)
    sols = [BetheRootSet([[]]), BetheRootSet([[0.0]]),
            BetheRootSet([[0.3, -0.3]])]
    tally = verify.completeness_report(spec, sols)
    flagged = [e for e in tally.entries if not e["dominant"]]
    assert len(flagged) == 1
    assert flagged[0]["flag"] == "non-highest-weight candidate"
    assert tally.tally == 4  # 3 + 1, the (0,2) candidate contributes nothing


def test_residue_check_pass_and_fail():
    spec = fundamental_chain(2, 3)
    s = solve_bae("closed", spec, (1,), SolveStrategy(restarts=60))[0]
    scale = verify.residue_scale(spec, s, LAMS)
    for _, mag in verify.residue_check(spec, s):
        assert mag < 1e-8 * scale
    bad = BetheRootSet([[complex(s.level(1)[0]) + 0.05]])
    mags = [m for _, m in verify.residue_check(spec, bad)]
    assert max(mags) > 1e-3 * verify.residue_scale(spec, bad, LAMS)


def test_open_residue_poles_mirrored():
    spec = fundamental_chain(2, 2, BoundaryDescriptor.open(1, 1.0))
    s = solve_bae("open", spec, (1,), SolveStrategy(restarts=100))[0]
    poles = [p for p, _ in verify.residue_check(spec, s)]
    assert len(poles) == 2
    x = complex(s.level(1)[0])
    assert abs(poles[0] - (x - 0.5j)) < 1e-12
    assert abs(poles[1] - (-x - 0.5j)) < 1e-12


def test_pinned_singular_string_found_in_sweep():
    spec = fundamental_chain(2, 4)
    sols, _ = verify.sweep_solutions(spec, SolveStrategy(restarts=150))
    singular = [s for s in sols if s.singular]
    assert len(singular) == 1
    roots = sorted(complex(x).imag for x in singular[0].level(1))
    assert np.allclose(roots, [-0.5, 0.5], atol=1e-12)


def test_sweep_flags_non_dominant():
    spec = fundamental_chain(2, 2)
    _, swept = verify.sweep_solutions(spec, SolveStrategy(restarts=40))
    status = dict(swept)
    assert status[(1,)] == "swept"
    assert status[(2,)] == "non-highest-weight candidate"
