"""Numerical workbench for rational gl(N) spin chains.

Builds transfer matrices for closed, open (diagonalizable reflection
K-matrix), and soliton non-preserving boundary conditions; evaluates
dressed eigenvalue formulas and Bethe ansatz equations; solves the latter
numerically; and verifies the resulting spectra against an independent
dense eigensolver.
"""

from .chain import (BoundaryDescriptor, ChainSpec, boundary_monodromy,
                    fundamental_chain, hamiltonian, k_matrix, monodromy,
                    r_matrix, transfer)
from .reps import (FactoredPolynomial, Irrep, SiteSpec, drinfeld_polynomials,
                   evaluation_L, make_irrep)
from .bethe import (BetheRootSet, SolveStrategy, bae_residual, dressing,
                    eigenvalue_formula, empty_rootset,
                    pseudo_vacuum_eigenvalue, solve_bae)
from .oracle import eigenvalues_dense, spectrum, weight_sectors
from .verify import (completeness_report, match_spectrum, residue_check,
                     sweep_solutions)

__all__ = [
    "BoundaryDescriptor", "ChainSpec", "boundary_monodromy",
    "fundamental_chain", "hamiltonian", "k_matrix", "monodromy", "r_matrix",
    "transfer", "FactoredPolynomial", "Irrep", "SiteSpec",
    "drinfeld_polynomials", "evaluation_L", "make_irrep", "BetheRootSet",
    "SolveStrategy", "bae_residual", "dressing", "eigenvalue_formula",
    "empty_rootset", "pseudo_vacuum_eigenvalue", "solve_bae",
    "eigenvalues_dense", "spectrum", "weight_sectors",
    "completeness_report", "match_spectrum", "residue_check",
    "sweep_solutions",
]

__version__ = "0.1.0"
