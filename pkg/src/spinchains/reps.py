"""Finite-dimensional gl(N) representations and evaluation L-operators.

The catalog covers the defining (fundamental) representation, symmetric
powers of it (monomial-basis realization e_ij ~ x_i d/dx_j), and gl(2)
spin-s, which is the symmetric power m = 2s.  Each representation stores the
full table of generator matrices and its highest weight; the distinguished
first basis vector is the highest-weight vector.
"""

from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .tensor import OperatorMatrix


class Irrep:
    """A gl(N) irrep as an explicit table of generator matrices."""

    def __init__(self, rank, dim, weight, generators):
        self.rank = rank
        self.dim = dim
        self.weight = tuple(weight)
        self.generators = generators  # dict (i, j) -> dim x dim complex array

    def e(self, i, j):
        return self.generators[(i, j)]

    def __repr__(self):
        return "Irrep(N=%d, dim=%d, weight=%s)" % (self.rank, self.dim, self.weight)


class SiteSpec:
    """One chain site: a representation plus its inhomogeneity shift."""

    def __init__(self, irrep, a=0.0):
        self.irrep = irrep
        self.a = complex(a)


class FactoredPolynomial:
    """Polynomial kept as leading coefficient and root list."""

    def __init__(self, leading, roots):
        self.leading = complex(leading)
        self.roots = [complex(r) for r in roots]

    @property
    def degree(self):
        return len(self.roots)

    def __call__(self, lam):
        v = self.leading
        for r in self.roots:
            v = v * (lam - r)
        return v

    def __repr__(self):
        return "FactoredPolynomial(%r, %r)" % (self.leading, self.roots)


def _symmetric_power_irrep(rank, m):
    """Symmetric power S^m(C^N) in the monomial basis.

    Basis: monomials x_1^{k_1}...x_N^{k_N} with sum k = m, ordered so that
    x_1^m comes first (highest weight).  e_ij acts as x_i d/dx_j; matrix
    entries are integers.
    """
    basis = sorted(combinations_with_replacement(range(rank), m))
    # combination (i1<=...<=im) stands for x_{i1}...x_{im}; sorting puts the
    # all-zeros tuple (x_1^m) first
    index = {b: n for n, b in enumerate(basis)}
    dim = len(basis)
    gens = {}
    for i in range(rank):
        for j in range(rank):
            mat = np.zeros((dim, dim), dtype=complex)
            for b, col in index.items():
                counts = [0] * rank
                for x in b:
                    counts[x] += 1
                if counts[j] == 0:
                    continue
                coeff = counts[j]
                new = list(counts)
                new[j] -= 1
                new[i] += 1
                target = []
                for letter, c in enumerate(new):
                    target.extend([letter] * c)
                mat[index[tuple(target)], col] = coeff
            gens[(i, j)] = mat
    weight = [m] + [0] * (rank - 1)
    return Irrep(rank, dim, weight, gens)


def make_irrep(rank, kind, param=None):
    """Build an irrep from the supported catalog.

    kind: 'fundamental', 'symmetric_power' (param = m >= 1), or 'gl2_spin'
    (rank 2 only, param = s with 2s a non-negative integer).
    """
    if rank < 2:
        raise ValueError("unsupported representation: rank must be >= 2")
    if kind == "fundamental":
        gens = {}
        for i in range(rank):
            for j in range(rank):
                m = np.zeros((rank, rank), dtype=complex)
                m[i, j] = 1.0
                gens[(i, j)] = m
        return Irrep(rank, rank, [1] + [0] * (rank - 1), gens)
    if kind == "symmetric_power":
        m = int(param)
        if m < 1:
            raise ValueError("unsupported representation: symmetric_power needs m >= 1")
        rep = _symmetric_power_irrep(rank, m)
        assert rep.dim == comb(rank + m - 1, m)
        return rep
    if kind == "gl2_spin":
        if rank != 2:
            raise ValueError("unsupported representation: gl2_spin needs rank 2")
        two_s = 2 * param
        if abs(two_s - round(two_s)) > 1e-12 or two_s < 0:
            raise ValueError("unsupported representation: 2s must be a non-negative integer")
        return _symmetric_power_irrep(2, int(round(two_s)))
    raise ValueError("unsupported representation: %r" % (kind,))


def generator_matrix(site_or_irrep):
    """The coupled generator block G = i * sum_ij pi(e_ij) (x) E_ji.

    Returned on (aux, site) leg order, aux dimension = rank.  The auxiliary
    index pairing (E_ji against pi(e_ij)) and the factor i are fixed so that
    the RLL exchange relation holds with the R-matrix mu - iP; for the
    fundamental representation G = iP.
    """
    irrep = site_or_irrep.irrep if isinstance(site_or_irrep, SiteSpec) else site_or_irrep
    N, d = irrep.rank, irrep.dim
    G = np.zeros((N * d, N * d), dtype=complex)
    for i in range(N):
        for j in range(N):
            # aux block (j, i) carries pi(e_ij)
            G[j * d:(j + 1) * d, i * d:(i + 1) * d] += 1j * irrep.e(i, j)
    return G


def evaluation_L(site, lam):
    """Evaluation L-operator (lam + a) I + G on legs (aux, site)."""
    irrep = site.irrep
    G = generator_matrix(irrep)
    L = (lam + site.a) * np.eye(irrep.rank * irrep.dim, dtype=complex) + G
    return OperatorMatrix(L, [("aux", irrep.rank), ("site", irrep.dim)])


def drinfeld_polynomials(sites):
    """Drinfel'd polynomials P_k(lam) = prod_n (lam + a_n + i alpha_k^(n)),
    k = 1..N, for a product of evaluation representations."""
    if not sites:
        raise ValueError("site list must be non-empty")
    N = sites[0].irrep.rank
    if any(s.irrep.rank != N for s in sites):
        raise ValueError("all sites must share one rank")
    out = []
    for k in range(N):
        roots = [-s.a - 1j * s.irrep.weight[k] for s in sites]
        out.append(FactoredPolynomial(1.0, roots))
    return out


def weight_functions(sites):
    """Pseudo-vacuum weight functions mu_k(lam) = prod_n (lam + a_n + i alpha_k^(n)).

    With the evaluation convention above the diagonal monodromy entries act
    on the pseudo-vacuum by exactly these polynomials, so mu_k coincides with
    the k-th Drinfel'd polynomial of the product representation.
    """
    return drinfeld_polynomials(sites)
