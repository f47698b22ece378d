"""Transfer matrices for closed, open and soliton non-preserving chains.

Conventions (fixed once, asserted throughout the test suite):

- r_matrix(N, mu) = mu*I - i*P.  All exchange relations (RTT, reflection,
  twisted) close with the braiding form Rhat(u) = u*I + i*P = -r_matrix(N,-u)
  acting between the two auxiliary spaces.
- The evaluation operator is L(lam) = (lam + a) I + G with G = i sum pi(e_ij)
  (x) E_ji (reps module); for a fundamental site L(lam) = lam + iP.
- Open boundary monodromy: B(lam) = T(lam) K(lam) T(-lam)^{-1}.  T(-lam)^{-1}
  is handled through per-site adjugate normalization: for a fundamental site
  L(-lam)^{-1} = -(lam - a + iP) / ((lam-a)^2 + 1), so the normalized
  numerator is the reversed-order product of the factors (lam - a_n + i P)
  and the scalar denominator is prod_n (-( (lam-a_n)^2 + 1 )).  Eigenvalue
  comparisons divide the scalar back out.  Non-fundamental sites fall back
  to a dense linear solve (denominator 1).
- SNP boundary monodromy: S(lam) = T(lam) Ktil T^{t_a}(-lam + i rho) with
  rho = -N/2 and t_a the transpose on the auxiliary leg only; polynomial, no
  inverse needed.
"""

import numpy as np

from .reps import SiteSpec, evaluation_L, make_irrep
from .tensor import OperatorMatrix, embed


# ---------------------------------------------------------------------------
# chain specification


class BoundaryDescriptor:
    def __init__(self, kind, M=None, xi=None, U=None, Ktil=None):
        self.kind = kind
        self.M = M
        self.xi = complex(xi) if xi is not None else None
        self.U = None if U is None else np.asarray(U, dtype=complex)
        self.Ktil = None if Ktil is None else np.asarray(Ktil, dtype=complex)

    @staticmethod
    def closed():
        return BoundaryDescriptor("closed")

    @staticmethod
    def open(M, xi, U=None):
        return BoundaryDescriptor("open", M=M, xi=xi, U=U)

    @staticmethod
    def snp(Ktil):
        return BoundaryDescriptor("snp", Ktil=Ktil)


class ChainSpec:
    def __init__(self, rank, sites, boundary):
        if not sites:
            raise ValueError("chain needs at least one site")
        if any(s.irrep.rank != rank for s in sites):
            raise ValueError("site rank mismatch")
        if boundary.kind == "open":
            if not (1 <= boundary.M <= rank - 1):
                raise ValueError("M out of range 1..N-1")
            if boundary.U is not None and abs(np.linalg.det(boundary.U)) < 1e-12:
                raise ValueError("U must be invertible")
        if boundary.kind == "snp":
            if boundary.Ktil is None or boundary.Ktil.shape != (rank, rank):
                raise ValueError("snp boundary needs a constant N x N matrix")
        self.rank = rank
        self.sites = list(sites)
        self.boundary = boundary

    @property
    def ell(self):
        return len(self.sites)

    @property
    def quantum_dims(self):
        return [s.irrep.dim for s in self.sites]

    @property
    def quantum_dim(self):
        d = 1
        for x in self.quantum_dims:
            d *= x
        return d

    def quantum_legs(self):
        return [("site%d" % n, d) for n, d in enumerate(self.quantum_dims)]

    def all_legs(self):
        return [("aux", self.rank)] + self.quantum_legs()


def fundamental_chain(rank, ell, boundary=None, a=None):
    """Convenience constructor: homogeneous fundamental chain."""
    rep = make_irrep(rank, "fundamental")
    shifts = a if a is not None else [0.0] * ell
    sites = [SiteSpec(rep, s) for s in shifts]
    return ChainSpec(rank, sites, boundary or BoundaryDescriptor.closed())


# ---------------------------------------------------------------------------
# R-matrices

def permutation(N, exact=False):
    if exact:
        from .rational import gzeros, grat
        P = gzeros(N * N)
        for i in range(N):
            for j in range(N):
                P[i * N + j, j * N + i] = grat(1)
        return P
    P = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            P[i * N + j, j * N + i] = 1.0
    return P


def r_matrix(N, mu, exact=False):
    """R(mu) = mu*I - i*P on C^N (x) C^N."""
    if exact:
        from .rational import geye, grat, _coerce
        m = np.asarray(geye(N * N)) * _coerce(mu) - np.asarray(permutation(N, True)) * grat(0, 1)
        return OperatorMatrix(m, [("s1", N), ("s2", N)])
    m = mu * np.eye(N * N, dtype=complex) - 1j * permutation(N)
    return OperatorMatrix(m, [("s1", N), ("s2", N)])


def braiding_r(N, u, exact=False):
    """Rhat(u) = u*I + i*P, the form under which the exchange relations close."""
    if exact:
        from .rational import geye, grat, _coerce
        m = np.asarray(geye(N * N)) * _coerce(u) + np.asarray(permutation(N, True)) * grat(0, 1)
        return OperatorMatrix(m, [("s1", N), ("s2", N)])
    m = u * np.eye(N * N, dtype=complex) + 1j * permutation(N)
    return OperatorMatrix(m, [("s1", N), ("s2", N)])


# ---------------------------------------------------------------------------
# monodromies

def monodromy(spec, lam):
    """T_a(lam) = L_a1(lam) ... L_al(lam) on legs (aux, site1..site_l)."""
    legs = spec.all_legs()
    dim = spec.rank * spec.quantum_dim
    T = np.eye(dim, dtype=complex)
    for n, site in enumerate(spec.sites):
        Ln = embed(evaluation_L(site, lam).data, [0, n + 1], legs)
        T = T @ Ln
    return OperatorMatrix(T, legs)


def _reversed_adjugate_monodromy(spec, lam):
    """Normalized numerator of T(-lam)^{-1} for fundamental sites:
    reversed-order product of (lam - a_n + i P), plus the scalar denominator
    prod_n ( -((lam - a_n)^2 + 1) )."""
    legs = spec.all_legs()
    dim = spec.rank * spec.quantum_dim
    M = np.eye(dim, dtype=complex)
    denom = 1.0 + 0.0j
    for n in reversed(range(spec.ell)):
        site = spec.sites[n]
        shifted = SiteSpec(site.irrep, -site.a)
        Ln = embed(evaluation_L(shifted, lam).data, [0, n + 1], legs)
        M = M @ Ln
        denom *= -((lam - site.a) ** 2 + 1)
    return M, denom


def k_matrix(boundary, lam, N):
    """K(lam) = U (lam E_M + xi I) U^{-1}, E_M = diag(+1 x M, -1 x (N-M))."""
    d = np.array([1.0] * boundary.M + [-1.0] * (N - boundary.M))
    K = np.diag(lam * d + boundary.xi).astype(complex)
    if boundary.U is not None:
        K = boundary.U @ K @ np.linalg.inv(boundary.U)
    return K


def boundary_monodromy(spec, lam, normalized=True):
    """Boundary monodromy for open or snp chains.

    open: returns (B, denom) with B the adj-normalized numerator of
    T(lam) K(lam) T(-lam)^{-1} and denom the scalar it must be divided by to
    recover the literal product.  With normalized=False a dense inverse is
    used and denom = 1 (errors at spectral-parameter poles).
    snp: returns (S, 1.0) with S = T(lam) Ktil T^{t_a}(-lam - iN/2).
    """
    N = spec.rank
    legs = spec.all_legs()
    if spec.boundary.kind == "open":
        T = monodromy(spec, lam)
        K = embed(k_matrix(spec.boundary, lam, N), [0], legs)
        all_fundamental = all(s.irrep.dim == N and s.irrep.weight == tuple([1] + [0] * (N - 1))
                              for s in spec.sites)
        if normalized and all_fundamental:
            Minv, denom = _reversed_adjugate_monodromy(spec, lam)
            B = T.data @ K @ Minv
        else:
            Tm = monodromy(spec, -lam).data
            if abs(np.linalg.det(Tm)) < 1e-12:
                raise ValueError("spectral-parameter pole: T(-lam) singular at lam=%r" % (lam,))
            B = T.data @ K @ np.linalg.inv(Tm)
            denom = 1.0 + 0.0j
        return OperatorMatrix(B, legs), denom
    if spec.boundary.kind == "snp":
        rho = -N / 2.0
        T = monodromy(spec, lam)
        T2 = monodromy(spec, -lam + 1j * rho).partial_transpose(0)
        K = embed(spec.boundary.Ktil, [0], legs)
        return OperatorMatrix(T.data @ K @ T2.data, legs), 1.0 + 0.0j
    raise ValueError("boundary kind %r has no boundary monodromy" % (spec.boundary.kind,))


def transfer(spec, lam, normalized=True):
    """t(lam), b(lam) or s(lam): auxiliary trace of the relevant monodromy.

    For open chains the returned operator is the adj-normalized numerator
    trace; divide by boundary_denominator(spec, lam) for the literal b(lam).
    """
    if spec.boundary.kind == "closed":
        return monodromy(spec, lam).partial_trace(0)
    B, _ = boundary_monodromy(spec, lam, normalized=normalized)
    return B.partial_trace(0)


def boundary_denominator(spec, lam):
    if spec.boundary.kind != "open":
        return 1.0 + 0.0j
    denom = 1.0 + 0.0j
    for site in spec.sites:
        denom *= -((lam - site.a) ** 2 + 1)
    return denom


# ---------------------------------------------------------------------------
# symmetry generators

def coproduct_generator(spec, i, j):
    """Delta(e_ij) = sum over sites of pi(e_ij) acting on the quantum space."""
    legs = spec.quantum_legs()
    dim = spec.quantum_dim
    out = np.zeros((dim, dim), dtype=complex)
    for n, site in enumerate(spec.sites):
        out += embed(site.irrep.e(i, j), [n], legs)
    return OperatorMatrix(out, legs)


# ---------------------------------------------------------------------------
# Hamiltonians

def _richardson_derivative(f, h=1e-3):
    """Central difference with one Richardson step: O(h^4) error."""
    d1 = (f(h) - f(-h)) / (2 * h)
    d2 = (f(h / 2) - f(-h / 2)) / h
    return (4 * d2 - d1) / 3


def hamiltonian(spec):
    """Local Hamiltonian from the derivative of the transfer matrix.

    closed: H = d/dlam ln t(lam) at lam = 0 (fundamental homogeneous only).
    open:   H = -1/2 d/dlam b(lam) at lam = 0, with b the literal
            (denominator-corrected) double-row transfer.
    """
    N = spec.rank
    fundamental = all(s.irrep.dim == N and s.irrep.weight == tuple([1] + [0] * (N - 1))
                      for s in spec.sites)
    homogeneous = all(abs(s.a) < 1e-14 for s in spec.sites)
    if not (fundamental and homogeneous):
        raise ValueError("locality unavailable: Hamiltonian needs homogeneous fundamental sites")
    if spec.boundary.kind == "closed":
        t0 = transfer(spec, 0.0).data
        dt = _richardson_derivative(lambda h: transfer(spec, h).data)
        H = np.linalg.solve(t0.T, dt.T).T  # dt @ t0^{-1}
        return OperatorMatrix(H, spec.quantum_legs())
    if spec.boundary.kind == "open":
        def b(h):
            return transfer(spec, h).data / boundary_denominator(spec, h)
        db = _richardson_derivative(b)
        return OperatorMatrix(-0.5 * db, spec.quantum_legs())
    raise ValueError("no Hamiltonian for boundary kind %r" % (spec.boundary.kind,))


# ---------------------------------------------------------------------------
# exact-mode structural identity residuals (rational sample points)

def _embed3(m, N, slot, exact):
    """Embed a two-space operator on C^N^3 at slot (0: spaces 12, 1: 13, 2: 23)."""
    if exact:
        from .rational import geye, grat
        eye = np.asarray(geye(N))
    else:
        eye = np.eye(N, dtype=complex)
    big = np.kron(m, eye)  # acts on (pair, third) ordering
    t = big.reshape(N, N, N, N, N, N)  # (a, c, i | b, d, j)
    if slot == 0:
        perm = (0, 1, 2, 3, 4, 5)      # spaces (1,2), identity on 3
    elif slot == 1:
        perm = (0, 2, 1, 3, 5, 4)      # spaces (1,3)
    else:
        perm = (2, 0, 1, 5, 3, 4)      # spaces (2,3)
    return np.transpose(t, perm).reshape(N ** 3, N ** 3)


def yang_baxter_residual(N, lam, mu, exact=False):
    """R12(lam-mu) R13(lam) R23(mu) - R23(mu) R13(lam) R12(lam-mu)."""
    if exact:
        from .rational import _coerce
        lam, mu = _coerce(lam), _coerce(mu)
    r12 = _embed3(r_matrix(N, lam - mu, exact).data, N, 0, exact)
    r13 = _embed3(r_matrix(N, lam, exact).data, N, 1, exact)
    r23 = _embed3(r_matrix(N, mu, exact).data, N, 2, exact)
    return r12 @ r13 @ r23 - r23 @ r13 @ r12


def unitarity_residual(N, lam, exact=False):
    """R(lam) R21(-lam) + (lam^2 + 1) I."""
    P = permutation(N, exact)
    R = r_matrix(N, lam, exact).data
    if exact:
        from .rational import geye, _coerce
        lam = _coerce(lam)
        R21 = P @ r_matrix(N, -lam, True).data @ P
        return R @ R21 + np.asarray(geye(N * N)) * (lam * lam + 1)
    R21 = P @ r_matrix(N, -lam).data @ P
    return R @ R21 + (lam ** 2 + 1) * np.eye(N * N)
