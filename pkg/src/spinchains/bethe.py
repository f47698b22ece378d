"""Eigenvalue formulas and Bethe ansatz equations for all three boundary
conditions.

The transfer-matrix eigenvalues are sums of N terms: a boundary-independent
"Drinfel'd" polynomial prefactor per auxiliary direction, times a rational
dressing factor built from the Bethe roots.  The closed-chain dressings carry
single factors (lam - root + shift); the open and soliton-non-preserving
(SNP) dressings carry doubled factors (lam +- root + shift) because the
boundary monodromy couples lam and -lam.

Bethe-equation residuals are always formed in cleared-fraction (polynomial)
form, so they are pole-free and an exact zero is equivalent to the BAE.
The solver is damped Newton on that cleared form with a deterministic seed
grid plus seeded random restarts.

Open-boundary conventions, fixed once and validated against exact
diagonalization:

* the k-th prefactor is g_k(lam) * beta_k(lam) with
  g_k = 2 lam (2 lam + iN) / ((2 lam + ik - i)(2 lam + ik)) * D_kk(lam),
* D_kk(lam) = lam + xi for k <= M but xi - lam - iM for k > M.  The -iM
  shift in the lower block is required: without it the excited-state
  eigenvalues do not reproduce the spectrum (checked for N = 2, 3).
* beta_k are polynomials of degree 2*ell, recovered numerically from the
  vacuum action of the boundary monodromy (see boundary_polynomials).
"""

import itertools

import numpy as np

from .chain import BoundaryDescriptor, ChainSpec, boundary_monodromy, monodromy
from .reps import FactoredPolynomial, drinfeld_polynomials

_POLE_TOL = 1e-12


class PoleError(ValueError):
    pass


class ExtractionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# elementary rational building blocks

def e_fn(n, lam):
    """e_n(lam) = (lam + in/2) / (lam - in/2); the order n may be complex."""
    den = lam - 0.5j * n
    if abs(den) < _POLE_TOL:
        raise PoleError("e_%r pole at lam=%r" % (n, lam))
    return (lam + 0.5j * n) / den


def e_tilde(n, lam, mu):
    """Doubled boundary version: e_n(lam - mu) e_n(lam + mu)."""
    return e_fn(n, lam - mu) * e_fn(n, lam + mu)


# ---------------------------------------------------------------------------
# root sets

class BetheRootSet:
    """Bethe roots grouped by nesting level.

    roots[k] holds the M_{k+1} roots of level k+1 (k = 0 .. N-2); counts is
    the tuple (M_1, ..., M_{N-1}).
    """

    def __init__(self, roots, residual_norm=None, iterations=0, seed=None,
                 singular=False):
        self.roots = [list(map(complex, lvl)) for lvl in roots]
        self.counts = tuple(len(lvl) for lvl in self.roots)
        self.residual_norm = residual_norm
        self.iterations = iterations
        self.seed = seed
        self.singular = singular

    def level(self, k):
        """Roots of level k (1-based); out-of-range levels are empty."""
        if 1 <= k <= len(self.roots):
            return self.roots[k - 1]
        return []

    def distinct_within_levels(self, tol=1e-8):
        for lvl in self.roots:
            for a, b in itertools.combinations(lvl, 2):
                if abs(a - b) <= tol:
                    return False
        return True

    def __repr__(self):
        return "BetheRootSet(M=%r, residual=%r)" % (self.counts, self.residual_norm)


def empty_rootset(rank):
    return BetheRootSet([[] for _ in range(rank - 1)], residual_norm=0.0)


# ---------------------------------------------------------------------------
# dressing functions

def dressing(kind, k, rootset, lam, tol_pole=1e-9):
    """Dressing factor A_k(lam) for one auxiliary direction.

    closed:   prod over level k-1 of (lam - mu + i(k+1)/2)/(lam - mu + i(k-1)/2)
            * prod over level k   of (lam - mu + i(k-2)/2)/(lam - mu + ik/2)
    open/snp: the same shifts with doubled factors (lam +- mu + shift).
    """
    doubled = kind in ("open", "snp")
    out = 1.0 + 0.0j
    for which, up, dn in ((k - 1, 0.5j * (k + 1), 0.5j * (k - 1)),
                          (k, 0.5j * (k - 2), 0.5j * k)):
        for idx, mu in enumerate(rootset.level(which)):
            signs = (1, -1) if doubled else (1,)
            for s in signs:
                den = lam + s * mu + dn if doubled else lam - mu + dn
                num = lam + s * mu + up if doubled else lam - mu + up
                if abs(den) < tol_pole:
                    raise PoleError("dressing pole: level %d root %d at lam=%r"
                                    % (which, idx, lam))
                out *= num / den
    return out


# ---------------------------------------------------------------------------
# boundary prefactors

def g_factor(k, lam, boundary, rank):
    """Per-direction boundary prefactor g_k(lam).

    open: 2 lam (2 lam + iN) / ((2 lam + ik - i)(2 lam + ik)) * D_kk(lam),
    with D_kk = lam + xi for k <= M and xi - lam - iM for k > M (the -iM
    shift in the lower block is essential, see module docstring).
    snp: the constant Ktil_kk, replaced by 1 when that diagonal entry
    vanishes (the scale is then carried entirely by sigma_k).
    closed: 1.
    """
    if boundary.kind == "closed":
        return 1.0 + 0.0j
    if boundary.kind == "snp":
        c = complex(boundary.Ktil[k - 1, k - 1])
        return c if abs(c) > 1e-12 else 1.0 + 0.0j
    N = rank
    d1 = 2 * lam + 1j * (k - 1)
    d2 = 2 * lam + 1j * k
    if abs(d1) < _POLE_TOL or abs(d2) < _POLE_TOL:
        raise PoleError("g_%d pole at lam=%r" % (k, lam))
    u = 2 * lam * (2 * lam + 1j * N) / (d1 * d2)
    if k <= boundary.M:
        D = lam + boundary.xi
    else:
        D = boundary.xi - lam - 1j * boundary.M
    return u * D


def _rational_u(k, lam, N):
    """g_k without the D_kk factor."""
    return 2 * lam * (2 * lam + 1j * N) / ((2 * lam + 1j * (k - 1)) * (2 * lam + 1j * k))


# ---------------------------------------------------------------------------
# boundary Drinfel'd polynomials (numerical extraction)

def _vacuum_diagonal(spec, lam):
    """<omega| X_kk(lam) |omega> for the relevant (normalized) monodromy."""
    d = spec.quantum_dim
    if spec.boundary.kind == "closed":
        X = monodromy(spec, lam).data
    else:
        X = boundary_monodromy(spec, lam)[0].data
    return np.array([X[k * d, k * d] for k in range(spec.rank)])


def _fit_factored(xs, ys, deg):
    coeffs = np.polyfit(xs, ys, deg)
    while len(coeffs) > 1 and abs(coeffs[0]) < 1e-9 * max(1.0, np.abs(coeffs).max()):
        coeffs = coeffs[1:]
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    return FactoredPolynomial(coeffs[0], roots)


def boundary_polynomials(spec):
    """Extract the per-direction vacuum polynomials from the monodromy.

    closed: <omega|T_kk|omega> interpolates directly to the Drinfel'd
    polynomials P_k.

    open: the diagonal vacuum components do not individually factor as
    g_k * beta_k; only their sum does.  But the sum is linear in xi, and the
    two xi-coefficients give the two block combinations
        X(lam) = sum_{k<=M} u_k beta_k,   Y(lam) = sum_{k>M} u_k beta_k
    via  Lambda0 = (lam X - (lam + iM) Y) + xi (X + Y).  For chains whose
    sites all have highest weight (s,0,...,0) every beta_k with k >= 2 is
    one common polynomial, so X and Y determine beta_1 and that common
    polynomial.  A held-out reconstruction check guards the assumptions.

    snp: sigma_k = <omega|S_kk|omega> / g_k interpolates level by level
    (the SNP prefactors are constants).
    """
    cached = getattr(spec, "_boundary_polys", None)
    if cached is not None:
        return cached
    kind = spec.boundary.kind
    N = spec.rank
    ell = spec.ell
    if kind == "closed":
        xs = 0.293 + 0.47 * np.arange(ell + 1)
        vals = np.array([_vacuum_diagonal(spec, x) for x in xs])
        polys = [_fit_factored(xs, vals[:, k], ell) for k in range(N)]
    elif kind == "snp":
        deg = 2 * ell + 1
        xs = 0.293 + 0.41 * np.arange(deg + 3)
        vals = np.array([_vacuum_diagonal(spec, x) for x in xs])
        polys = []
        for k in range(1, N + 1):
            g = g_factor(k, 0.0, spec.boundary, N)
            polys.append(_fit_factored(xs, vals[:, k - 1] / g, deg))
    else:
        polys = _open_boundary_polynomials(spec)
    _heldout_check(spec, polys)
    spec._boundary_polys = polys
    return polys


def _open_boundary_polynomials(spec):
    bd = spec.boundary
    if bd.U is not None and not np.allclose(bd.U, np.eye(spec.rank)):
        raise ExtractionError("direct extraction needs a diagonal K (U = identity)")
    if any(s.irrep.weight[1:] != tuple([0] * (spec.rank - 1)) for s in spec.sites):
        raise ExtractionError("extraction assumes sites with weight (s,0,...,0)")
    N, M, ell = spec.rank, bd.M, spec.ell
    spec_shift = ChainSpec(N, spec.sites, BoundaryDescriptor.open(M, bd.xi + 1.0))
    deg = 2 * ell
    xs = 0.317 + 0.43 * np.arange(deg + 1)
    b1_vals, bc_vals = [], []
    for x in xs:
        L0 = _vacuum_diagonal(spec, x).sum()
        L1 = _vacuum_diagonal(spec_shift, x).sum()
        V = L1 - L0
        S = L0 - bd.xi * V
        den = 2 * x + 1j * M
        X = (S + (x + 1j * M) * V) / den
        Y = (x * V - S) / den
        u = [_rational_u(k, x, N) for k in range(1, N + 1)]
        beta_c = Y / sum(u[M:])
        beta_1 = (X - sum(u[1:M]) * beta_c) / u[0]
        b1_vals.append(beta_1)
        bc_vals.append(beta_c)
    p1 = _fit_factored(xs, np.array(b1_vals), deg)
    pc = _fit_factored(xs, np.array(bc_vals), deg)
    return [p1] + [pc] * (N - 1)


def _heldout_check(spec, polys, tol=1e-10):
    """Reconstruct the vacuum eigenvalue at fresh points from the extracted
    polynomials and compare with the direct monodromy action."""
    N = spec.rank
    for x in (0.111, 0.777, 1.313):
        direct = _vacuum_diagonal(spec, x).sum()
        recon = sum(g_factor(k, x, spec.boundary, N) * polys[k - 1](x)
                    for k in range(1, N + 1))
        scale = max(1.0, abs(direct))
        if abs(direct - recon) / scale > tol:
            raise ExtractionError("held-out reconstruction residual %.2e at lam=%r"
                                  % (abs(direct - recon) / scale, x))


def pseudo_vacuum_eigenvalue(spec, lam):
    """Lambda0(lam): the transfer-matrix eigenvalue on the highest-weight
    reference state, from the analytic formula (all M_k = 0)."""
    if spec.boundary.kind == "closed":
        return sum(P(lam) for P in drinfeld_polynomials(spec.sites))
    polys = boundary_polynomials(spec)
    return sum(g_factor(k, lam, spec.boundary, spec.rank) * polys[k - 1](lam)
               for k in range(1, spec.rank + 1))


# ---------------------------------------------------------------------------
# eigenvalue formula

class EigenvalueFormula:
    """Pointwise-evaluable eigenvalue Lambda(lam) = sum_k pref_k(lam) A_k(lam)."""

    def __init__(self, kind, prefactors):
        self.kind = kind
        self.prefactors = prefactors

    def __call__(self, lam, rootset=None):
        if rootset is None:
            rootset = BetheRootSet([[]])
        return sum(p(lam) * dressing(self.kind, k + 1, rootset, lam)
                   for k, p in enumerate(self.prefactors))


def eigenvalue_formula(spec):
    kind = spec.boundary.kind
    if kind == "closed":
        return EigenvalueFormula(kind, list(drinfeld_polynomials(spec.sites)))
    polys = boundary_polynomials(spec)
    prefs = []
    for k in range(1, spec.rank + 1):
        prefs.append(lambda lam, k=k, p=polys[k - 1]:
                     g_factor(k, lam, spec.boundary, spec.rank) * p(lam))
    return EigenvalueFormula(kind, prefs)


# ---------------------------------------------------------------------------
# Bethe equations, cleared-fraction form

def _bae_terms(spec, rootset):
    """Per-root pair (A, B) with the BAE equivalent to A - B = 0, both sides
    polynomial in the roots (all e-function denominators cleared)."""
    kind = spec.boundary.kind
    N = spec.rank
    if kind == "closed":
        polys = drinfeld_polynomials(spec.sites)
    else:
        polys = boundary_polynomials(spec)
    bd = spec.boundary
    doubled = kind in ("open", "snp")
    terms = []
    for k in range(1, N):
        for n, x in enumerate(rootset.level(k)):
            num = den = 1.0 + 0.0j
            for which, order in ((k - 1, -1), (k, 2), (k + 1, -1)):
                for m, mu in enumerate(rootset.level(which)):
                    if which == k and m == n:
                        continue
                    for s in ((1, -1) if doubled else (1,)):
                        z = x + s * mu if doubled else x - mu
                        num *= z + 0.5j * order
                        den *= z - 0.5j * order
            if kind == "snp":
                arg = x + 0.5j * k
                rhs_num = g_factor(k, arg, bd, N) * polys[k - 1](arg)
                rhs_den = g_factor(k + 1, arg, bd, N) * polys[k](arg)
            else:
                arg = x - 0.5j * k
                rhs_num = polys[k - 1](arg)
                rhs_den = polys[k](arg)
            if kind == "open" and k == bd.M:
                # boundary factor -e_{-M-2i xi}(x)
                rhs_num *= -(x - 0.5j * bd.M + bd.xi)
                rhs_den *= (x + 0.5j * bd.M - bd.xi)
            terms.append((num * rhs_den, den * rhs_num))
    return terms


def bae_residual(kind, spec, rootset):
    """Cleared-fraction BAE residual vector, one entry per root."""
    if kind != spec.boundary.kind:
        raise ValueError("kind %r does not match spec boundary %r"
                         % (kind, spec.boundary.kind))
    return np.array([a - b for a, b in _bae_terms(spec, rootset)], dtype=complex)


def _scaled_residual(spec, rootset):
    terms = _bae_terms(spec, rootset)
    if not terms:
        return 0.0
    return max(abs(a - b) / (abs(a) + abs(b) + 1.0) for a, b in terms)


def _is_singular_config(spec, rootset, tol=1e-8):
    """Both cleared sides vanishing means the equation for that root holds
    vacuously (degenerate string configuration)."""
    return any(max(abs(a), abs(b)) < tol for a, b in _bae_terms(spec, rootset))


# ---------------------------------------------------------------------------
# solver

class SolveStrategy:
    def __init__(self, restarts=200, spread=1.5, tol_solve=1e-11, tol_dup=1e-8,
                 max_iter=80, seed=0, max_roots=8, grid=None):
        self.restarts = restarts
        self.spread = spread
        self.tol_solve = tol_solve
        self.tol_dup = tol_dup
        self.max_iter = max_iter
        self.seed = seed
        self.max_roots = max_roots
        self.grid = grid


def _pack(roots):
    return np.concatenate([np.asarray(lvl, dtype=complex) for lvl in roots]) \
        if any(len(l) for l in roots) else np.zeros(0, dtype=complex)


def _unpack(z, counts):
    out, pos = [], 0
    for c in counts:
        out.append(list(z[pos:pos + c]))
        pos += c
    return out


def _newton(spec, counts, z0, max_iter):
    """Damped Newton on the cleared residual (holomorphic in the roots)."""
    m = len(z0)
    z = z0.copy()

    def F(z):
        rs = BetheRootSet(_unpack(z, counts))
        return bae_residual(spec.boundary.kind, spec, rs)

    def scaled(z):
        return _scaled_residual(spec, BetheRootSet(_unpack(z, counts)))

    f = F(z)
    for it in range(max_iter):
        if scaled(z) < 1e-13:
            return z, it
        J = np.zeros((m, m), dtype=complex)
        h = 1e-7 * max(1.0, np.abs(z).max())
        for j in range(m):
            zp = z.copy()
            zp[j] += h
            J[:, j] = (F(zp) - f) / h
        try:
            dz = np.linalg.lstsq(J, -f, rcond=None)[0]
        except np.linalg.LinAlgError:
            return None, it
        t = 1.0
        ok = False
        while t > 1e-4:
            fz = F(z + t * dz)
            if np.abs(fz).max() < (1 - 0.25 * t) * np.abs(f).max():
                ok = True
                break
            t *= 0.5
        if not ok:
            return (z, it) if scaled(z) < 1e-13 else (None, it)
        z = z + t * dz
        f = fz
    return z, max_iter


def _canonicalize(kind, roots):
    out = []
    for lvl in roots:
        lvl = list(lvl)
        if kind in ("open", "snp"):
            lvl = [(-x if (x.real < -1e-9 or (abs(x.real) <= 1e-9 and x.imag < 0))
                    else x) for x in lvl]
        lvl.sort(key=lambda x: (round(x.real, 7), round(x.imag, 7)))
        out.append(lvl)
    return out


def _admissible(kind, roots, tol_dup):
    for lvl in roots:
        for a, b in itertools.combinations(lvl, 2):
            if abs(a - b) <= tol_dup:
                return False
            if kind in ("open", "snp") and abs(a + b) <= 1e-5:
                return False
        if kind in ("open", "snp") and any(abs(x) < 1e-5 for x in lvl):
            return False
    return True


def _seed_points(m, strategy):
    base = strategy.grid or [0.51 - 0.43j, -0.47 + 0.36j, 1.05 + 0.21j,
                             0.23 + 0.91j, -0.95 - 0.55j, 1.62 - 0.08j]
    cap = 64
    seeds = []
    for combo in itertools.product(base, repeat=m):
        seeds.append(np.array(combo, dtype=complex))
        if len(seeds) >= cap:
            break
    return seeds


def solve_bae(kind, spec, counts, strategy=None):
    """Find admissible Bethe root sets with the given level counts.

    Damped Newton on the cleared-fraction residual, started from a
    deterministic seed grid and then from seeded random restarts.  Converged
    candidates are filtered (pairwise-distinct roots, no trivial fixed
    points for boundary chains), canonicalized, deduplicated, and returned
    sorted; degenerate-string solutions are kept but flagged singular.
    """
    if kind != spec.boundary.kind:
        raise ValueError("kind %r does not match spec boundary %r"
                         % (kind, spec.boundary.kind))
    if len(counts) != spec.rank - 1:
        raise ValueError("need N-1 level counts")
    strategy = strategy or SolveStrategy()
    m = int(sum(counts))
    if m > strategy.max_roots:
        raise ValueError("root count %d exceeds cap %d" % (m, strategy.max_roots))
    if m == 0:
        return [BetheRootSet([[] for _ in counts], residual_norm=0.0,
                             seed=strategy.seed)]
    rng = np.random.default_rng(strategy.seed)
    starts = _seed_points(m, strategy)
    for _ in range(strategy.restarts):
        starts.append(strategy.spread * (rng.standard_normal(m)
                                         + 1j * rng.standard_normal(m)))
    found = []
    for z0 in starts:
        z, its = _newton(spec, counts, np.asarray(z0, dtype=complex),
                         strategy.max_iter)
        if z is None:
            continue
        roots = _canonicalize(kind, _unpack(z, counts))
        if not _admissible(kind, roots, strategy.tol_dup):
            continue
        rs = BetheRootSet(roots, iterations=its, seed=strategy.seed)
        res = _scaled_residual(spec, rs)
        if res > strategy.tol_solve:
            continue
        rs.residual_norm = res
        rs.singular = _is_singular_config(spec, rs)
        # vacuous (singular-string) configurations form flat valleys, so the
        # solver lands anywhere nearby: cluster those much more coarsely
        radius = 5e-2 if rs.singular else 1e-6
        flat = np.array([x for lvl in roots for x in lvl])
        if any(g.counts == rs.counts and g.singular == rs.singular
               and np.abs(flat - np.array([x for lvl in g.roots for x in lvl])).max()
               < radius for g in found):
            continue
        found.append(rs)
    found.sort(key=lambda r: tuple((round(x.real, 6), round(x.imag, 6))
                                   for lvl in r.roots for x in lvl))
    return found
