"""Independent exact-diagonalization backend.

Every eigenvalue prediction in this package is checked against direct dense
diagonalization of the assembled transfer matrix.  To keep that check
independent of any external linear-algebra eigensolver, the QR algorithm is
implemented here from scratch: balancing, Householder reduction to
Hessenberg form, and shifted QR iteration with deflation.

The gl(N) symmetry of closed chains (and the Cartan part that survives for
diagonal open boundaries) makes the transfer matrix block diagonal in the
total-weight basis; weight_sectors exposes that partition so large chains
diagonalize sector by sector.
"""

import itertools

import numpy as np

from .chain import transfer
from .tensor import commutator_norm  # noqa: F401  (re-exported oracle op)

_EPS = np.finfo(float).eps


class EigensolverError(RuntimeError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


# ---------------------------------------------------------------------------
# dense eigensolver

def _balance(a):
    """Diagonal similarity scaling (radix-2) to even out row/column norms."""
    a = a.copy()
    n = a.shape[0]
    radix = 2.0
    done = False
    while not done:
        done = True
        for i in range(n):
            c = np.abs(a[:, i]).sum() - abs(a[i, i])
            r = np.abs(a[i, :]).sum() - abs(a[i, i])
            if c < 1e-300 or r < 1e-300:
                continue
            f = 1.0
            s = c + r
            while c < r / radix:
                c *= radix
                r /= radix
                f *= radix
            while c >= r * radix:
                c /= radix
                r *= radix
                f /= radix
            if (c + r) < 0.95 * s:
                done = False
                a[:, i] *= f
                a[i, :] /= f
    return a


def _hessenberg(a):
    """Householder reduction; returns (H, Q) with Q H Q^* = a."""
    n = a.shape[0]
    H = a.astype(complex).copy()
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        nx = np.linalg.norm(x)
        if nx < 1e-300:
            continue
        alpha = -np.exp(1j * np.angle(x[0])) * nx if abs(x[0]) > 0 else -nx
        v = x.copy()
        v[0] -= alpha
        nv = np.linalg.norm(v)
        if nv < 1e-300:
            continue
        v /= nv
        # H <- P H P with P = I - 2 v v^*
        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
    for i in range(2, n):
        H[i, :i - 1] = 0.0
    return H, Q


def _wilkinson_shift(H, hi):
    """Eigenvalue of the trailing 2x2 block closest to H[hi, hi]."""
    a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
    c, d = H[hi, hi - 1], H[hi, hi]
    tr = a + d
    disc = np.sqrt((a - d) ** 2 / 4.0 + b * c + 0j)
    e1 = tr / 2.0 + disc
    e2 = tr / 2.0 - disc
    return e1 if abs(e1 - d) < abs(e2 - d) else e2


def _qr_step(H, lo, hi, sigma):
    """One explicit shifted QR sweep on the active block, via Givens
    rotations (applied across full rows/columns to keep the similarity
    consistent with the already-deflated parts)."""
    for i in range(lo, hi + 1):
        H[i, i] -= sigma
    rots = []
    for k in range(lo, hi):
        x, y = H[k, k], H[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        if r < 1e-300:
            rots.append((1.0 + 0j, 0.0 + 0j))
            continue
        c = x / r
        s = y / r
        rots.append((c, s))
        row_k = H[k, k:].copy()
        row_k1 = H[k + 1, k:].copy()
        H[k, k:] = c.conjugate() * row_k + s.conjugate() * row_k1
        H[k + 1, k:] = -s * row_k + c * row_k1
    for k in range(lo, hi):
        c, s = rots[k - lo]
        col_k = H[:k + 2, k].copy()
        col_k1 = H[:k + 2, k + 1].copy()
        H[:k + 2, k] = col_k * c + col_k1 * s
        H[:k + 2, k + 1] = -col_k * np.conjugate(s) + col_k1 * np.conjugate(c)
    for i in range(lo, hi + 1):
        H[i, i] += sigma


def eigenvalues_dense(m, report=False, max_sweeps_per_eig=30):
    """All eigenvalues of a complex square matrix.

    Balancing + Householder Hessenberg + single-shift QR with deflation and
    exceptional shifts.  With report=True also returns a dict carrying the
    Hessenberg backward error and the sweep count.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    n = a.shape[0]
    if n == 0:
        return (np.zeros(0, complex), {"backward_error": 0.0, "sweeps": 0}) \
            if report else np.zeros(0, complex)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    b = _balance(a)
    H, Q = _hessenberg(b)
    back_err = np.linalg.norm(Q @ H @ Q.conj().T - b) / max(1.0, np.linalg.norm(b))
    norm = np.linalg.norm(H) + 1e-300
    hi = n - 1
    sweeps = 0
    stagnant = 0
    budget = max_sweeps_per_eig * n
    while hi > 0:
        # deflate tiny subdiagonals
        for i in range(hi, 0, -1):
            if abs(H[i, i - 1]) <= 8 * _EPS * (abs(H[i - 1, i - 1]) + abs(H[i, i]) + 1e-3 * norm / n):
                H[i, i - 1] = 0.0
        if abs(H[hi, hi - 1]) == 0.0:
            hi -= 1
            stagnant = 0
            continue
        lo = hi
        while lo > 0 and abs(H[lo, lo - 1]) != 0.0:
            lo -= 1
        if sweeps >= budget:
            raise EigensolverError("QR did not converge in %d sweeps" % budget,
                                   partial=np.diag(H).copy())
        if stagnant > 0 and stagnant % 12 == 0:
            # exceptional shift, deterministic
            sigma = H[hi, hi] + 1.4 * abs(H[hi, hi - 1]) * (0.75 + 0.45j)
        else:
            sigma = _wilkinson_shift(H, hi)
        _qr_step(H, lo, hi, sigma)
        sweeps += 1
        stagnant += 1
        if abs(H[hi, hi - 1]) <= 8 * _EPS * (abs(H[hi - 1, hi - 1]) + abs(H[hi, hi]) + 1e-300):
            stagnant = 0
    vals = np.diag(H).copy()
    if report:
        return vals, {"backward_error": back_err, "sweeps": sweeps}
    return vals


# ---------------------------------------------------------------------------
# symmetry sectors

class SectorDecomposition:
    """Partition of product-basis indices by total Cartan weight."""

    def __init__(self, sectors, dim):
        self.sectors = sectors  # list of (weight tuple or None, index list)
        self.dim = dim

    def __iter__(self):
        return iter(self.sectors)

    def __len__(self):
        return len(self.sectors)

    def sizes(self):
        return [len(ix) for _, ix in self.sectors]

    def block(self, matrix, i):
        ix = np.asarray(self.sectors[i][1])
        return np.asarray(matrix)[np.ix_(ix, ix)]

    def off_block_residual(self, matrix):
        """Max |entry| of the matrix outside the sector blocks."""
        m = np.asarray(matrix).copy()
        for _, ix in self.sectors:
            ix = np.asarray(ix)
            m[np.ix_(ix, ix)] = 0.0
        return np.abs(m).max() if m.size else 0.0


def weight_sectors(spec):
    """Weight-space partition of the quantum space.

    Closed chains and diagonal open boundaries preserve the full Cartan
    weight; non-diagonal boundaries (U != identity, or SNP) fall back to a
    single full-space sector.
    """
    N = spec.rank
    dim = spec.quantum_dim
    bd = spec.boundary
    reducible = bd.kind == "closed" or (
        bd.kind == "open" and (bd.U is None or np.allclose(bd.U, np.eye(N))))
    if not reducible:
        return SectorDecomposition([(None, list(range(dim)))], dim)
    site_weights = []
    for s in spec.sites:
        d = s.irrep.dim
        w = np.zeros((d, N))
        for k in range(N):
            w[:, k] = np.real(np.diag(s.irrep.e(k, k)))
        site_weights.append(w)
    buckets = {}
    for idx, combo in enumerate(itertools.product(*[range(s.irrep.dim) for s in spec.sites])):
        w = np.zeros(N)
        for site, c in enumerate(combo):
            w += site_weights[site][c]
        key = tuple(int(round(x)) for x in w)
        buckets.setdefault(key, []).append(idx)
    sectors = [(k, buckets[k]) for k in sorted(buckets.keys(), reverse=True)]
    return SectorDecomposition(sectors, dim)


# ---------------------------------------------------------------------------
# spectra

class SpectrumSamples:
    """Sector-tagged eigenvalue branches over a list of sample points.

    branches[b, j] is eigenvalue branch b at lam_samples[j]; weights[b] is
    the sector label of branch b (None when no sector reduction applies).
    """

    def __init__(self, lams, branches, weights):
        self.lams = list(lams)
        self.branches = branches
        self.weights = weights

    def at(self, j):
        return self.branches[:, j]


def _cluster_values(vals, tol):
    """Collapse a list of eigenvalues into (representatives, multiplicities)."""
    reps, mult = [], []
    for v in vals:
        for i, r in enumerate(reps):
            if abs(v - r) <= tol:
                mult[i] += 1
                break
        else:
            reps.append(v)
            mult.append(1)
    return reps, mult


def _step_continue(prev, cur):
    """Nearest-cluster assignment of cur eigenvalues to prev branches.

    Returns (assigned, safe): safe is False when the largest jump is not
    well separated from the smallest gap between distinct cur eigenvalues,
    i.e. when the pairing could plausibly have swapped two branches.
    """
    scale = max(1.0, max(abs(v) for v in prev), max(abs(v) for v in cur))
    reps, mult = _cluster_values(list(cur), 1e-9 * scale)
    gaps = [abs(reps[i] - reps[j])
            for i in range(len(reps)) for j in range(i + 1, len(reps))]
    mingap = min(gaps) if gaps else np.inf
    out = np.zeros(len(prev), dtype=complex)
    cap = list(mult)
    maxd = 0.0
    order = sorted(range(len(prev)),
                   key=lambda b: min(abs(prev[b] - r) for r in reps))
    for b in order:
        cands = sorted(range(len(reps)), key=lambda i: abs(prev[b] - reps[i]))
        ci = next((i for i in cands if cap[i] > 0), cands[0])
        cap[ci] -= 1
        maxd = max(maxd, abs(prev[b] - reps[ci]))
        out[b] = reps[ci]
    return out, maxd <= 0.45 * mingap


def _refine_continue(eig_at, la, va, lb, depth=0):
    """Continue branch values va from la to lb, bisecting the segment until
    every nearest-neighbor step is unambiguous."""
    vb = eig_at(lb)
    out, safe = _step_continue(va, vb)
    if safe or depth >= 12 or abs(lb - la) < 1e-12:
        return out
    lm = 0.5 * (la + lb)
    vm = _refine_continue(eig_at, la, va, lm, depth + 1)
    return _refine_continue(eig_at, lm, vm, lb, depth + 1)


def spectrum(spec, lam_samples):
    """Oracle spectrum of the (normalized) transfer matrix at each sample.

    Eigenvalues are computed sector by sector with the in-house dense solver
    and aligned across samples by nearest-neighbor continuation along the
    segment between consecutive samples (with adaptive bisection where the
    pairing would otherwise be ambiguous), so a row of the result follows
    one analytic eigenvalue branch.
    """
    sectors = weight_sectors(spec)
    lams = list(lam_samples)
    cache = {}

    def tmat(lam):
        key = complex(lam)
        if key not in cache:
            cache[key] = transfer(spec, lam).data
        return cache[key]

    per_sector_branches = []
    weights = []
    for si, (wlabel, ix) in enumerate(sectors):
        def eig_at(lam, _si=si):
            return eigenvalues_dense(sectors.block(tmat(lam), _si))
        branches = np.zeros((len(ix), len(lams)), dtype=complex)
        branches[:, 0] = np.sort_complex(eig_at(lams[0]))
        for j in range(1, len(lams)):
            branches[:, j] = _refine_continue(
                eig_at, lams[j - 1], branches[:, j - 1], lams[j])
        per_sector_branches.append(branches)
        weights.extend([wlabel] * len(ix))
    allb = np.vstack(per_sector_branches) if per_sector_branches else \
        np.zeros((0, len(lams)), complex)
    return SpectrumSamples(lams, allb, weights)
