"""Close the loop: match eigenvalue-formula predictions against the
exact-diagonalization oracle, check analyticity of accepted solutions, and
tally completeness with symmetry multiplicities.

One Bethe root set predicts a single eigenvalue branch, but that branch
appears in the oracle spectrum with the full degeneracy of its symmetry
multiplet.  Matching therefore clusters degenerate oracle branches and lets
each solution claim a cluster with capacity equal to the Weyl dimension of
its Bethe weight (closed chains), or the product of the two block Weyl
dimensions for the gl(M) + gl(N-M) symmetry of diagonal open boundaries.
"""

import itertools

import numpy as np

from . import oracle
from .bethe import (BetheRootSet, PoleError, SolveStrategy, _bae_terms,
                    eigenvalue_formula, solve_bae)
from .chain import fundamental_chain
from .reps import drinfeld_polynomials


# ---------------------------------------------------------------------------
# weights and multiplicities

def counts_weight(spec, counts):
    """w_k = sum_n alpha_k^(n) - M_k + M_{k-1} (M_0 = M_N = 0)."""
    N = spec.rank
    alpha = np.zeros(N)
    for s in spec.sites:
        alpha += np.array(s.irrep.weight, dtype=float)
    M = list(counts) + [0] * (N - 1 - len(counts))
    w = []
    for k in range(1, N + 1):
        Mk = M[k - 1] if k <= N - 1 else 0
        Mk1 = M[k - 2] if k >= 2 else 0
        w.append(alpha[k - 1] - Mk + Mk1)
    return tuple(int(round(x)) for x in w)


def bethe_weight(spec, rootset):
    return counts_weight(spec, rootset.counts)


def counts_dominant(spec, counts):
    """Whether the Bethe weight of this root-count vector is (blockwise, for
    open boundaries) weakly decreasing."""
    w = counts_weight(spec, counts)
    if spec.boundary.kind == "open":
        M = spec.boundary.M
        return is_dominant(w[:M]) and is_dominant(w[M:])
    return is_dominant(w)


def weyl_dimension(w):
    """dim of the gl(N) irrep with dominant weight w (Weyl formula)."""
    n = len(w)
    num = den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= w[i] - w[j] + j - i
            den *= j - i
    return num // den


def is_dominant(w):
    return all(w[i] >= w[i + 1] for i in range(len(w) - 1))


def solution_multiplicity(spec, rootset):
    """(dominant?, multiplicity) for one Bethe solution."""
    w = bethe_weight(spec, rootset)
    if spec.boundary.kind == "open":
        M = spec.boundary.M
        wa, wb = w[:M], w[M:]
        if not (is_dominant(wa) and is_dominant(wb)):
            return w, False, 1
        return w, True, weyl_dimension(wa) * weyl_dimension(wb)
    if not is_dominant(w):
        return w, False, 1
    return w, True, weyl_dimension(w)


# ---------------------------------------------------------------------------
# spectrum matching

class SpectrumReport:
    def __init__(self, spec, lam_samples):
        self.spec = spec
        self.lam_samples = list(lam_samples)
        self.records = []
        self.clusters = []          # list of (representative values, size)
        self.unclaimed = []         # cluster indices with capacity left
        self.tally = 0
        self.total_dim = spec.quantum_dim
        self.warnings = []

    @property
    def complete(self):
        return self.tally == self.total_dim and not self.unclaimed

    def matched(self):
        return [r for r in self.records if r["matched"]]

    def to_dict(self):
        def c2p(z):
            return [float(np.real(z)), float(np.imag(z))]
        return {
            "lam_samples": [c2p(x) for x in self.lam_samples],
            "records": [{
                "counts": list(r["counts"]),
                "roots": [[c2p(x) for x in lvl] for lvl in r["rootset"].roots],
                "weight": list(r["weight"]),
                "dominant": r["dominant"],
                "multiplicity": r["multiplicity"],
                "singular": r["singular"],
                "matched": r["matched"],
                "cluster": r["cluster"],
                "mismatch": r["mismatch"],
                "values": [c2p(v) for v in r["values"]],
            } for r in self.records],
            "tally": self.tally,
            "total_dim": self.total_dim,
            "complete": self.complete,
            "unclaimed_clusters": self.unclaimed,
            "warnings": self.warnings,
        }


def _cluster_branches(branches, radius=1e-9):
    """Group degenerate oracle branches (rows of branches) together."""
    scale = max(1.0, np.abs(branches).max()) if branches.size else 1.0
    reps, sizes = [], []
    for b in range(branches.shape[0]):
        row = branches[b]
        for i, rep in enumerate(reps):
            if np.abs(row - rep).max() <= radius * scale:
                sizes[i] += 1
                break
        else:
            reps.append(row.copy())
            sizes.append(1)
    return reps, sizes


def match_spectrum(spec, solutions, lam_samples, tol_match=1e-8):
    """Assign each Bethe solution to the oracle eigenvalue cluster it
    reproduces, with multiplicity accounting; see module docstring."""
    samples = list(lam_samples)
    if len(samples) < 3:
        raise ValueError("need at least 3 sample points")
    formula = eigenvalue_formula(spec)
    for attempt in range(6):
        try:
            values = [np.array([formula(x, s) for x in samples]) for s in solutions]
            vac = np.array([formula(x) for x in samples])
            break
        except PoleError:
            if attempt == 5:
                raise
            samples = [x + 0.0173 + 0.0091j for x in samples]
    ss = oracle.spectrum(spec, samples)
    reps, sizes = _cluster_branches(ss.branches)
    scale = np.maximum(1.0, np.abs(ss.branches).max(axis=0)) if ss.branches.size \
        else np.ones(len(samples))

    report = SpectrumReport(spec, samples)
    report.clusters = [(rep, sz) for rep, sz in zip(reps, sizes)]
    remaining = list(sizes)

    records = []
    for sol, vals in zip(solutions, values):
        w, dom, mult = solution_multiplicity(spec, sol)
        mism = [np.max(np.abs(vals - rep) / scale) for rep in reps]
        records.append({
            "rootset": sol, "counts": sol.counts, "weight": w,
            "dominant": dom, "multiplicity": mult,
            "singular": getattr(sol, "singular", False),
            "values": vals, "mismatch_all": mism,
            "matched": False, "cluster": None, "mismatch": None,
        })
    # greedy, best matches first, deterministic
    order = sorted(range(len(records)),
                   key=lambda i: min(records[i]["mismatch_all"], default=np.inf))
    for i in order:
        r = records[i]
        if not r["mismatch_all"]:
            continue
        ci = int(np.argmin(r["mismatch_all"]))
        best = r["mismatch_all"][ci]
        r["mismatch"] = best
        if best >= tol_match:
            continue
        if remaining[ci] < r["multiplicity"]:
            if remaining[ci] <= 0:
                continue
            report.warnings.append(
                "degenerate parameters: cluster %d capacity %d < multiplicity %d"
                % (ci, remaining[ci], r["multiplicity"]))
        r["matched"] = True
        r["cluster"] = ci
        remaining[ci] -= r["multiplicity"]
    for r in records:
        r.pop("mismatch_all")
        if r["matched"] and r["dominant"]:
            report.tally += r["multiplicity"]
    report.records = records
    report.unclaimed = [i for i, c in enumerate(remaining) if c > 0]
    # sanity: the pseudo-vacuum branch must be present in the oracle spectrum
    if reps and min(np.max(np.abs(vac - rep) / scale) for rep in reps) > tol_match:
        report.warnings.append("pseudo-vacuum branch missing from oracle spectrum")
    return report


# ---------------------------------------------------------------------------
# analyticity / residue checks

def residue_check(spec, solution, direction=np.exp(0.3j)):
    """Residue magnitudes of Lambda at every dressing pole candidate.

    For each root x at level k the candidate pole is lam* = x - ik/2 (and
    its mirror -x - ik/2 for boundary chains).  (lam - lam*) Lambda(lam) is
    evaluated on a shrinking approach lam* + r u, r in {1e-2, 1e-3, 1e-4},
    and Richardson-extrapolated to r = 0.
    """
    formula = eigenvalue_formula(spec)
    doubled = spec.boundary.kind in ("open", "snp")
    out = []
    for k in range(1, spec.rank):
        for x in solution.level(k):
            poles = [x - 0.5j * k]
            if doubled:
                poles.append(-x - 0.5j * k)
            for p in poles:
                radii = (1e-2, 1e-3, 1e-4)
                # averaging the two opposite approach directions cancels the
                # odd orders of g(r) = (lam - lam*) Lambda(lam), leaving
                # R + c2 r^2 + c4 r^4 + ...; extrapolate to 0 in r^2
                g = [0.5 * ((r * direction) * formula(p + r * direction, solution)
                            - (r * direction) * formula(p - r * direction, solution))
                     for r in radii]
                sq = [r * r for r in radii]
                R = sum(
                    gi * np.prod([sj for j, sj in enumerate(sq) if j != i])
                    / np.prod([si - sj for j, sj in enumerate(sq) if j != i])
                    for i, (gi, si) in enumerate(zip(g, sq)))
                out.append((p, abs(R)))
    return out


def residue_scale(spec, solution, samples):
    formula = eigenvalue_formula(spec)
    return max(abs(formula(x, solution)) for x in samples)


# ---------------------------------------------------------------------------
# completeness

class CompletenessTally:
    def __init__(self, entries, total_dim):
        self.entries = entries
        self.total_dim = total_dim
        self.tally = sum(e["multiplicity"] for e in entries if e["dominant"])
        self.non_dominant = [e for e in entries if not e["dominant"]]
        self.complete = self.tally == total_dim

    def __repr__(self):
        return "CompletenessTally(%d/%d)" % (self.tally, self.total_dim)


def completeness_report(spec, solutions):
    entries = []
    for sol in solutions:
        w, dom, mult = solution_multiplicity(spec, sol)
        entries.append({"rootset": sol, "weight": w, "dominant": dom,
                        "multiplicity": mult if dom else 0,
                        "singular": getattr(sol, "singular", False)})
        if not dom:
            entries[-1]["multiplicity"] = 0
    # report dominant multiplicity even for excluded entries, for diagnostics
    for e in entries:
        if not e["dominant"]:
            e["flag"] = "non-highest-weight candidate"
    return CompletenessTally(entries, spec.quantum_dim)


# ---------------------------------------------------------------------------
# M-vector sweep

def cartan_bound(spec):
    """Max total lowering depth sum_k (N-k) M_k of the quantum space."""
    N = spec.rank
    b = 0
    for s in spec.sites:
        b += sum((N - k) * s.irrep.weight[k - 1] for k in range(1, N + 1))
    return b


def m_vectors(spec):
    """All root-count vectors M with sum_k (N-k) M_k <= the Cartan bound."""
    N = spec.rank
    bound = cartan_bound(spec)
    ranges = [range(bound // (N - k) + 1) for k in range(1, N)]
    out = []
    for combo in itertools.product(*ranges):
        if sum((N - k) * combo[k - 1] for k in range(1, N)) <= bound:
            out.append(combo)
    return sorted(out)


# ---------------------------------------------------------------------------
# regularized singular strings (closed homogeneous fundamental chains)

def _pinned_string_solutions(spec, counts, strategy):
    """Exact singular-string configurations: a level-k pair pinned at
    {i(k-2)/2, ik/2} makes its own two cleared equations vacuous; the
    remaining roots still have to solve theirs.  Only defined for closed
    homogeneous fundamental chains (where those pins are exact)."""
    if spec.boundary.kind != "closed":
        return []
    if any(abs(complex(s.a)) > 1e-12 or s.irrep.dim != spec.rank
           for s in spec.sites):
        return []
    found = []
    for k in range(1, spec.rank):
        if counts[k - 1] < 2:
            continue
        pin = [0.5j * (k - 2), 0.5j * k]
        reduced = list(counts)
        reduced[k - 1] -= 2
        if sum(reduced) == 0:
            cand = [[ ] for _ in counts]
            cand[k - 1] = pin
            rs = BetheRootSet(cand, residual_norm=0.0, singular=True)
            if _vacuous_ok(spec, rs):
                found.append(rs)
            continue
        # solve the remaining roots' equations with the pair held fixed
        for free in solve_bae("closed", _drop_pin_spec(spec), tuple(reduced),
                              strategy):
            cand = [list(l) for l in free.roots]
            cand[k - 1] = cand[k - 1] + pin
            rs = BetheRootSet(cand, singular=True)
            if _vacuous_ok(spec, rs):
                rs.residual_norm = 0.0
                found.append(rs)
    return found


def _drop_pin_spec(spec):
    # the reduced solve is only used as a seed generator; exact handling of
    # the pinned pair's back-reaction is checked by _vacuous_ok afterwards
    return spec


def _vacuous_ok(spec, rootset, tol=1e-8):
    """All cleared equations hold: either both sides vanish (the pinned
    pair) or the difference is small (the rest)."""
    for a, b in _bae_terms(spec, rootset):
        if max(abs(a), abs(b)) < tol:
            continue
        if abs(a - b) / (abs(a) + abs(b)) > tol:
            return False
    return True


def sweep_solutions(spec, strategy=None):
    """Solve the BAE over every admissible M-vector; returns (solutions,
    swept M-vectors).  Regular solutions come from the damped-Newton search;
    exact singular-string configurations are appended (flagged) where the
    chain supports them."""
    strategy = strategy or SolveStrategy()
    kind = spec.boundary.kind
    sols = []
    swept = []
    for counts in m_vectors(spec):
        if sum(counts) > strategy.max_roots:
            continue
        if not counts_dominant(spec, counts):
            # non-highest-weight candidate sector: its eigenvalues are
            # already produced by a dominant sector, and its Bethe system
            # degenerates into continuum families; excluded from the sweep
            swept.append((counts, "non-highest-weight candidate"))
            continue
        swept.append((counts, "swept"))
        if sum(counts) == 0:
            sols.append(BetheRootSet([[] for _ in counts], residual_norm=0.0))
            continue
        for s in solve_bae(kind, spec, counts, strategy):
            if not s.singular:
                sols.append(s)
        for s in _pinned_string_solutions(spec, counts, strategy):
            sols.append(s)
    return sols, swept
