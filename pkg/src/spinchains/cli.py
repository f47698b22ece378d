"""Command-line front end: parse a chain configuration, run one of the
workbench pipelines, and persist a single structured result document.

Commands: spectrum, solve-bae, verify, hamiltonian, identities.
Exit codes: 0 success, 1 computation failure or failed hard check,
2 configuration error.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import oracle, verify
from .bethe import (SolveStrategy, empty_rootset, eigenvalue_formula,
                    pseudo_vacuum_eigenvalue, solve_bae)
from .chain import (BoundaryDescriptor, ChainSpec, hamiltonian, transfer,
                    unitarity_residual, yang_baxter_residual)
from .identities import (max_abs, reflection_residual, rtt_residual,
                         twisted_residual)
from .rational import grat
from .reps import SiteSpec, make_irrep
from .tensor import commutator_norm

SCHEMA = "spinchain-workbench/1"
DIM_CAP = 4096


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config parsing

def _cx(v, where):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and \
            all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError("%s: expected a number or [re, im] pair, got %r" % (where, v))


def _cx_out(z):
    z = complex(z)
    return [z.real, z.imag]


def _site_from(doc, rank, where):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError("%s: site must be {kind, param?, a?}" % where)
    kind = doc["kind"]
    irr = make_irrep(rank, kind, doc.get("param"))
    a = _cx(doc.get("a", 0.0), where + ".a")
    return SiteSpec(irr, a)


def _boundary_from(doc, rank):
    if doc is None:
        return BoundaryDescriptor.closed()
    kind = doc.get("kind", "closed")
    if kind == "closed":
        return BoundaryDescriptor.closed()
    if kind == "open":
        M = doc.get("M")
        if not isinstance(M, int) or not 1 <= M <= rank - 1:
            raise ConfigError("M out of range 1..N-1")
        xi = _cx(doc.get("xi", 1.0), "boundary.xi")
        U = doc.get("U")
        if U is not None:
            U = np.array([[_cx(v, "boundary.U") for v in row] for row in U])
        return BoundaryDescriptor.open(M, xi, U)
    if kind == "snp":
        Ktil = doc.get("Ktil")
        if Ktil is not None:
            Ktil = np.array([[_cx(v, "boundary.Ktil") for v in row]
                             for row in Ktil])
        return BoundaryDescriptor.snp(Ktil)
    raise ConfigError("unknown boundary kind %r" % (kind,))


def parse_chain(doc):
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    chain = doc.get("chain")
    if not isinstance(chain, dict):
        raise ConfigError("missing 'chain' section")
    rank = chain.get("rank")
    if not isinstance(rank, int) or rank < 2:
        raise ConfigError("chain.rank must be an integer >= 2")
    if "sites" in chain:
        sites = [_site_from(s, rank, "chain.sites[%d]" % i)
                 for i, s in enumerate(chain["sites"])]
    elif "site" in chain and "ell" in chain:
        ell = chain["ell"]
        if not isinstance(ell, int) or ell < 1:
            raise ConfigError("chain.ell must be an integer >= 1")
        sites = [_site_from(chain["site"], rank, "chain.site") for _ in range(ell)]
    else:
        raise ConfigError("chain needs 'sites' or ('site', 'ell')")
    boundary = _boundary_from(chain.get("boundary"), rank)
    try:
        spec = ChainSpec(rank, sites, boundary)
    except ValueError as e:
        raise ConfigError(str(e))
    if spec.quantum_dim > DIM_CAP:
        raise ConfigError("quantum dimension %d exceeds cap %d"
                          % (spec.quantum_dim, DIM_CAP))
    return spec


def default_samples(n):
    return [0.37 + 0.11j + j * (0.29 - 0.13j) for j in range(n)]


def parse_run(doc, args):
    spec = parse_chain(doc)
    nsamp = args.samples or doc.get("samples_count", 5)
    if not isinstance(nsamp, int) or nsamp < 3:
        raise ConfigError("sample count must be an integer >= 3")
    if "samples" in doc:
        samples = [_cx(v, "samples") for v in doc["samples"]]
        if len(samples) < 3:
            raise ConfigError("need at least 3 sample points")
    else:
        samples = default_samples(nsamp)
    sconf = doc.get("solver", {})
    strategy = SolveStrategy(
        restarts=int(sconf.get("restarts", 200)),
        spread=float(sconf.get("spread", 1.5)),
        tol_solve=float(sconf.get("tol_solve", 1e-11)),
        max_iter=int(sconf.get("max_iter", 80)),
        seed=int(args.seed if args.seed is not None else sconf.get("seed", 0)),
        max_roots=int(sconf.get("max_roots", 8)),
    )
    for name in ("tol_solve",):
        if getattr(strategy, name) <= 0:
            raise ConfigError("solver.%s must be positive" % name)
    tol = args.tol if args.tol is not None else doc.get("tol", None)
    if tol is not None and tol <= 0:
        raise ConfigError("tol must be positive")
    counts = doc.get("counts")
    if counts is not None:
        counts = [tuple(c) for c in counts] if counts and \
            isinstance(counts[0], list) else [tuple(counts)]
        for c in counts:
            if len(c) != spec.rank - 1 or any(not isinstance(x, int) or x < 0
                                              for x in c):
                raise ConfigError("counts entries must be %d non-negative"
                                  " integers" % (spec.rank - 1))
    return spec, samples, strategy, tol, counts


# ---------------------------------------------------------------------------
# commands

def _rootset_doc(s):
    return {
        "counts": list(s.counts),
        "roots": [[_cx_out(x) for x in lvl] for lvl in s.roots],
        "residual_norm": s.residual_norm,
        "singular": s.singular,
    }


def cmd_spectrum(spec, samples, strategy, tol, counts, args):
    ss = oracle.spectrum(spec, samples)
    results = {
        "samples": [_cx_out(x) for x in ss.lams],
        "branches": [[_cx_out(v) for v in row] for row in ss.branches],
        "sector_weights": [list(w) if w is not None else None
                           for w in ss.weights],
    }
    return results, False


def cmd_solve_bae(spec, samples, strategy, tol, counts, args):
    if args.sweep_M:
        sols, swept = verify.sweep_solutions(spec, strategy)
        results = {"swept": [{"counts": list(c), "status": st}
                             for c, st in swept]}
    elif counts:
        sols = []
        for c in counts:
            sols += solve_bae(spec.boundary.kind, spec, c, strategy)
        results = {}
    else:
        raise ConfigError("solve-bae needs 'counts' or --sweep-M")
    results["solutions"] = [_rootset_doc(s) for s in sols]
    return results, False


def cmd_verify(spec, samples, strategy, tol, counts, args):
    tol_match = tol if tol is not None else 1e-8
    if args.sweep_M or counts is None:
        sols, swept = verify.sweep_solutions(spec, strategy)
    else:
        swept = [(c, "swept") for c in counts]
        sols = [empty_rootset(spec.rank)]
        for c in counts:
            if sum(c):
                sols += [s for s in solve_bae(spec.boundary.kind, spec, c,
                                              strategy) if not s.singular]
    report = verify.match_spectrum(spec, sols, samples, tol_match=tol_match)
    matched = [r["rootset"] for r in report.matched()]
    tally = verify.completeness_report(spec, matched)
    residues = []
    residues_ok = True
    for s in matched:
        if not sum(s.counts):
            continue
        scale = verify.residue_scale(spec, s, samples)
        checks = verify.residue_check(spec, s)
        worst = max((m for _, m in checks), default=0.0)
        ok = worst < 1e-8 * scale
        residues_ok = residues_ok and ok
        residues.append({"counts": list(s.counts),
                         "poles": [_cx_out(p) for p, _ in checks],
                         "magnitudes": [m for _, m in checks],
                         "scale": scale, "ok": ok})
    results = {
        "report": report.to_dict(),
        "swept": [{"counts": list(c), "status": st} for c, st in swept],
        "completeness": {"tally": tally.tally, "total_dim": tally.total_dim,
                         "complete": tally.complete},
        "residue_checks": residues,
    }
    failed = not (report.complete and residues_ok)
    return results, failed


def cmd_hamiltonian(spec, samples, strategy, tol, counts, args):
    H = hamiltonian(spec)
    Hm = H.data if hasattr(H, "data") else np.asarray(H)
    evs = oracle.eigenvalues_dense(Hm)
    results = {
        "matrix": [[_cx_out(v) for v in row] for row in Hm],
        "spectrum": sorted([_cx_out(v) for v in evs]),
    }
    return results, False


def cmd_identities(spec, samples, strategy, tol, counts, args):
    hard_tol = tol if tol is not None else 1e-10
    N = spec.rank
    exact = args.exact
    if exact:
        la = grat(Fraction(1, 3), Fraction(2, 7))
        mu = grat(Fraction(-1, 2), Fraction(1, 5))
    else:
        la, mu = 0.31 + 0.17j, -0.53 + 0.29j
    table = {}
    table["yang_baxter"] = max_abs(yang_baxter_residual(N, la, mu, exact=exact))
    table["unitarity"] = max_abs(unitarity_residual(N, la, exact=exact))
    kind = spec.boundary.kind
    if kind == "closed":
        table["rtt"] = max_abs(rtt_residual(spec, la, mu, exact=exact))
    elif kind == "open":
        table["reflection"] = max_abs(reflection_residual(spec, la, mu,
                                                          exact=exact))
    else:
        table["twisted_exchange"] = max_abs(twisted_residual(spec, la, mu,
                                                             exact=exact))
    ta = transfer(spec, 0.41 + 0.23j)
    tb = transfer(spec, -0.67 + 0.19j)
    table["commutativity"] = commutator_norm(ta, tb)
    results = {"residuals": table, "exact": bool(exact)}
    failed = any(v > hard_tol for v in table.values())
    return results, failed


COMMANDS = {
    "spectrum": cmd_spectrum,
    "solve-bae": cmd_solve_bae,
    "verify": cmd_verify,
    "hamiltonian": cmd_hamiltonian,
    "identities": cmd_identities,
}


# ---------------------------------------------------------------------------
# entry point

def _json_default(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return _cx_out(o)
    raise TypeError("not serializable: %r" % (o,))


def _emit(doc, out_path):
    text = json.dumps(doc, indent=2, sort_keys=True, default=_json_default)
    if out_path:
        with open(out_path, "w") as f:
            f.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _write_csv(path, results):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["lam_re", "lam_im", "branch", "value_re", "value_im"])
        for b, row in enumerate(results["branches"]):
            for (lr, li), (vr, vi) in zip(results["samples"], row):
                w.writerow([repr(lr), repr(li), b, repr(vr), repr(vi)])


def run(command, config, args):
    spec, samples, strategy, tol, counts = parse_run(config, args)
    results, failed = COMMANDS[command](spec, samples, strategy, tol,
                                        counts, args)
    return results, failed


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="spinchains",
        description="gl(N) spin-chain workbench: transfer-matrix spectra, "
                    "Bethe equations, and verification against exact "
                    "diagonalization")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="write the result document here")
    ap.add_argument("--csv", help="also write (sample, branch) CSV (spectrum)")
    ap.add_argument("--seed", type=int, help="solver seed override")
    ap.add_argument("--samples", type=int, help="number of default samples")
    ap.add_argument("--tol", type=float, help="hard-check tolerance override")
    ap.add_argument("--exact", action="store_true",
                    help="rational arithmetic for identity checks")
    ap.add_argument("--sweep-M", dest="sweep_M", action="store_true",
                    help="enumerate all admissible root-count vectors")
    args = ap.parse_args(argv)

    doc = {"schema": SCHEMA, "command": args.command, "status": "ok"}
    try:
        with open(args.config) as f:
            config = json.load(f)
        doc["config"] = config
        results, failed = run(args.command, config, args)
    except (ConfigError, OSError, json.JSONDecodeError) as e:
        doc["status"] = "config-error"
        doc["error"] = {"type": type(e).__name__, "message": str(e)}
        _emit(doc, args.out)
        return 2
    except Exception as e:
        doc["status"] = "computation-error"
        doc["error"] = {"type": type(e).__name__, "message": str(e)}
        _emit(doc, args.out)
        return 1
    doc["results"] = results
    if failed:
        doc["status"] = "failed"
    _emit(doc, args.out)
    if args.csv and "branches" in results:
        _write_csv(args.csv, results)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
