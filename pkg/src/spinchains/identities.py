"""Structural identity residuals: RTT, reflection, twisted exchange.

These are brute-force evaluations of both sides of the defining exchange
relations on two auxiliary copies tensored with the quantum space.  They run
in floating point for any supported representation and in exact Gaussian
rational arithmetic for fundamental sites at rational sample points.

All three relations close with the braiding R-form Rhat(u) = u*I + i*P
(= -r_matrix(-u)); this sign convention is part of the package-wide
normalization and is asserted by the test suite.
"""

import numpy as np

from .chain import monodromy, boundary_monodromy, permutation, k_matrix
from .reps import evaluation_L
from .tensor import embed


def _chain_product(factors, exact):
    """Left-to-right product, using the zero-skipping exact kernel when
    working over Gaussian rationals."""
    if exact:
        from .rational import gdot
        out = factors[0]
        for f in factors[1:]:
            out = gdot(out, f)
        return out
    out = factors[0]
    for f in factors[1:]:
        out = out @ f
    return out


def _eye(n, exact):
    if exact:
        from .rational import geye
        return np.asarray(geye(n))
    return np.eye(n, dtype=complex)


def _rhat(N, u, exact):
    if exact:
        from .rational import _coerce, grat
        return _eye(N * N, True) * _coerce(u) + np.asarray(permutation(N, True)) * grat(0, 1)
    return u * np.eye(N * N, dtype=complex) + 1j * permutation(N)


def _monodromy_any(spec, lam, exact):
    """Full monodromy; exact mode supports fundamental sites only."""
    if not exact:
        return monodromy(spec, lam).data
    from .rational import _coerce, grat
    N = spec.rank
    legs = spec.all_legs()
    dim = N * spec.quantum_dim
    T = _eye(dim, True)
    for n, site in enumerate(spec.sites):
        if site.irrep.dim != N:
            raise ValueError("exact mode supports fundamental sites only")
        L = _eye(N * N, True) * (_coerce(lam) + _coerce(complex(site.a))) \
            + np.asarray(permutation(N, True)) * grat(0, 1)
        T = _chain_product([T, embed(L, [0, n + 1], legs)], True)
    return T


def _two_aux_legs(spec):
    return [("a1", spec.rank), ("a2", spec.rank)] + spec.quantum_legs()


def rtt_residual(spec, lam, mu, exact=False):
    """Rhat(lam-mu) T1(lam) T2(mu) - T2(mu) T1(lam) Rhat(lam-mu)."""
    N = spec.rank
    legs = _two_aux_legs(spec)
    q = list(range(2, 2 + spec.ell))
    if exact:
        from .rational import _coerce
        lam, mu = _coerce(lam), _coerce(mu)
    T1 = embed_monodromy(spec, lam, 0, legs, exact)
    T2 = embed_monodromy(spec, mu, 1, legs, exact)
    R = embed(_rhat(N, lam - mu, exact), [0, 1], legs)
    return _chain_product([R, T1, T2], exact) - _chain_product([T2, T1, R], exact)


def embed_monodromy(spec, lam, aux_slot, legs, exact=False):
    """Monodromy with its auxiliary leg placed at one of two aux slots."""
    T = _monodromy_any(spec, lam, exact)
    where = [aux_slot] + list(range(2, 2 + spec.ell))
    return embed(T, where, legs)


def _boundary_numerator_any(spec, lam, exact):
    if not exact:
        B, _ = boundary_monodromy(spec, lam)
        return B.data
    from .rational import _coerce, grat, gzeros
    N = spec.rank
    legs = spec.all_legs()
    lam = _coerce(lam)
    T = _monodromy_any(spec, lam, True)
    # K(lam) = diag(lam + xi (M times), -lam + xi); U must be identity in exact mode
    bd = spec.boundary
    if bd.U is not None:
        raise ValueError("exact mode needs diagonal K")
    K = gzeros(N)
    xi = _coerce(complex(bd.xi))
    for k in range(N):
        K[k, k] = (lam + xi) if k < bd.M else (xi - lam)
    Kbig = embed(np.asarray(K), [0], legs)
    dim = N * spec.quantum_dim
    Mrev = _eye(dim, True)
    for n in reversed(range(spec.ell)):
        a = _coerce(complex(spec.sites[n].a))
        L = _eye(N * N, True) * (lam - a) + np.asarray(permutation(N, True)) * grat(0, 1)
        Mrev = _chain_product([Mrev, embed(L, [0, n + 1], legs)], True)
    return _chain_product([T, Kbig, Mrev], True)


def reflection_residual(spec, lam, mu, exact=False):
    """Reflection equation residual for the open boundary monodromy:

    Rhat(l-m) B1(l) Rhat(l+m) B2(m) - B2(m) Rhat(l+m) B1(l) Rhat(l-m),
    evaluated on the adj-normalized numerators (the scalar denominators are
    common to both sides and cancel).
    """
    N = spec.rank
    legs = _two_aux_legs(spec)
    if exact:
        from .rational import _coerce
        lam, mu = _coerce(lam), _coerce(mu)
    q = list(range(2, 2 + spec.ell))
    B1 = embed(_boundary_numerator_any(spec, lam, exact), [0] + q, legs)
    B2 = embed(_boundary_numerator_any(spec, mu, exact), [1] + q, legs)
    Rm = embed(_rhat(N, lam - mu, exact), [0, 1], legs)
    Rp = embed(_rhat(N, lam + mu, exact), [0, 1], legs)
    return (_chain_product([Rm, B1, Rp, B2], exact)
            - _chain_product([B2, Rp, B1, Rm], exact))


def _transpose_first(m, N):
    """Partial transpose on the first C^N factor of an N^2 x N^2 matrix."""
    t = m.reshape(N, N, N, N)
    return np.transpose(t, (2, 1, 0, 3)).reshape(N * N, N * N)


def twisted_residual(spec, la, lb, exact=False):
    """Twisted exchange relation residual for the SNP monodromy:

    Rhat(la-lb) Sa Rhat^{t_a}(-la-lb+i rho) Sb
      - Sb Rhat^{t_a}(-la-lb+i rho) Sa Rhat_{ba}(la-lb),  rho = -N/2.
    """
    N = spec.rank
    legs = _two_aux_legs(spec)
    q = list(range(2, 2 + spec.ell))
    if exact:
        from .rational import _coerce, grat
        la, lb = _coerce(la), _coerce(lb)
        shift = grat(0, 1) * _coerce(complex(-N / 2.0))
    else:
        shift = 1j * (-N / 2.0)
    Sa = embed(_snp_numerator_any(spec, la, exact), [0] + q, legs)
    Sb = embed(_snp_numerator_any(spec, lb, exact), [1] + q, legs)
    R = embed(_rhat(N, la - lb, exact), [0, 1], legs)
    Rt = embed(_transpose_first(_rhat(N, -la - lb + shift, exact), N), [0, 1], legs)
    P = permutation(N, exact)
    Rba = embed(P @ _rhat(N, la - lb, exact) @ P, [0, 1], legs)
    return (_chain_product([R, Sa, Rt, Sb], exact)
            - _chain_product([Sb, Rt, Sa, Rba], exact))


def _snp_numerator_any(spec, lam, exact):
    if not exact:
        S, _ = boundary_monodromy(spec, lam)
        return S.data
    from .rational import _coerce, grat
    N = spec.rank
    legs = spec.all_legs()
    lam = _coerce(lam)
    shift = grat(0, 1) * _coerce(complex(-N / 2.0))
    T = _monodromy_any(spec, lam, True)
    T2 = _monodromy_any(spec, -lam + shift, True)
    dim = N * spec.quantum_dim
    d = spec.quantum_dim
    T2 = T2.reshape(N, d, N, d).transpose(2, 1, 0, 3).reshape(dim, dim)
    Kt = np.empty((N, N), dtype=object)
    for i in range(N):
        for j in range(N):
            Kt[i, j] = _coerce(complex(spec.boundary.Ktil[i, j]))
    return _chain_product([T, embed(Kt, [0], legs), T2], True)


def max_abs(m):
    """Max |entry|, usable for float and exact matrices."""
    return max(abs(x) for x in np.asarray(m).flat)


def is_exactly_zero(m):
    from .rational import GaussianRational
    return all((x.is_zero() if isinstance(x, GaussianRational) else x == 0)
               for x in np.asarray(m).flat)
