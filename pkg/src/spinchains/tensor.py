"""Dense operators with tensor-leg bookkeeping.

Everything in this package acts on tensor products of small complex vector
spaces (one auxiliary leg plus one leg per chain site).  An OperatorMatrix is
a dense square matrix together with the ordered list of leg labels and
dimensions, so that partial traces, partial transposes and leg embeddings can
be written once and reused by every module.

The data dtype is not constrained: float/complex arrays are used for numerics
and object arrays of Gaussian rationals for the exact arithmetic mode.
"""

import numpy as np


class OperatorMatrix:
    """Square matrix on an ordered tensor product of legs.

    legs is a list of (label, dimension) pairs; the row/column index is the
    mixed-radix number built from the per-leg indices in leg order.
    """

    def __init__(self, data, legs):
        data = np.asarray(data)
        dims = [d for _, d in legs]
        total = 1
        for d in dims:
            total *= d
        if data.shape != (total, total):
            raise ValueError("data shape %s does not match legs %s" % (data.shape, legs))
        self.data = data
        self.legs = list(legs)

    @property
    def dims(self):
        return [d for _, d in self.legs]

    def tensor(self):
        """View as a 2*len(legs)-index array (out indices first, then in)."""
        return self.data.reshape(self.dims + self.dims)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.data @ other.data, self.legs)
        return self.data @ other

    def __add__(self, other):
        o = other.data if isinstance(other, OperatorMatrix) else other
        return OperatorMatrix(self.data + o, self.legs)

    def __sub__(self, other):
        o = other.data if isinstance(other, OperatorMatrix) else other
        return OperatorMatrix(self.data - o, self.legs)

    def __mul__(self, scalar):
        return OperatorMatrix(self.data * scalar, self.legs)

    __rmul__ = __mul__

    def partial_trace(self, leg):
        """Trace out one leg, returning the operator on the remaining legs."""
        n = len(self.legs)
        t = self.tensor()
        # move the traced leg's out and in indices last and contract
        out_axes = [i for i in range(n) if i != leg] + [leg]
        in_axes = [n + i for i in range(n) if i != leg] + [n + leg]
        t = np.transpose(t, out_axes + in_axes)
        d = self.legs[leg][1]
        rest = 1
        for i, (_, dd) in enumerate(self.legs):
            if i != leg:
                rest *= dd
        t = t.reshape(rest, d, rest, d)
        traced = np.trace(t, axis1=1, axis2=3)
        new_legs = [lg for i, lg in enumerate(self.legs) if i != leg]
        return OperatorMatrix(traced, new_legs)

    def partial_transpose(self, leg):
        """Transpose a single leg (swap its out and in indices)."""
        n = len(self.legs)
        t = self.tensor()
        perm = list(range(2 * n))
        perm[leg], perm[n + leg] = perm[n + leg], perm[leg]
        t = np.transpose(t, perm)
        total = self.data.shape[0]
        return OperatorMatrix(t.reshape(total, total), self.legs)

    def group(self, split):
        """Reshape to a 4-index array (A_out, B_out, A_in, B_in) where A is
        the first `split` legs and B the rest."""
        da = 1
        for _, d in self.legs[:split]:
            da *= d
        db = self.data.shape[0] // da
        return self.data.reshape(da, db, da, db)


def identity_like(dtype, n):
    if dtype == object:
        from .rational import grat
        m = np.zeros((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                m[i, j] = grat(1 if i == j else 0)
        return m
    return np.eye(n, dtype=complex)


def embed(op, where, total_legs):
    """Embed an operator acting on the legs listed in `where` (in that order)
    into the full product space described by total_legs.

    op is a dense matrix whose row index runs over the `where` legs in order.
    Returns a dense matrix on the full space.
    """
    n = len(total_legs)
    dims = [d for _, d in total_legs]
    dtype = op.dtype
    rest = [i for i in range(n) if i not in where]
    rest_dim = 1
    for i in rest:
        rest_dim *= dims[i]
    big = np.kron(op, identity_like(dtype, rest_dim))
    # big acts with leg order where + rest; permute to natural order
    order = list(where) + rest
    # tensor indices of big follow `order`; build the axis permutation taking
    # them back to 0..n-1
    shaped = big.reshape([dims[i] for i in order] * 2)
    inv = [order.index(i) for i in range(n)]
    perm = inv + [n + i for i in inv]
    total = 1
    for d in dims:
        total *= d
    return np.transpose(shaped, perm).reshape(total, total)


def commutator_norm(a, b):
    """Max-norm of AB - BA."""
    am = a.data if isinstance(a, OperatorMatrix) else np.asarray(a)
    bm = b.data if isinstance(b, OperatorMatrix) else np.asarray(b)
    if am.shape != bm.shape:
        raise ValueError("shape mismatch %s vs %s" % (am.shape, bm.shape))
    return float(np.max(np.abs(am @ bm - bm @ am)))
