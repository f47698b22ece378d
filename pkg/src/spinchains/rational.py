"""Exact Gaussian-rational arithmetic.

Structural identities (Yang-Baxter, unitarity, RTT, reflection, twisted
exchange) are algebraic statements about matrices whose entries are linear in
the spectral parameters.  Evaluating them at rational sample points in exact
arithmetic removes floating-point tolerances from the discussion entirely.

A GaussianRational is (a + b*i)/d with a, b, d Python integers (d > 0).
Keeping a common integer denominator per number and reducing lazily makes
matrix products pure bignum-integer arithmetic, which is fast enough to run
the full exact identity suite in seconds.  numpy object arrays of these
support @, so the same matrix code runs in exact and floating mode.
"""

from fractions import Fraction
from math import gcd

import numpy as np

_REDUCE_BITS = 256  # reduce by gcd once the denominator gets this large


class GaussianRational:
    __slots__ = ("a", "b", "d")

    def __init__(self, re=0, im=0):
        if isinstance(re, Fraction) or isinstance(im, Fraction):
            fre, fim = Fraction(re), Fraction(im)
            d = fre.denominator * fim.denominator // gcd(fre.denominator, fim.denominator)
            self.a = fre.numerator * (d // fre.denominator)
            self.b = fim.numerator * (d // fim.denominator)
            self.d = d
        else:
            self.a = int(re)
            self.b = int(im)
            self.d = 1

    @classmethod
    def _raw(cls, a, b, d):
        self = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        if d.bit_length() > _REDUCE_BITS:
            g = gcd(gcd(abs(a), abs(b)), d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        self.a, self.b, self.d = a, b, d
        return self

    def __add__(self, other):
        other = _coerce(other)
        return GaussianRational._raw(self.a * other.d + other.a * self.d,
                                     self.b * other.d + other.b * self.d,
                                     self.d * other.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianRational._raw(self.a * other.d - other.a * self.d,
                                     self.b * other.d - other.b * self.d,
                                     self.d * other.d)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianRational._raw(self.a * other.a - self.b * other.b,
                                     self.a * other.b + self.b * other.a,
                                     self.d * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        n2 = other.a * other.a + other.b * other.b
        if n2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        # (a+bi)/d * d' (c-ei) / (c^2+e^2)
        return GaussianRational._raw((self.a * other.a + self.b * other.b) * other.d,
                                     (self.b * other.a - self.a * other.b) * other.d,
                                     self.d * n2)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __neg__(self):
        return GaussianRational._raw(-self.a, -self.b, self.d)

    def __eq__(self, other):
        other = _coerce(other)
        return self.a * other.d == other.a * self.d and self.b * other.d == other.b * self.d

    def __hash__(self):
        return hash((Fraction(self.a, self.d), Fraction(self.b, self.d)))

    @property
    def re(self):
        return Fraction(self.a, self.d)

    @property
    def im(self):
        return Fraction(self.b, self.d)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __abs__(self):
        # used only for zero tests / diagnostics
        return abs(complex(self))

    def __complex__(self):
        return (self.a + 1j * self.b) / self.d

    def __repr__(self):
        return "grat(%s, %s)" % (self.re, self.im)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, complex):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, float):
        return GaussianRational(Fraction(x))
    raise TypeError("cannot coerce %r to GaussianRational" % (x,))


def grat(re=0, im=0):
    return GaussianRational(re, im)


I = GaussianRational(0, 1)


def gmat(rows):
    """Object-dtype matrix from nested lists of ints/Fractions/GaussianRationals."""
    m = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            m[i, j] = x if isinstance(x, GaussianRational) else _coerce(x)
    return m


def gzeros(n, m=None):
    m = n if m is None else m
    out = np.empty((n, m), dtype=object)
    out[:] = GaussianRational(0)
    return out


def geye(n):
    out = gzeros(n)
    for i in range(n):
        out[i, i] = GaussianRational(1)
    return out


def gdot(A, B):
    """Zero-skipping exact matrix product.

    The structural-identity matrices are very sparse (O(N) nonzeros per row),
    so skipping zero terms beats the dense object-dtype ``@`` by a wide
    margin.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    n, m = A.shape
    p = B.shape[1]
    Brows = [[(j, B[k, j]) for j in range(p) if not B[k, j].is_zero()]
             for k in range(m)]
    C = gzeros(n, p)
    for i in range(n):
        acc = {}
        for k in range(m):
            a = A[i, k]
            if a.is_zero():
                continue
            for j, b in Brows[k]:
                prod = a * b
                if j in acc:
                    acc[j] = acc[j] + prod
                else:
                    acc[j] = prod
        for j, v in acc.items():
            C[i, j] = v
    return C


def is_zero_matrix(m):
    return all(x.is_zero() for x in np.asarray(m).flat)


def fl_char_sequence(m):
    """Faddeev-LeVerrier recursion: returns (coeffs c_1..c_n, M_seq) for
    det(x I - m) = x^n + c_1 x^{n-1} + ... + c_n."""
    n = m.shape[0]
    Mk = geye(n)
    coeffs = []
    Ms = [Mk]
    for k in range(1, n + 1):
        AM = m @ Mk
        tr = GaussianRational(0)
        for i in range(n):
            tr = tr + AM[i, i]
        ck = tr / GaussianRational(-k)
        coeffs.append(ck)
        Mk = AM + np.asarray(geye(n)) * ck
        Ms.append(Mk)
    return coeffs, Ms


def gdet(m):
    """Exact determinant via Faddeev-LeVerrier."""
    n = m.shape[0]
    coeffs, _ = fl_char_sequence(m)
    # det(m) = (-1)^n c_n
    return GaussianRational((-1) ** n) * coeffs[-1]


def gadjugate(m):
    """Exact adjugate: adj(m) = det(m) m^{-1} (valid also for singular m)."""
    n = m.shape[0]
    _, Ms = fl_char_sequence(m)
    return np.asarray(Ms[n - 1]) * GaussianRational((-1) ** (n - 1))
