"""Exact arithmetic in the cyclotomic field Q(zeta_L).

Elements are stored in the power basis 1, zeta, ..., zeta^(d-1) with
d = phi(L) and rational coefficients, reduced modulo the L-th cyclotomic
polynomial, so equality (in particular equality with zero) is decided by
comparing coefficient tuples.
"""

from fractions import Fraction
from functools import lru_cache
import cmath

import numpy as np

from .errors import InvalidArgument
from .numtheory import factorize


def _poly_divexact(num, den):
    # integer polynomials, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def reduction_matrix(L):
    """Integer matrix whose row e holds the basis coordinates of zeta_L**e."""
    phi = cyclotomic_polynomial(L)
    d = len(phi) - 1
    rows = np.zeros((L, d), dtype=np.int64)
    cur = np.zeros(d, dtype=np.int64)
    cur[0] = 1
    low = np.array(phi[:-1], dtype=np.int64)
    for e in range(L):
        rows[e] = cur
        lead = cur[-1]
        cur = np.concatenate(([0], cur[:-1]))
        if lead:
            cur -= lead * low
    rows.setflags(write=False)
    return rows


def degree(L):
    return len(cyclotomic_polynomial(L)) - 1


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


class CyclotomicNumber:
    """An element of Q(zeta_L) with exact rational coordinates."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        if len(coeffs) != degree(order):
            raise InvalidArgument("coefficient vector has the wrong length")
        self.order = order
        self.coeffs = tuple(_as_fraction(c) for c in coeffs)

    @classmethod
    def zero(cls, order):
        return cls(order, [0] * degree(order))

    @classmethod
    def rational(cls, order, q):
        c = [Fraction(0)] * degree(order)
        c[0] = _as_fraction(q)
        return cls(order, c)

    @classmethod
    def root(cls, order, exponent):
        return cls(order, [int(v) for v in reduction_matrix(order)[exponent % order]])

    @classmethod
    def from_exponent_counts(cls, order, counts, scale=1):
        """Build ``scale * sum_e counts[e] * zeta**e`` exactly."""
        counts = np.asarray(counts)
        if counts.shape != (order,):
            raise InvalidArgument("counts must have one entry per exponent")
        scale = _as_fraction(scale)
        if counts.dtype == object:
            R = reduction_matrix(order)
            coords = [sum(int(counts[e]) * int(R[e, k]) for e in range(order) if counts[e])
                      for k in range(R.shape[1])]
        else:
            coords = counts.astype(np.int64) @ reduction_matrix(order)
        return cls(order, [scale * int(c) for c in coords])

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise InvalidArgument("elements of different cyclotomic fields")
            return other
        return CyclotomicNumber.rational(self.order, other)

    def __add__(self, other):
        other = self._coerce(other)
        return CyclotomicNumber(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            q = _as_fraction(other)
            return CyclotomicNumber(self.order, [a * q for a in self.coeffs])
        other = self._coerce(other)
        d = len(self.coeffs)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return self._reduce_poly(prod)

    __rmul__ = __mul__

    def _reduce_poly(self, poly):
        phi = cyclotomic_polynomial(self.order)
        d = len(phi) - 1
        poly = list(poly)
        for i in range(len(poly) - 1, d - 1, -1):
            c = poly[i]
            if c:
                for j in range(d + 1):
                    poly[i - d + j] -= c * phi[j]
        poly = poly[:d] + [Fraction(0)] * max(0, d - len(poly))
        return CyclotomicNumber(self.order, poly)

    def conjugate(self):
        R = reduction_matrix(self.order)
        d = len(self.coeffs)
        out = [Fraction(0)] * d
        for k, c in enumerate(self.coeffs):
            if c:
                row = R[(-k) % self.order]
                for i in range(d):
                    if row[i]:
                        out[i] += c * int(row[i])
        return CyclotomicNumber(self.order, out)

    def inverse(self):
        """Multiplicative inverse, by solving the multiplication-matrix system."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = len(self.coeffs)
        if d == 1:
            return CyclotomicNumber(self.order, [1 / self.coeffs[0]])
        basis = [CyclotomicNumber.root(self.order, k) for k in range(d)]
        cols = [(self * b).coeffs for b in basis]
        # augmented rows: M c = e_0
        rows = [[cols[k][i] for k in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if rows[r][col] != 0)
            rows[col], rows[piv] = rows[piv], rows[col]
            pv = rows[col][col]
            rows[col] = [v / pv for v in rows[col]]
            for r in range(d):
                if r != col and rows[r][col] != 0:
                    f = rows[r][col]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
        return CyclotomicNumber(self.order, [rows[i][d] for i in range(d)])

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * other.inverse()
        return self * (1 / _as_fraction(other))

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise InvalidArgument("element is not rational")
        return self.coeffs[0]

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.order)
        return complex(sum(float(c) * z**k for k, c in enumerate(self.coeffs) if c))

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.order == other.order and self.coeffs == other.coeffs
        try:
            return self.is_rational() and self.coeffs[0] == _as_fraction(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return f"CyclotomicNumber({self.coeffs[0]})"
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicNumber[L={self.order}]({' + '.join(terms)})"


def primitive_root_prime(p):
    if p == 2:
        return 1
    factors = [q for q, _ in factorize(p - 1)]
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in factors):
        g += 1
    return g
