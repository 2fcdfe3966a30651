"""Random completely multiplicative functions f with f(p) = +-1.

A :class:`PrimeSieve` holds the smallest-prime-factor table that lets f(n)
be evaluated for every n <= x in one pass, f(n) = f(spf(n)) f(n / spf(n)),
vectorized level by level over the number of prime factors Omega(n).

Floating sums use :func:`math.fsum` (exactly rounded), so the only error is
the rounding of the individual terms; every result carries a rigorous bound
for it.  Exact variants work over a common denominator with Python integers.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import fsum, gcd, isqrt, log, prod
import cmath

import numpy as np

from .characters import ResidueSet, root_table
from .cyclo import CyclotomicNumber
from .errors import InvalidArgument, ResourceLimit, UnreachableTarget
from .numtheory import lcm
from . import rng

#: Largest sieve bound accepted by :func:`build_spf_sieve` (about 0.9 GB of tables).
MAX_SIEVE_BOUND = 10**8

UNIT_ROUNDOFF = 2.0**-53
RANKIN_EXPONENT = 0.9


class PrimeSieve:
    """Smallest-prime-factor table for 0..bound (spf[0] = 0, spf[1] = 1)."""

    def __init__(self, bound, spf):
        self.bound = bound
        self.spf = spf
        self.spf.setflags(write=False)
        n = np.arange(bound + 1)
        self.primes = np.flatnonzero((spf == n) & (n >= 2)).astype(np.int64)

    def __repr__(self):
        return f"PrimeSieve(bound={self.bound}, primes={len(self.primes)})"

    def is_prime(self, n):
        return 2 <= n <= self.bound and self.spf[n] == n

    def factorize(self, n):
        if not 1 <= n <= self.bound:
            raise InvalidArgument(f"{n} outside sieve range 1..{self.bound}")
        out = {}
        while n > 1:
            p = int(self.spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out

    def primes_up_to(self, x):
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    @cached_property
    def cofactor(self):
        """n // spf(n), with 0 at n = 0 and n = 1."""
        n = np.arange(self.bound + 1, dtype=np.int64)
        out = n // np.maximum(self.spf, 1)
        out[:2] = 0
        return out

    @cached_property
    def omega_levels(self):
        """Indices n with Omega(n) = 2, 3, ... (one array per level)."""
        return _levels(self.bound, self.cofactor)

    @cached_property
    def prime_power_split(self):
        """(k, rest): spf(n)**k exactly divides n and rest = n / spf(n)**k."""
        n = np.arange(self.bound + 1, dtype=np.int64)
        p = np.maximum(self.spf, 1).astype(np.int64)
        rest = self.cofactor.copy()
        k = np.where(n >= 2, 1, 0)
        live = np.flatnonzero(n >= 2)
        while live.size:
            live = live[rest[live] % p[live] == 0]
            rest[live] //= p[live]
            k[live] += 1
        rest[:2] = 0
        return k, rest

    @cached_property
    def multiplicative_plan(self):
        """Evaluation order for multiplicative (not completely) functions.

        Returns (power_levels, mixed_levels): power_levels[k-2] lists the prime
        powers p**k, k >= 2; mixed_levels lists non-prime-powers by omega(n).
        """
        k, rest = self.prime_power_split
        n = np.arange(self.bound + 1)
        is_pp = (rest == 1) & (n >= 2)
        power_levels = [np.flatnonzero(is_pp & (k == e)) for e in range(2, int(k.max(initial=1)) + 1)]
        mixed = _levels(self.bound, np.where(is_pp, 0, rest))
        return power_levels, mixed

    @cached_property
    def divisor_counts(self):
        k, rest = self.prime_power_split
        d = np.ones(self.bound + 1, dtype=np.int64)
        d[0] = 0
        power_levels, mixed = self.multiplicative_plan
        pp = (rest == 1) & (np.arange(self.bound + 1) >= 2)
        d[pp] = k[pp] + 1
        for lvl in mixed:
            d[lvl] = d[lvl // rest[lvl]] * d[rest[lvl]]
        return d


def _levels(bound, parent):
    # depth(n) = depth(parent(n)) + 1 with depth(1) = 0; group n >= 2 by depth >= 2
    depth = np.zeros(bound + 1, dtype=np.int64)
    cur = np.arange(bound + 1, dtype=np.int64)
    live = np.flatnonzero(cur >= 2)
    while live.size:
        depth[live] += 1
        cur[live] = parent[cur[live]]
        live = live[cur[live] >= 2]
    order = np.argsort(depth, kind="stable")
    counts = np.bincount(depth)
    edges = np.concatenate(([0], np.cumsum(counts)))
    return [order[edges[d] : edges[d + 1]] for d in range(2, len(counts))]


def build_spf_sieve(x, cap=MAX_SIEVE_BOUND):
    """Smallest-prime-factor sieve on 2..x."""
    if not isinstance(x, (int, np.integer)) or x < 2:
        raise InvalidArgument(f"sieve bound must be an integer >= 2, got {x!r}")
    if x > cap:
        raise ResourceLimit(f"sieve bound {x} exceeds cap {cap}")
    x = int(x)
    spf = np.zeros(x + 1, dtype=np.int32 if x < 2**31 else np.int64)
    for p in range(2, isqrt(x) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    n = np.arange(x + 1)
    spf[1] = 1
    free = spf == 0
    free[0] = False
    spf[free] = n[free]
    return PrimeSieve(x, spf)


@dataclass(frozen=True, eq=False)
class SignAssignment:
    """f(p) in {+1, -1} for every prime p <= bound (``values`` aligned with ``primes``)."""

    bound: int
    primes: np.ndarray
    values: np.ndarray
    seed: int | None = None
    trial: int | None = None

    def __getitem__(self, p):
        i = np.searchsorted(self.primes, p)
        if i >= len(self.primes) or self.primes[i] != p:
            raise KeyError(p)
        return int(self.values[i])

    def as_dict(self):
        return dict(zip(self.primes.tolist(), self.values.tolist()))

    @classmethod
    def constant(cls, sieve, value=1):
        return cls(sieve.bound, sieve.primes, np.full(len(sieve.primes), value, dtype=np.int8))

    @classmethod
    def from_mapping(cls, sieve, mapping, default=1):
        vals = np.full(len(sieve.primes), default, dtype=np.int8)
        for p, v in mapping.items():
            i = np.searchsorted(sieve.primes, p)
            if i >= len(sieve.primes) or sieve.primes[i] != p:
                raise InvalidArgument(f"{p} is not a prime <= {sieve.bound}")
            if v not in (1, -1):
                raise InvalidArgument("signs must be +1 or -1")
            vals[i] = v
        return cls(sieve.bound, sieve.primes, vals)

    def with_overrides(self, primes, values):
        idx = np.searchsorted(self.primes, primes)
        keep = idx < len(self.primes)
        vals = self.values.copy()
        vals[idx[keep]] = np.asarray(values, dtype=np.int8)[keep]
        return SignAssignment(self.bound, self.primes, vals, self.seed, self.trial)

    def table(self, sieve, x=None):
        """f(n) for n = 0..x as int8 (f(0) = 0)."""
        x = self.bound if x is None else x
        _check_bound(x, sieve, self)
        return completely_multiplicative_table(sieve, self.primes, self.values, x)


def completely_multiplicative_table(sieve, primes, values, x):
    f = np.zeros(x + 1, dtype=np.int8)
    if x >= 1:
        f[1] = 1
    cut = np.searchsorted(primes, x, side="right")
    f[primes[:cut]] = values[:cut]
    spf, cof = sieve.spf, sieve.cofactor
    for lvl in sieve.omega_levels:
        lvl = lvl[: np.searchsorted(lvl, x, side="right")]
        if not lvl.size:
            break
        f[lvl] = f[spf[lvl]] * f[cof[lvl]]
    return f


def sample_signs(seed, trial, sieve):
    """Independent uniform signs on the primes of ``sieve``, keyed by (seed, trial, p)."""
    key = rng.stream_key(seed, trial, rng.RESIDUE_SIGNS)
    values = rng.to_signs(rng.draw(key, sieve.primes))
    return SignAssignment(sieve.bound, sieve.primes, values, seed, trial)


@dataclass(frozen=True)
class PartialSumResult:
    x: int
    value: object
    terms: int
    error_bound: float = 0.0


def _check_bound(x, sieve, signs=None):
    if x < 1:
        raise InvalidArgument(f"x must be >= 1, got {x}")
    if x > sieve.bound:
        raise InvalidArgument(f"x = {x} exceeds sieve bound {sieve.bound}")
    if signs is not None and x > signs.bound:
        raise InvalidArgument(f"x = {x} exceeds sign assignment bound {signs.bound}")


def exact_weighted_sum(n, coeffs):
    """sum coeffs[i] / n[i] as a Fraction (common-denominator integer arithmetic)."""
    n = [int(v) for v in n]
    if not n:
        return Fraction(0)
    D = lcm(*set(n))
    return Fraction(sum(int(c) * (D // k) for c, k in zip(coeffs, n)), D)


def partial_sum(signs, sieve, rs, x, exact=False):
    """sum of f(n)/n over n <= x with n mod m in S."""
    _check_bound(x, sieve, signs)
    f = signs.table(sieve, x)
    n = np.flatnonzero(rs.mask(x))
    if exact:
        return PartialSumResult(x, exact_weighted_sum(n, f[n]), len(n), 0.0)
    terms = (f[n] / n).tolist()
    value = fsum(terms)
    harmonic = fsum((1.0 / n).tolist())
    return PartialSumResult(x, value, len(n), UNIT_ROUNDOFF * (harmonic + abs(value)))


def character_twisted_sum(signs, sieve, table, j, x, exact=False):
    """sum_{n <= x} chi_j(n) f(n) / n (complex, or exact cyclotomic)."""
    _check_bound(x, sieve, signs)
    f = signs.table(sieve, x)
    m = table.modulus
    n = np.arange(1, x + 1)
    e = table.exponents[j][n % m]
    live = e >= 0
    n, e, fn = n[live], e[live], f[1:][live]
    if exact:
        L = table.order
        counts = np.zeros(L, dtype=object)
        if len(n):
            D = lcm(*set(n.tolist()))
            for k, ek, fk in zip(n.tolist(), e.tolist(), fn.tolist()):
                counts[ek] += fk * (D // k)
        else:
            D = 1
        return PartialSumResult(x, CyclotomicNumber.from_exponent_counts(L, counts, Fraction(1, D)), len(n))
    roots = root_table(table.order)[e]
    value = complex(fsum((fn * roots.real / n).tolist()), fsum((fn * roots.imag / n).tolist()))
    harmonic = fsum((1.0 / n).tolist())
    return PartialSumResult(x, value, len(n), UNIT_ROUNDOFF * (4 * harmonic + 2 * abs(value)))


def _class_primes(sieve, a, m, x):
    if m < 1:
        raise InvalidArgument("modulus must be positive")
    if gcd(a, m) != 1:
        raise InvalidArgument(f"gcd({a}, {m}) > 1")
    ps = sieve.primes_up_to(x)
    return ps[ps % m == a % m]


def prime_class_sum(signs, sieve, a, m, x):
    """gamma_a(x) = sum of f(p)/p over primes p <= x, p = a mod m."""
    _check_bound(x, sieve, signs)
    ps = _class_primes(sieve, a, m, x)
    idx = np.searchsorted(signs.primes, ps)
    return fsum((signs.values[idx] / ps).tolist())


@dataclass(frozen=True)
class TurningPoint:
    index: int
    prime: int
    partial: float

    def residual(self, z):
        return abs(self.partial - z)


@dataclass(frozen=True, eq=False)
class SteeringResult:
    """Greedy sign fragment on the primes p = a mod m, p <= bound."""

    target: float
    residue: int
    modulus: int
    primes: np.ndarray
    values: np.ndarray
    turning_points: tuple
    final_sum: float

    def apply(self, signs):
        """Replace the class primes of ``signs`` by the steered values."""
        cut = np.searchsorted(self.primes, signs.bound, side="right")
        return signs.with_overrides(self.primes[:cut], self.values[:cut])


def steer_signs(z, a, m, sieve):
    """Drive gamma_a towards z: keep the sign until the running sum crosses z, then flip.

    Starting sign is +1 when z >= 0 and -1 otherwise; every crossing is
    recorded as a turning point, where |gamma - z| < 1/p holds.
    """
    z = float(z)
    ps = _class_primes(sieve, a, m, sieve.bound)
    reservoir = fsum((1.0 / ps).tolist())
    if reservoir <= abs(z):
        raise UnreachableTarget(
            f"sum of 1/p over {len(ps)} primes = {a} mod {m} up to {sieve.bound} is "
            f"{reservoir:.6g}, not above |z| = {abs(z):.6g}")
    sign = 1 if z >= 0 else -1
    values = np.empty(len(ps), dtype=np.int8)
    turns = []
    # Neumaier running sum
    s = c = 0.0
    for i, p in enumerate(ps.tolist()):
        values[i] = sign
        term = sign / p
        t = s + term
        c += (s - t) + term if abs(s) >= abs(term) else (term - t) + s
        s = t
        total = s + c
        if (sign > 0 and total > z) or (sign < 0 and total < z):
            turns.append(TurningPoint(i, p, total))
            sign = -sign
    return SteeringResult(z, a % m, m, ps, values, tuple(turns), s + c)


def truncated_euler_product(signs, table, j, x, exact=False):
    """prod_{p <= x} (1 - chi_j(p) f(p) / p)**-1."""
    if x > signs.bound:
        raise InvalidArgument(f"x = {x} exceeds sign assignment bound {signs.bound}")
    cut = np.searchsorted(signs.primes, x, side="right")
    ps, fs = signs.primes[:cut], signs.values[:cut]
    e = table.exponents[j][ps % table.modulus]
    live = e >= 0
    ps, fs, e = ps[live], fs[live], e[live]
    if exact:
        L = table.order
        out = CyclotomicNumber.rational(L, 1)
        for p, fp, ep in zip(ps.tolist(), fs.tolist(), e.tolist()):
            factor = 1 - CyclotomicNumber.root(L, ep) * Fraction(fp, p)
            out = out * factor.inverse()
        return out
    w = fs * root_table(table.order)[e] / ps
    logs = np.log1p(-w)
    total = complex(fsum(logs.real.tolist()), fsum(logs.imag.tolist()))
    return cmath.exp(-total)


def smooth_numbers(primes, N, labels=()):
    """All n <= N built from ``primes``, with per-prime labels carried along.

    ``labels`` is a sequence of (per_prime_values, combine, identity) triples;
    each label is folded over the prime factorization (with multiplicity).
    """
    n = np.array([1], dtype=np.int64)
    lab = [np.array([ident]) for _, _, ident in labels]
    for i, p in enumerate(primes):
        p = int(p)
        parts_n, parts_l = [n], [[a] for a in lab]
        cur, cur_l = n, lab
        while True:
            keep = cur <= N // p
            if not keep.any():
                break
            cur = cur[keep] * p
            cur_l = [comb(a[keep], vals[i]) for a, (vals, comb, _) in zip(cur_l, labels)]
            parts_n.append(cur)
            for acc, a in zip(parts_l, cur_l):
                acc.append(a)
        n = np.concatenate(parts_n)
        lab = [np.concatenate(a) for a in parts_l]
    order = np.argsort(n, kind="stable")
    return n[order], [a[order] for a in lab]


@dataclass(frozen=True)
class SmoothTail:
    """Truncated tail over x-smooth n in (x, N] plus a bound for n > N.

    ``residual`` is the exact complementary majorant
    prod_p (1 - 1/p)**-1 - sum_{smooth n <= N} 1/n; ``rankin_bound`` is the
    coarser N**-(1-t) prod_p (1 - p**-t)**-1 with t = 0.9, kept for reference.
    """

    value: object
    residual: object
    rankin_bound: float
    count: int
    cap: int = field(default=0)


def rankin_bound(primes, N, theta=RANKIN_EXPONENT):
    return N ** -(1 - theta) * prod(1 / (1 - p**-theta) for p in primes)


def smooth_tail_sum(signs, table, j, x, N, exact=False):
    """sum of chi_j(n) f(n) / n over x-smooth n with x < n <= N."""
    if N < x:
        raise InvalidArgument(f"enumeration cap N = {N} is below x = {x}")
    if x > signs.bound:
        raise InvalidArgument(f"x = {x} exceeds sign assignment bound {signs.bound}")
    L = table.order
    cut = np.searchsorted(signs.primes, x, side="right")
    ps, fs = signs.primes[:cut], signs.values[:cut]
    e = table.exponents[j][ps % table.modulus]
    live = e >= 0
    ps, fs, e = ps[live], fs[live], e[live]

    n, (sg, ex) = smooth_numbers(
        ps, N, [(fs, lambda a, v: a * v, np.int8(1)), (e, lambda a, v: (a + v) % L, 0)])
    tail = n > x
    count = int(tail.sum())
    rk = rankin_bound(ps.tolist(), N)
    if exact:
        D = prod(int(p) ** int(log(N) / log(p) + 1) for p in ps.tolist())
        counts = np.zeros(L, dtype=object)
        for k, s, ek in zip(n[tail].tolist(), sg[tail].tolist(), ex[tail].tolist()):
            counts[ek] += s * (D // k)
        value = CyclotomicNumber.from_exponent_counts(L, counts, Fraction(1, D))
        full = prod((Fraction(p, p - 1) for p in ps.tolist()), start=Fraction(1))
        seen = Fraction(sum(D // k for k in n.tolist()), D)
        return SmoothTail(value, full - seen, rk, count, N)
    roots = root_table(L)[ex[tail]]
    nt = n[tail]
    value = complex(fsum((sg[tail] * roots.real / nt).tolist()),
                    fsum((sg[tail] * roots.imag / nt).tolist()))
    full = prod(p / (p - 1) for p in ps.tolist())
    seen = fsum((1.0 / n).tolist())
    residual = max(full - seen, 0.0) + 8 * UNIT_ROUNDOFF * full
    return SmoothTail(value, residual, rk, count, N)
