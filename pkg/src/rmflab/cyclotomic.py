"""Prime ideals of Q(zeta_n) by norm, and sums over integral ideals.

A rational prime p with p**v || n splits as (P_1 ... P_r)**phi(p**v) where
every P_i has norm p**f and f is the order of p modulo n / p**v.  Ideals are
represented only through their exponent vectors over these prime-ideal
"slots"; the norm map is all that the partial sums need.
"""

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import fsum, log, prod

import numpy as np

from .errors import InvalidArgument
from .multiplicative import UNIT_ROUNDOFF, PartialSumResult, smooth_numbers
from .numtheory import is_prime, multiplicative_order, primes_up_to, totient
from . import rng


@dataclass(frozen=True)
class SplittingDatum:
    p: int
    valuation: int
    ramification: int
    inertia: int
    count: int

    @property
    def norm(self):
        return self.p**self.inertia

    def as_row(self):
        return (self.p, self.valuation, self.ramification, self.inertia, self.count, self.norm)


def _check_index(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgument(f"field index must be a positive integer, got {n!r}")
    return int(n)


def splitting_type(n, p):
    """Decomposition data (v_p, e_p, f_p, r_p) of p in Q(zeta_n)."""
    n = _check_index(n)
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    v, rest = 0, n
    while rest % p == 0:
        rest //= p
        v += 1
    e = totient(p**v)
    f = multiplicative_order(p, rest)
    r, leftover = divmod(totient(n), e * f)
    if leftover:
        raise ArithmeticError(f"e*f does not divide phi({n}) for p = {p}")
    return SplittingDatum(p, v, e, f, r)


@dataclass(frozen=True)
class Slot:
    p: int
    ordinal: int
    norm: int


@dataclass(frozen=True, eq=False)
class IdealTable:
    """Every integral ideal of norm <= bound, sorted by norm.

    ``parent[i]`` is ideal i divided by one copy of prime slot ``slot[i]``
    (the unit ideal is row 0, parent -1); ``levels`` orders rows by the
    number of prime factors so signs can be filled in vectorized passes.
    """

    norms: np.ndarray
    parent: np.ndarray
    slot: np.ndarray
    levels: tuple

    def __len__(self):
        return len(self.norms)

    def signs(self, slot_values):
        """f(a) for every ideal given f on the slots (int8 or Fraction-free ints)."""
        vals = np.asarray(slot_values)
        out = np.ones(len(self.norms), dtype=vals.dtype if vals.size else np.int8)
        for lvl in self.levels:
            out[lvl] = vals[self.slot[lvl]] * out[self.parent[lvl]]
        return out

    def batch_signs(self, slot_values):
        """As :meth:`signs` for a (batch, slots) array."""
        vals = np.asarray(slot_values)
        out = np.ones((vals.shape[0], len(self.norms)), dtype=vals.dtype)
        for lvl in self.levels:
            out[:, lvl] = vals[:, self.slot[lvl]] * out[:, self.parent[lvl]]
        return out

    def count_upto(self, x):
        return int(np.searchsorted(self.norms, x, side="right"))


class _Buffer:
    def __init__(self, first):
        self.data = np.empty(1024, dtype=np.int64)
        self.data[0] = first
        self.size = 1

    def extend(self, values):
        need = self.size + len(values)
        if need > len(self.data):
            grown = np.empty(max(need, 2 * len(self.data)), dtype=np.int64)
            grown[: self.size] = self.data[: self.size]
            self.data = grown
        self.data[self.size : need] = values
        self.size = need

    def view(self):
        return self.data[: self.size]


def _ideal_table(slot_norms, cap):
    norms, parent, slot, depth = _Buffer(1), _Buffer(-1), _Buffer(-1), _Buffer(0)
    # rows [0, size) use only slots < s; multiply them by powers of slot s
    for s, q in enumerate(slot_norms):
        q = int(q)
        if q > cap:
            continue
        idx = np.flatnonzero(norms.view() <= cap // q)
        while idx.size:
            start = norms.size
            norms.extend(norms.data[idx] * q)
            depth.extend(depth.data[idx] + 1)
            parent.extend(idx)
            slot.extend(np.full(len(idx), s))
            fresh = np.arange(start, norms.size)
            idx = fresh[norms.data[fresh] <= cap // q]
    norms, parent, slot, depth = norms.view(), parent.view(), slot.view(), depth.view()
    order = np.argsort(norms, kind="stable")
    inverse = np.empty_like(order)
    inverse[order] = np.arange(len(order))
    norms, slot, depth = norms[order], slot[order], depth[order]
    parent = np.where(parent[order] >= 0, inverse[np.maximum(parent[order], 0)], -1)
    by_depth = np.argsort(depth, kind="stable")
    counts = np.bincount(depth)
    edges = np.concatenate(([0], np.cumsum(counts)))
    levels = tuple(by_depth[edges[d] : edges[d + 1]] for d in range(1, len(counts)))
    return IdealTable(norms, parent, slot, levels)


@dataclass(frozen=True, eq=False)
class IdealPrimeBasis:
    """Prime-ideal slots of Q(zeta_n) with norm <= bound."""

    n: int
    bound: int
    slots: tuple

    @cached_property
    def slot_norms(self):
        return np.array([s.norm for s in self.slots], dtype=np.int64)

    @cached_property
    def slot_primes(self):
        return np.array([s.p for s in self.slots], dtype=np.int64)

    @cached_property
    def ideals(self):
        return _ideal_table(self.slot_norms, self.bound)

    def norm_multiset(self):
        out = {}
        for s in self.slots:
            out[s.norm] = out.get(s.norm, 0) + 1
        return out


def prime_ideal_slots(n, x):
    """All prime ideals of Q(zeta_n) with norm <= x, one slot per ideal."""
    n = _check_index(n)
    if x < 2:
        raise InvalidArgument(f"norm bound must be >= 2, got {x}")
    slots = []
    for p in primes_up_to(int(x)):
        d = splitting_type(n, p)
        if d.norm <= x:
            slots.extend(Slot(p, i, d.norm) for i in range(1, d.count + 1))
    return IdealPrimeBasis(n, int(x), tuple(slots))


def count_ideals(n, x):
    """Number of integral ideals of Q(zeta_n) with norm <= x."""
    if x < 1:
        raise InvalidArgument("x must be >= 1")
    if x < 2:
        _check_index(n)
        return 1
    return len(prime_ideal_slots(n, x).ideals)


@dataclass(frozen=True, eq=False)
class IdealSignAssignment:
    values: np.ndarray
    seed: int | None = None
    trial: int | None = None

    def __len__(self):
        return len(self.values)

    @classmethod
    def constant(cls, basis, value=1):
        return cls(np.full(len(basis.slots), value, dtype=np.int8))


def _slot_counters(basis):
    return (basis.slot_primes.astype(np.uint64) << np.uint64(20)) | np.array(
        [s.ordinal for s in basis.slots], dtype=np.uint64)


def sample_ideal_signs(seed, trial, basis):
    """Uniform signs per prime ideal, keyed by (seed, trial, p, ordinal)."""
    key = rng.stream_key(seed, trial, rng.IDEAL_SIGNS)
    values = rng.to_signs(rng.draw(key, _slot_counters(basis)))
    return IdealSignAssignment(values, seed, trial)


def ideal_partial_sum(signs, basis, x):
    """S_x = sum over integral ideals a with N(a) <= x of f(a) / N(a)."""
    if x < 1:
        raise InvalidArgument("x must be >= 1")
    if x > basis.bound:
        raise InvalidArgument(f"x = {x} exceeds basis bound {basis.bound}")
    if len(signs) != len(basis.slots):
        raise InvalidArgument("sign assignment does not match the basis")
    table = basis.ideals
    k = table.count_upto(x)
    fa = table.signs(signs.values)[:k]
    norms = table.norms[:k]
    value = fsum((fa / norms).tolist())
    weight = fsum((1.0 / norms).tolist())
    return PartialSumResult(x, value, k, UNIT_ROUNDOFF * (weight + abs(value)))


@dataclass(frozen=True)
class IdealSplit:
    main: object
    tail: object
    direct: object
    residual: object
    count: int


def ideal_split(signs, basis, x, N, exact=False):
    """Y (Euler product over N(P) <= x), Z (ideals with x < N(a) <= N built from
    those primes) and the direct sum S_x, with a bound for the N(a) > N part."""
    if N < x:
        raise InvalidArgument(f"enumeration cap N = {N} is below x = {x}")
    if x > basis.bound:
        raise InvalidArgument(f"x = {x} exceeds basis bound {basis.bound}")
    live = basis.slot_norms <= x
    qs = basis.slot_norms[live]
    fs = signs.values[live]
    table = _ideal_table(qs, N)
    fa = table.signs(fs)
    norms = table.norms
    tail = norms > x
    if exact:
        D = prod(int(p) ** int(log(N) / log(p) + 1) for p in set(basis.slot_primes[live].tolist()))
        main = prod((Fraction(int(q), int(q) - int(f)) for q, f in zip(qs, fs)), start=Fraction(1))
        z = Fraction(sum(int(s) * (D // int(k)) for s, k in zip(fa[tail], norms[tail])), D)
        head = Fraction(sum(int(s) * (D // int(k)) for s, k in zip(fa[~tail], norms[~tail])), D)
        full = prod((Fraction(int(q), int(q) - 1) for q in qs), start=Fraction(1))
        seen = Fraction(sum(D // int(k) for k in norms), D)
        return IdealSplit(main, z, head, full - seen, int(tail.sum()))
    main = float(np.exp(-fsum(np.log1p(-fs / qs).tolist())))
    z = fsum((fa[tail] / norms[tail]).tolist())
    head = fsum((fa[~tail] / norms[~tail]).tolist())
    full = prod(q / (q - 1) for q in qs.tolist())
    residual = max(full - fsum((1.0 / norms).tolist()), 0.0) + 8 * UNIT_ROUNDOFF * full
    return IdealSplit(main, z, head, residual, int(tail.sum()))
