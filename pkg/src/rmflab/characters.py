"""Dirichlet characters mod m with exact root-of-unity values.

The unit group (Z/mZ)^x is presented as a product of cyclic factors
(primitive roots for odd prime powers, <-1, 5> for 2^k with k >= 3), lifted
to Z/mZ by CRT.  A character is fixed by an exponent vector on the
generators; every value is stored as an integer exponent e meaning zeta_L**e
with L the group exponent, and -1 marks a zero value (gcd(a, m) > 1).

Decomposing the indicator of a residue set S gives coefficients

    c_chi = (1/phi(m)) * sum_{a in S} conj(chi(a)),

and the set falls in the ``Decay`` branch exactly when every real
character has c_chi >= 0 and every complex character has c_chi = 0.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, prod

import numpy as np

from .cyclo import CyclotomicNumber, primitive_root_prime, reduction_matrix
from .errors import InvalidArgument
from .numtheory import factorize, lcm


class CharacterKind(str, Enum):
    PRINCIPAL = "principal"
    REAL = "real"
    COMPLEX = "complex"


class Branch(str, Enum):
    DECAY = "Decay"
    BOUNDED_BELOW = "BoundedBelow"


@dataclass(frozen=True)
class UnitGroupStructure:
    modulus: int
    generators: tuple
    orders: tuple
    phi: int

    def element(self, exponents):
        """Residue prod g_i**k_i mod m."""
        a = 1 % self.modulus
        for g, k in zip(self.generators, exponents):
            a = a * pow(g, int(k), self.modulus) % self.modulus
        return a


def _check_modulus(m):
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidArgument(f"modulus must be a positive integer, got {m!r}")
    return int(m)


def _local_generators(p, k):
    q = p**k
    if p == 2:
        if k == 1:
            return []
        if k == 2:
            return [(3, 2)]
        return [(q - 1, 2), (5, 2 ** (k - 2))]
    g = primitive_root_prime(p)
    if k >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return [(g, q - q // p)]


def build_unit_group(m):
    """Cyclic decomposition of (Z/mZ)^x.

    >>> g = build_unit_group(8)
    >>> g.orders, g.phi
    ((2, 2), 4)
    """
    m = _check_modulus(m)
    gens, orders = [], []
    for p, k in factorize(m) if m > 1 else []:
        q = p**k
        rest = m // q
        for g, order in _local_generators(p, k):
            if rest == 1:
                lifted = g % m
            else:
                t = (g - 1) * pow(rest, -1, q) % q
                lifted = (1 + rest * t) % m
            gens.append(lifted)
            orders.append(order)
    return UnitGroupStructure(m, tuple(gens), tuple(orders), prod(orders))


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """All phi(m) characters mod m.

    ``exponents[j, a]`` is e with chi_j(a) = zeta_L**e, or -1 when
    gcd(a, m) > 1.  Index 0 is the principal character.
    """

    modulus: int
    order: int
    group: UnitGroupStructure
    exponents: np.ndarray
    vectors: tuple
    kinds: tuple
    conjugates: tuple

    @property
    def count(self):
        return len(self.kinds)

    @property
    def units(self):
        return np.flatnonzero(self.exponents[0] >= 0)

    def exponent(self, j, a):
        self._check_index(j)
        e = int(self.exponents[j, a % self.modulus])
        return None if e < 0 else e

    def value(self, j, a):
        e = self.exponent(j, a)
        if e is None:
            return CyclotomicNumber.zero(self.order)
        return CyclotomicNumber.root(self.order, e)

    def complex_values(self, j):
        """Values chi_j(0..m-1) as complex floats, conjugation-symmetric by construction."""
        self._check_index(j)
        table = root_table(self.order)
        e = self.exponents[j]
        return np.where(e >= 0, table[np.maximum(e, 0)], 0)

    def is_real(self, j):
        return self.kinds[j] is not CharacterKind.COMPLEX

    def _check_index(self, j):
        if not 0 <= j < self.count:
            raise InvalidArgument(f"character index {j} out of range for modulus {self.modulus}")


@lru_cache(maxsize=None)
def root_table(L):
    """exp(2 pi i e / L) for e < L with conj(table[e]) == table[L - e] exactly."""
    e = np.arange(L)
    ang = 2 * np.pi * e / L
    c = np.cos(ang)
    s = np.sin(ang)
    half = (L + 1) // 2
    mirror = (L - e[1:half]) % L
    c[mirror] = c[1:half]
    s[mirror] = -s[1:half]
    # exact values at the quarter points
    for k, (cv, sv) in {0: (1.0, 0.0), 1: (0.0, 1.0), 2: (-1.0, 0.0), 3: (0.0, -1.0)}.items():
        if (k * L) % 4 == 0:
            idx = k * L // 4
            c[idx], s[idx] = cv, sv
    out = c + 1j * s
    out.setflags(write=False)
    return out


@lru_cache(maxsize=256)
def character_table(m):
    """Exact character table of (Z/mZ)^x."""
    group = build_unit_group(m)
    m = group.modulus
    r = len(group.orders)
    L = lcm(*group.orders) if r else 1

    # discrete logs by enumerating generator powers
    dlog = np.full((m, r), -1, dtype=np.int64)
    for ks in product(*(range(o) for o in group.orders)):
        dlog[group.element(ks)] = ks
    coprime = np.array([gcd(a, m) == 1 for a in range(m)])

    vectors = list(product(*(range(o) for o in group.orders)))
    J = np.array(vectors, dtype=np.int64).reshape(len(vectors), r)
    scale = np.array([L // o for o in group.orders], dtype=np.int64)
    exps = (J * scale) @ np.where(dlog >= 0, dlog, 0).T % L if r else np.zeros((1, m), dtype=np.int64)
    exps = np.where(coprime[None, :], exps, -1).astype(np.int64)
    exps.setflags(write=False)

    index = {v: i for i, v in enumerate(vectors)}
    kinds, conj = [], []
    for v in vectors:
        cv = tuple((-x) % o for x, o in zip(v, group.orders))
        conj.append(index[cv])
        if not any(v):
            kinds.append(CharacterKind.PRINCIPAL)
        elif cv == v:
            kinds.append(CharacterKind.REAL)
        else:
            kinds.append(CharacterKind.COMPLEX)
    return CharacterTable(m, L, group, exps, tuple(vectors), tuple(kinds), tuple(conj))


def evaluate_character(table, j, a):
    """chi_j(a) as an exact cyclotomic number (zero off the units)."""
    return table.value(j, a)


def _exponent_histogram(groups, exps, L):
    # groups: (rows,) labels; exps: same shape; returns (nlabels, L) int counts
    n = int(groups.max()) + 1 if groups.size else 0
    flat = np.bincount((groups * L + exps).ravel(), minlength=n * L)
    return flat.reshape(n, L)


def orthogonality_holds(table):
    """Exact check of sum_a chi_i(a) conj(chi_j(a)) == phi(m) [i == j] for all pairs."""
    L = table.order
    E = table.exponents[:, table.units]
    n = table.count
    D = (E[:, None, :] - E[None, :, :]) % L
    pair = np.arange(n * n).reshape(n, n)[:, :, None]
    counts = _exponent_histogram(np.broadcast_to(pair, D.shape), D, L)
    reduced = counts @ reduction_matrix(L)
    expected = np.zeros_like(reduced)
    expected[np.arange(n) * (n + 1), 0] = table.group.phi
    return bool(np.array_equal(reduced, expected))


@dataclass(frozen=True)
class ResidueSet:
    """Nonempty set S of units mod m; residues are stored in 1..m."""

    modulus: int
    members: frozenset

    def __init__(self, modulus, members):
        m = _check_modulus(modulus)
        reduced = set()
        for a in members:
            a = int(a)
            if gcd(a, m) != 1:
                raise InvalidArgument(f"{a} is not coprime to {m}")
            reduced.add((a - 1) % m + 1)
        if not reduced:
            raise InvalidArgument("residue set must be nonempty")
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "members", frozenset(reduced))

    @classmethod
    def full(cls, m):
        m = _check_modulus(m)
        return cls(m, [a for a in range(1, m + 1) if gcd(a, m) == 1])

    def __contains__(self, n):
        return (n - 1) % self.modulus + 1 in self.members

    def sorted(self):
        return sorted(self.members)

    def mask(self, x):
        """Boolean array over 0..x flagging n with n mod m in S."""
        n = np.arange(x + 1)
        res = (n - 1) % self.modulus + 1
        lookup = np.zeros(self.modulus + 1, dtype=bool)
        lookup[list(self.members)] = True
        out = lookup[res]
        out[0] = False
        return out


@dataclass(frozen=True)
class DecompositionReport:
    modulus: int
    members: tuple
    coefficients: tuple
    numeric: tuple
    kinds: tuple
    verdict: Branch
    witness: int | None

    def real_coefficient(self, j):
        return self.coefficients[j].rational_value()

    def to_dict(self):
        coeffs = []
        for j, (c, z, kind) in enumerate(zip(self.coefficients, self.numeric, self.kinds)):
            entry = {"index": j, "kind": kind.value, "re": repr(z.real), "im": repr(z.imag)}
            if c.is_rational():
                entry["exact"] = str(c.rational_value())
            coeffs.append(entry)
        return {
            "modulus": self.modulus,
            "set": list(self.members),
            "coefficients": coeffs,
            "verdict": self.verdict.value,
            "witness": self.witness,
        }


def _coefficient_counts(table, S):
    # counts[chi, e] = #{a in S : conj(chi(a)) = zeta**e}
    L = table.order
    cols = np.array([a % table.modulus for a in S])
    E = (-table.exponents[:, cols]) % L
    rows = np.broadcast_to(np.arange(table.count)[:, None], E.shape)
    return _exponent_histogram(rows, E, L)


def _reconstruction_holds(table, S, counts):
    # sum_chi c_chi chi(a) == 1_S(a) on units, with c_chi = counts[chi]/phi
    L = table.order
    units = table.units
    E = table.exponents[:, units]
    shifted = (np.arange(L)[None, None, :] + E[:, :, None]) % L
    labels = np.broadcast_to(np.arange(len(units))[None, :, None], shifted.shape)
    weights = np.broadcast_to(counts[:, None, :], shifted.shape)
    flat = np.bincount((labels * L + shifted).ravel(), weights=weights.ravel().astype(np.float64),
                       minlength=len(units) * L)
    totals = np.rint(flat).astype(np.int64).reshape(len(units), L)
    reduced = totals @ reduction_matrix(L)
    expected = np.zeros_like(reduced)
    in_s = np.array([(int(a) - 1) % table.modulus + 1 in S for a in units])
    expected[in_s, 0] = table.group.phi
    return bool(np.array_equal(reduced, expected))


def decompose_indicator(rs):
    """Character expansion of the indicator of ``rs`` with the branch verdict."""
    table = character_table(rs.modulus)
    S = rs.sorted()
    counts = _coefficient_counts(table, S)
    if not _reconstruction_holds(table, set(S), counts):
        raise ArithmeticError(f"indicator reconstruction failed for m={rs.modulus}")
    scale = Fraction(1, table.group.phi)
    coeffs = tuple(CyclotomicNumber.from_exponent_counts(table.order, counts[j], scale)
                   for j in range(table.count))
    roots = root_table(table.order)
    numeric = tuple(complex(counts[j] @ roots) / table.group.phi for j in range(table.count))

    witness = None
    for j, (c, kind) in enumerate(zip(coeffs, table.kinds)):
        if kind is CharacterKind.COMPLEX:
            bad = not c.is_zero()
        else:
            bad = c.rational_value() < 0
        if bad:
            witness = j
            break
    verdict = Branch.DECAY if witness is None else Branch.BOUNDED_BELOW
    return DecompositionReport(rs.modulus, tuple(S), coeffs, numeric, table.kinds, verdict, witness)


def classify_branch(rs):
    """Return (verdict, witness index or None)."""
    report = decompose_indicator(rs)
    return report.verdict, report.witness
