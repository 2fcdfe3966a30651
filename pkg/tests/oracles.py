"""Independent reference computations (slow, direct, no shared code paths)."""

from fractions import Fraction
from math import gcd, isqrt


def trial_factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def naive_primes(x):
    return [p for p in range(2, x + 1) if all(p % d for d in range(2, isqrt(p) + 1))]


def units(m):
    return [a for a in range(1, m + 1) if gcd(a, m) == 1]


def naive_order(a, m):
    k, v = 1, a % m
    while v != 1 % m:
        v = v * a % m
        k += 1
    return k


def real_characters(m):
    """Every homomorphism (Z/m)^x -> {+1, -1}, as dicts on 1..m.

    The squares H are exactly the common kernel, so such maps are the
    characters of the elementary abelian group G/H; build a basis of G/H
    greedily and read each element's coordinates off the closure.
    """
    G = units(m)
    H = {a * a % m or m for a in G}
    coords = {h: 0 for h in H}
    rank = 0
    for a in G:
        if a in coords:
            continue
        new = {}
        for g, v in coords.items():
            new[g * a % m or m] = v | (1 << rank)
        coords.update(new)
        rank += 1
    assert len(coords) == len(G)
    chars = []
    for s in range(1 << rank):
        chars.append({g: -1 if bin(v & s).count("1") % 2 else 1 for g, v in coords.items()})
    return chars, H


def branch_oracle(m, S):
    """'Decay' iff 1_S is a non-negative combination of real characters only.

    Complex coefficients all vanish exactly when 1_S is constant on the cosets
    of the squares; the real coefficients are then (1/phi) sum_{a in S} psi(a).
    """
    S = {a % m or m for a in S}
    chars, H = real_characters(m)
    G = units(m)
    for g in G:
        coset = {g * h % m or m for h in H}
        if len(coset & S) not in (0, len(coset)):
            return "BoundedBelow"
    phi = len(G)
    for psi in chars:
        if Fraction(sum(psi[a] for a in S), phi) < 0:
            return "BoundedBelow"
    return "Decay"


def kronecker_minus4(d):
    return 0 if d % 2 == 0 else (1 if d % 4 == 1 else -1)


def kronecker_minus3(d):
    return 0 if d % 3 == 0 else (1 if d % 3 == 1 else -1)


def divisor_sum_counts(chi, x):
    """#{ideals of norm <= k} for k = 1..x in a quadratic field: sum_{k} sum_{d | k} chi(d)."""
    per = [0] * (x + 1)
    for d in range(1, x + 1):
        c = chi(d)
        if c:
            for k in range(d, x + 1, d):
                per[k] += c
    out, run = [], 0
    for k in range(1, x + 1):
        run += per[k]
        out.append(run)
    return out


def naive_rm_sum(signs, x, m=1, S=(1,)):
    """sum over n <= x, n mod m in S of f(n)/n, f completely multiplicative from prime signs."""
    S = {a % m for a in S}
    total = Fraction(0)
    for n in range(1, x + 1):
        if n % m not in S:
            continue
        v = 1
        for p, k in trial_factor(n).items():
            v *= signs[p] ** k
        total += Fraction(v, n)
    return total


def naive_delta(N):
    """tau(1..N) by expanding q * prod (1 - q^k)^24 term by term."""
    poly = [0] * N
    poly[0] = 1
    for k in range(1, N):
        for _ in range(24):
            for i in range(N - 1, k - 1, -1):
                poly[i] -= poly[i - k]
    return poly  # coefficient of q^(i+1) is poly[i]


def naive_ideal_count(n, x):
    """Count ideals of Q(zeta_n) of norm <= x from the Euler product of zeta_K.

    Uses per-prime (f, r) from brute-force orders and a direct coefficient
    product over primes; ramified primes get e = phi(p^v) but still r ideals
    of norm p^f.
    """
    coeffs = [0] * (x + 1)
    coeffs[1] = 1
    for p in naive_primes(x):
        v, rest = 0, n
        while rest % p == 0:
            rest //= p
            v += 1
        f = naive_order(p, rest) if rest > 1 else 1
        phi_n = len(units(n)) if n > 1 else 1
        phi_pv = (p - 1) * p ** (v - 1) if v else 1
        r = phi_n // (phi_pv * f)
        q = p**f
        for _ in range(r):
            # multiply the Dirichlet series by 1 / (1 - q^-s)
            new = coeffs[:]
            for k in range(1, x + 1):
                if coeffs[k]:
                    j = k * q
                    while j <= x:
                        new[j] += coeffs[k]
                        j *= q
            coeffs = new
    return sum(coeffs)
