"""Small integer helpers: factorization, totient, multiplicative order."""

from math import gcd, isqrt
from functools import reduce

from .errors import InvalidArgument


def factorize(n):
    """Return the prime factorization of ``n`` as a sorted list of (p, k)."""
    if n < 1:
        raise InvalidArgument(f"cannot factor {n}")
    out = []
    for p in (2, 3):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    for p in range(5, isqrt(n) + 1, 6):
        if n % p == 0 or n % (p + 2) == 0:
            return False
    return True


def totient(n):
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def lcm(*values):
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


def multiplicative_order(a, n):
    """Least k >= 1 with a**k == 1 (mod n).

    Starts from the group exponent phi(n) and strips prime factors while the
    power stays 1, so only O(log n) modular exponentiations are needed.
    """
    if n < 1:
        raise InvalidArgument("modulus must be positive")
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise InvalidArgument(f"{a} is not a unit mod {n}")
    order = totient(n)
    for p, _ in factorize(order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def primes_up_to(x):
    """Plain list of primes <= x (Eratosthenes on a bytearray)."""
    if x < 2:
        return []
    mark = bytearray([1]) * (x + 1)
    mark[0] = mark[1] = 0
    for p in range(2, isqrt(x) + 1):
        if mark[p]:
            mark[p * p :: p] = bytearray(len(range(p * p, x + 1, p)))
    return [i for i in range(x + 1) if mark[i]]
