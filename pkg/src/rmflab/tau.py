"""Random Hecke-eigenvalue model and the Ramanujan tau fixture.

With rho(p) = 2 p^(m/2) cos(theta_p) and the Hecke recurrence
rho(p^(k+1)) = rho(p) rho(p^k) - p^m rho(p^(k-1)), the normalized values
rho(p^k) / p^(mk/2) are the Chebyshev values U_k(cos theta_p), so

    I_x = sum_{n <= x} rho(n) / n^((m+2)/2) = sum_{n <= x} g(n) / n

with g multiplicative and g(p^k) = U_k(cos theta_p).  The weight m drops
out entirely; it is carried as a label only.  Angles follow the Sato-Tate
law with density (2/pi) sin^2(theta) on (0, pi).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import fsum, log, pi, prod
import math

import numpy as np

from .errors import InvalidArgument
from .multiplicative import UNIT_ROUNDOFF, PartialSumResult, _check_bound
from . import rng

ANGLE_TOLERANCE = 1e-12


def sato_tate_cdf(theta):
    """P(theta_p < theta) = (2 theta - sin 2 theta) / (2 pi)."""
    t = np.asarray(theta, dtype=np.float64)
    if np.any((t < 0) | (t > pi)) or np.any(np.isnan(t)):
        raise InvalidArgument("angle must lie in [0, pi]")
    out = (2 * t - np.sin(2 * t)) / (2 * pi)
    out = np.where(t == pi, 1.0, out)
    return float(out) if out.ndim == 0 else out


def sato_tate_pdf(theta):
    return 2 / pi * np.sin(theta) ** 2


def sample_angles(u, tol=ANGLE_TOLERANCE, max_iter=100):
    """Invert the Sato-Tate CDF elementwise (bracketed Newton, bisection fallback)."""
    u = np.asarray(u, dtype=np.float64)
    if np.any(~((u > 0) & (u < 1))):
        raise InvalidArgument("uniform variates must lie in (0, 1)")
    theta = pi * u
    lo = np.zeros_like(u)
    hi = np.full_like(u, pi)
    live = np.arange(u.size)
    flat_t, flat_u, flat_lo, flat_hi = theta.ravel(), u.ravel(), lo.ravel(), hi.ravel()
    for _ in range(max_iter):
        t = flat_t[live]
        resid = (2 * t - np.sin(2 * t)) / (2 * pi) - flat_u[live]
        done = np.abs(resid) < tol / 4
        flat_lo[live] = np.where(resid < 0, t, flat_lo[live])
        flat_hi[live] = np.where(resid > 0, t, flat_hi[live])
        slope = 2 / pi * np.sin(t) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            step = t - resid / slope
        l, h = flat_lo[live], flat_hi[live]
        bad = ~np.isfinite(step) | (step <= l) | (step >= h)
        step = np.where(bad, 0.5 * (l + h), step)
        flat_t[live] = np.where(done, t, step)
        live = live[~done & (h - l > 4 * np.spacing(np.maximum(h, 1e-300)))]
        if not live.size:
            break
    out = flat_t.reshape(u.shape)
    return float(out) if out.ndim == 0 else out


def sample_angle(u):
    """theta with F(theta) = u for a single uniform u in (0, 1)."""
    return float(sample_angles(np.float64(u)))


def rho_normalized(k, theta):
    """U_k(cos theta) = rho(p^k) / p^(mk/2), by the three-term recurrence."""
    if k < 0:
        raise InvalidArgument("exponent must be non-negative")
    t = 2 * np.cos(theta)
    prev, cur = np.zeros_like(t), np.ones_like(t)
    for _ in range(k):
        prev, cur = cur, t * cur - prev
    return float(cur) if np.ndim(cur) == 0 else cur


def chebyshev_values(trace, kmax):
    """[U_0, ..., U_kmax] at 2 cos theta = ``trace`` (exact if ``trace`` is)."""
    out = [trace * 0 + 1]
    prev = trace * 0
    for _ in range(kmax):
        prev, nxt = out[-1], trace * out[-1] - prev
        out.append(nxt)
    return out


@dataclass(frozen=True)
class HeckeWeight:
    m: int = 11

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise InvalidArgument(f"Hecke weight must be a non-negative integer, got {self.m!r}")


@dataclass(frozen=True, eq=False)
class AngleAssignment:
    """theta_p for every prime p <= bound (aligned with ``primes``)."""

    bound: int
    primes: np.ndarray
    theta: np.ndarray
    seed: int | None = None
    trial: int | None = None

    @property
    def traces(self):
        """2 cos theta_p."""
        return 2 * np.cos(self.theta)

    @classmethod
    def constant(cls, sieve, theta):
        return cls(sieve.bound, sieve.primes, np.full(len(sieve.primes), float(theta)))


def sample_tau_angles(seed, trial, sieve):
    """Sato-Tate angles keyed by (seed, trial, p)."""
    key = rng.stream_key(seed, trial, rng.TAU_ANGLES)
    u = rng.to_uniform(rng.draw(key, sieve.primes))
    return AngleAssignment(sieve.bound, sieve.primes, sample_angles(u), seed, trial)


def multiplicative_values(sieve, primes, traces, x, track_error=False):
    """g(n) for n <= x with g(p^k) = U_k(trace_p / 2); optional running error bound."""
    spf = sieve.spf
    k_arr, rest = sieve.prime_power_split
    power_levels, mixed = sieve.multiplicative_plan
    g = np.zeros(x + 1)
    g[1] = 1.0
    tp = np.zeros(x + 1)
    cut = np.searchsorted(primes, x, side="right")
    tp[primes[:cut]] = traces[:cut]
    g[primes[:cut]] = traces[:cut]
    err = np.zeros(x + 1) if track_error else None
    for lvl in power_levels:
        lvl = lvl[: np.searchsorted(lvl, x, side="right")]
        if not lvl.size:
            break
        p = spf[lvl].astype(np.int64)
        a, b = g[lvl // p], g[lvl // (p * p)]
        t = tp[p]
        g[lvl] = t * a - b
        if track_error:
            err[lvl] = (np.abs(t) * err[lvl // p] + err[lvl // (p * p)]
                        + UNIT_ROUNDOFF * (np.abs(t * a) + np.abs(b) + np.abs(g[lvl])))
    for lvl in mixed:
        lvl = lvl[: np.searchsorted(lvl, x, side="right")]
        if not lvl.size:
            break
        r = rest[lvl]
        a, b = g[lvl // r], g[r]
        g[lvl] = a * b
        if track_error:
            err[lvl] = (np.abs(a) * err[r] + np.abs(b) * err[lvl // r]
                        + UNIT_ROUNDOFF * np.abs(g[lvl]))
    return g, err


def tau_partial_sum(angles, sieve, weight, x):
    """I_x^(m) for the random model; identical for every weight m."""
    if not isinstance(weight, HeckeWeight):
        weight = HeckeWeight(weight)
    _check_bound(x, sieve)
    if x > angles.bound:
        raise InvalidArgument(f"x = {x} exceeds angle assignment bound {angles.bound}")
    g, err = multiplicative_values(sieve, angles.primes, angles.traces, x, track_error=True)
    n = np.arange(1, x + 1)
    terms = g[1:] / n
    value = fsum(terms.tolist())
    bound = fsum((err[1:] / n).tolist()) + UNIT_ROUNDOFF * (fsum(np.abs(terms).tolist()) + abs(value))
    return PartialSumResult(x, value, x, 2 * bound)


def _smooth_with_powers(primes, N, power_values, dtypes):
    # n <= N built from primes, with a multiplicative label given on prime powers
    n = np.array([1], dtype=np.int64)
    lab = [np.array([1], dtype=dt) for dt in dtypes]
    for i, p in enumerate(primes):
        p = int(p)
        parts_n, parts_l = [n], [[a] for a in lab]
        pk, k = p, 1
        while pk <= N:
            keep = n <= N // pk
            if not keep.any():
                break
            parts_n.append(n[keep] * pk)
            for acc, a, vals in zip(parts_l, lab, power_values):
                acc.append(a[keep] * vals[i][k])
            pk *= p
            k += 1
        n = np.concatenate(parts_n)
        lab = [np.concatenate(a) for a in parts_l]
    order = np.argsort(n, kind="stable")
    return n[order], [a[order] for a in lab]


@dataclass(frozen=True)
class TauSplit:
    main: object
    tail: object
    direct: object
    residual: object
    count: int


def _local_majorant(absvals, p):
    # sum_k |U_k| p^-k from the listed terms plus sum_{k > K} (k+1) p^-k in closed form
    K = len(absvals) - 1
    r = Fraction(1, p) if isinstance(absvals[0], Fraction) else 1.0 / p
    head = sum((v * r**k for k, v in enumerate(absvals)), start=r * 0)
    tail = r ** (K + 1) * ((K + 2) - (K + 1) * r) / (1 - r) ** 2
    return head + tail


def tau_split(primes, traces, x, N, exact=False):
    """I_{x,1} (Euler product), I_{x,2} (x-smooth n in (x, N]) and I_x directly.

    ``residual`` bounds the omitted n > N part by
    prod_p sum_k |U_k| / p^k - sum_{smooth n <= N} |g(n)| / n, where the local
    sums are majorized using |U_k| <= k + 1 beyond the enumerated exponents.
    """
    if N < x:
        raise InvalidArgument(f"enumeration cap N = {N} is below x = {x}")
    primes = [int(p) for p in primes if p <= x]
    traces = list(traces)[: len(primes)]
    kmax = [int(log(N) / log(p)) + 1 for p in primes]
    if exact:
        traces = [Fraction(t) for t in traces]
        g_pows = [np.array(chebyshev_values(t, k), dtype=object) for t, k in zip(traces, kmax)]
    else:
        traces = [float(t) for t in traces]
        g_pows = [np.array(chebyshev_values(t, k)) for t, k in zip(traces, kmax)]
    n, (g,) = _smooth_with_powers(primes, N, [g_pows], [object if exact else np.float64])
    tail = n > x
    majorant = prod((_local_majorant([abs(v) for v in gp], p) for gp, p in zip(g_pows, primes)),
                    start=Fraction(1) if exact else 1.0)
    if exact:
        D = prod(p ** k for p, k in zip(primes, kmax))
        main = prod((1 / (1 - t / p + Fraction(1, p * p)) for p, t in zip(primes, traces)), start=Fraction(1))
        num_tail = sum(v * (D // int(k)) for v, k in zip(g[tail], n[tail]))
        num_head = sum(v * (D // int(k)) for v, k in zip(g[~tail], n[~tail]))
        seen = sum(abs(v) * (D // int(k)) for v, k in zip(g, n)) / Fraction(D)
        return TauSplit(main, Fraction(num_tail) / D, Fraction(num_head) / D, majorant - seen, int(tail.sum()))
    main = math.exp(-fsum(math.log1p(-t / p + 1 / (p * p)) for p, t in zip(primes, traces)))
    tail_v = fsum((g[tail] / n[tail]).tolist())
    head_v = fsum((g[~tail] / n[~tail]).tolist())
    seen = fsum((np.abs(g) / n).tolist())
    residual = max(majorant - seen, 0.0) + 64 * UNIT_ROUNDOFF * majorant
    return TauSplit(main, tail_v, head_v, residual, int(tail.sum()))


@dataclass(frozen=True)
class TauFixture:
    length: int
    coefficients: tuple

    def __getitem__(self, n):
        """tau(n), 1-based."""
        if not 1 <= n <= self.length:
            raise IndexError(n)
        return self.coefficients[n - 1]

    def to_text(self):
        return "".join(f"{c}\n" for c in self.coefficients)


def tau_series(N):
    """tau(1..N) exactly, from q * prod_k (1 - q^k)^24.

    Uses prod_k (1 - q^k)^3 = sum_j (-1)^j (2j + 1) q^(j(j+1)/2) and seven
    exact multiplications by that sparse series.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidArgument(f"length must be a positive integer, got {N!r}")
    N = int(N)
    sparse = []
    j = 0
    while j * (j + 1) // 2 < N:
        sparse.append((j * (j + 1) // 2, (-1) ** j * (2 * j + 1)))
        j += 1
    cube = np.zeros(N, dtype=object)
    cube[:] = 0
    for d, c in sparse:
        cube[d] = c
    acc = cube
    for _ in range(7):
        nxt = np.zeros(N, dtype=object)
        nxt[:] = 0
        for d, c in sparse:
            nxt[d:] += c * acc[: N - d]
        acc = nxt
    return TauFixture(N, tuple(int(c) for c in acc))
