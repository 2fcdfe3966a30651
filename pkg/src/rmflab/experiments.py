"""Monte Carlo estimates of P(sum < 0) for the three models, plus diagnostics.

Trials are independent: trial t of a run with master seed s draws every
random coordinate from the stream keyed (s, t, ...), so any partition of the
trials over worker processes gives the same counts.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import exp, fsum, isfinite, log, sqrt
import os
import warnings

import numpy as np

from .characters import CharacterKind, ResidueSet, character_table, decompose_indicator
from .cyclotomic import (ideal_split, prime_ideal_slots, sample_ideal_signs)
from .errors import InvalidArgument, ResourceLimit, UnsupportedModel
from .multiplicative import (UNIT_ROUNDOFF, SignAssignment, build_spf_sieve,
                             completely_multiplicative_table, exact_weighted_sum,
                             partial_sum, sample_signs, smooth_tail_sum, steer_signs,
                             truncated_euler_product)
from .tau import HeckeWeight, sample_tau_angles, multiplicative_values, tau_split

DEFAULT_Z = 1.96
MAX_EXHAUSTIVE_COORDINATES = 20


@dataclass(frozen=True)
class ResidueModel:
    residues: ResidueSet

    @classmethod
    def of(cls, m, members):
        return cls(ResidueSet(m, members))

    @property
    def label(self):
        S = "+".join(str(a) for a in self.residues.sorted())
        return f"residue:m={self.residues.modulus}:S={S}"


@dataclass(frozen=True)
class CyclotomicModel:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidArgument(f"field index must be a positive integer, got {self.n!r}")

    @property
    def label(self):
        return f"cyclotomic:n={self.n}"


@dataclass(frozen=True)
class TauModel:
    weight: HeckeWeight = field(default_factory=HeckeWeight)

    @property
    def label(self):
        return f"tau:weight={self.weight.m}"


@dataclass(frozen=True)
class Steering:
    """Replace f on primes p = a mod m by the greedy fragment aimed at z."""

    z: float
    a: int
    m: int


@dataclass(frozen=True)
class TrialConfig:
    model: object
    x_grid: tuple
    trials: int
    seed: int
    steering: Steering | None = None
    z_score: float = DEFAULT_Z

    def __post_init__(self):
        grid = tuple(int(x) for x in self.x_grid)
        object.__setattr__(self, "x_grid", grid)
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise InvalidArgument(f"trial count must be >= 1, got {self.trials!r}")
        if not grid or any(x < 1 for x in grid) or any(a >= b for a, b in zip(grid, grid[1:])):
            raise InvalidArgument(f"x grid must be strictly ascending positive integers, got {grid}")
        if not isinstance(self.model, (ResidueModel, CyclotomicModel, TauModel)):
            raise InvalidArgument(f"unknown model {self.model!r}")
        if self.steering is not None and not isinstance(self.model, ResidueModel):
            raise InvalidArgument("steering applies to the residue model only")
        if not self.z_score > 0:
            raise InvalidArgument("z-score must be positive")


@dataclass(frozen=True)
class ProbabilityEstimate:
    x: int
    count: int
    trials: int
    p_hat: float
    wilson_lo: float
    wilson_hi: float

    @property
    def half_width(self):
        return (self.wilson_hi - self.wilson_lo) / 2


def wilson_interval(count, trials, z=DEFAULT_Z):
    """Wilson score interval for count successes out of trials, clamped to [0, 1]."""
    if not isinstance(trials, (int, np.integer)) or trials < 1:
        raise InvalidArgument(f"trials must be a positive integer, got {trials!r}")
    if not 0 <= count <= trials:
        raise InvalidArgument(f"count {count} outside [0, {trials}]")
    if not z > 0:
        raise InvalidArgument("z-score must be positive")
    p = count / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z / denom * sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    lo = 0.0 if count == 0 else min(max(0.0, center - half), p)
    hi = 1.0 if count == trials else max(min(1.0, center + half), p)
    return lo, hi


def hoeffding_bound(lam, sum_sq):
    """exp(-lam^2 / (2 sum a_k^2)) bounding P(sum a_k X_k >= lam) for Rademacher X_k."""
    if not lam > 0 or not sum_sq > 0:
        raise InvalidArgument("threshold and sum of squares must be positive")
    return exp(-lam * lam / (2 * sum_sq))


def decay_reference(x, C):
    """exp(-exp(ln x / (C ln ln x))), the double-exponential reference shape."""
    if not C > 0:
        raise InvalidArgument("C must be positive")
    if not x > exp(1.0) ** exp(1.0):
        raise InvalidArgument("x must exceed e^e so that ln ln x > 1")
    return exp(-exp(log(x) / (C * log(log(x)))))


# --- per-model trial evaluation -------------------------------------------------

class _ResidueEvaluator:
    def __init__(self, model, bound, steering=None):
        self.sieve = build_spf_sieve(max(bound, 2))
        self.n = np.flatnonzero(model.residues.mask(bound))
        self.weights = 1.0 / self.n
        self.fragment = None
        if steering is not None:
            self.fragment = steer_signs(steering.z, steering.a, steering.m, self.sieve)

    def signs(self, seed, trial):
        s = sample_signs(seed, trial, self.sieve)
        return self.fragment.apply(s) if self.fragment is not None else s

    def sums(self, seed, trial, grid):
        s = self.signs(seed, trial)
        f = completely_multiplicative_table(self.sieve, s.primes, s.values, self.sieve.bound)
        terms = (f[self.n] * self.weights).tolist()
        cuts = np.searchsorted(self.n, grid, side="right")
        return [fsum(terms[:c]) for c in cuts]


class _CyclotomicEvaluator:
    def __init__(self, model, bound):
        if bound < 2:
            bound = 2
        self.basis = prime_ideal_slots(model.n, bound)
        self.table = self.basis.ideals
        self.weights = 1.0 / self.table.norms

    def sums(self, seed, trial, grid):
        s = sample_ideal_signs(seed, trial, self.basis)
        terms = (self.table.signs(s.values) * self.weights).tolist()
        cuts = np.searchsorted(self.table.norms, grid, side="right")
        return [fsum(terms[:c]) for c in cuts]


class _TauEvaluator:
    def __init__(self, model, bound):
        self.sieve = build_spf_sieve(max(bound, 2))
        self.sieve.multiplicative_plan
        self.inv = 1.0 / np.arange(1, self.sieve.bound + 1)

    def sums(self, seed, trial, grid):
        a = sample_tau_angles(seed, trial, self.sieve)
        g, _ = multiplicative_values(self.sieve, a.primes, a.traces, self.sieve.bound)
        terms = (g[1:] * self.inv).tolist()
        return [fsum(terms[:x]) for x in grid]


def make_evaluator(config):
    bound = config.x_grid[-1]
    model = config.model
    if isinstance(model, ResidueModel):
        return _ResidueEvaluator(model, bound, config.steering)
    if isinstance(model, CyclotomicModel):
        if model.n > 1 and log(bound) > 0 and model.n >= log(max(bound, 3)) ** 4:
            warnings.warn(f"n = {model.n} is large compared with (ln x)^A for moderate A; "
                          "outside the regime of the cyclotomic decay estimate")
        return _CyclotomicEvaluator(model, bound)
    return _TauEvaluator(model, bound)


def trial_sums(config, trial, evaluator=None):
    """Partial sums of one trial at every grid point."""
    evaluator = evaluator or make_evaluator(config)
    return evaluator.sums(config.seed, trial, config.x_grid)


_worker = {}


def _init_worker(config):
    _worker["config"] = config
    _worker["evaluator"] = make_evaluator(config)


def _count_chunk(trials):
    config, ev = _worker["config"], _worker["evaluator"]
    counts = np.zeros(len(config.x_grid), dtype=np.int64)
    for t in trials:
        counts += np.array(ev.sums(config.seed, t, config.x_grid)) < 0
    return counts


def count_negatives(config, trials=None, evaluator=None):
    """Strictly negative outcomes per grid point over the given trial indices."""
    evaluator = evaluator or make_evaluator(config)
    trials = range(config.trials) if trials is None else trials
    counts = np.zeros(len(config.x_grid), dtype=np.int64)
    for t in trials:
        counts += np.array(evaluator.sums(config.seed, t, config.x_grid)) < 0
    return counts


def worker_count(requested=None):
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("RMF_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise InvalidArgument(f"RMF_THREADS must be an integer, got {cap!r}") from None
    return max(1, n)


def run_probability_experiment(config, workers=None):
    """One :class:`ProbabilityEstimate` per grid point."""
    workers = worker_count(workers)
    if workers == 1 or config.trials < 64:
        counts = count_negatives(config)
    else:
        bounds = np.linspace(0, config.trials, workers * 4 + 1).astype(int)
        chunks = [range(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(config,)) as pool:
            counts = sum(pool.map(_count_chunk, chunks))
    out = []
    for x, c in zip(config.x_grid, counts.tolist()):
        lo, hi = wilson_interval(c, config.trials, config.z_score)
        out.append(ProbabilityEstimate(x, c, config.trials, c / config.trials, lo, hi))
    return out


# --- exhaustive oracle ------------------------------------------------------------

def _sign_patterns(k, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)[:, None]
    return (1 - 2 * ((idx >> np.arange(k)) & 1)).astype(np.int8)


def exhaustive_small_probability(model, x, max_coordinates=MAX_EXHAUSTIVE_COORDINATES):
    """Exact P(sum < 0) by enumerating every sign pattern on the random coordinates."""
    if isinstance(model, TauModel):
        raise UnsupportedModel("the tau model has continuous randomness")
    if isinstance(model, ResidueModel):
        sieve = build_spf_sieve(max(int(x), 2))
        coords = sieve.primes_up_to(x)
        n = np.flatnonzero(model.residues.mask(x))
        spf, cof = sieve.spf, sieve.cofactor

        def values(pat):
            F = np.zeros((len(pat), x + 1), dtype=np.int8)
            F[:, 1] = 1
            F[:, coords] = pat
            for lvl in sieve.omega_levels:
                lvl = lvl[lvl <= x]
                F[:, lvl] = F[:, spf[lvl]] * F[:, cof[lvl]]
            return F[:, n]
        denominators = n
    elif isinstance(model, CyclotomicModel):
        if x < 2:
            return Fraction(0)
        basis = prime_ideal_slots(model.n, x)
        coords = basis.slots
        table = basis.ideals

        def values(pat):
            return table.batch_signs(pat)
        denominators = table.norms
    else:
        raise InvalidArgument(f"unknown model {model!r}")
    k = len(coords)
    if k > max_coordinates:
        raise ResourceLimit(f"{k} random coordinates exceed the exhaustive limit {max_coordinates}")
    w = 1.0 / np.asarray(denominators, dtype=np.float64)
    slack = 4 * UNIT_ROUNDOFF * len(w) * float(w.sum()) + 1e-300
    negative = 0
    total = 1 << k
    step = 1 << 14
    for start in range(0, total, step):
        pat = _sign_patterns(k, start, min(total, start + step))
        vals = values(pat)
        sums = vals @ w
        negative += int(np.count_nonzero(sums < -slack))
        for row in np.flatnonzero(np.abs(sums) <= slack):
            if exact_weighted_sum(denominators, vals[row]) < 0:
                negative += 1
    return Fraction(negative, total)


# --- split diagnostics --------------------------------------------------------------

@dataclass(frozen=True)
class SplitDiagnostics:
    """main - tail should equal direct up to ``residual`` (the part beyond the cap)."""

    main: object
    tail: object
    direct: object
    residual: object
    tail_terms: int
    exact: bool

    @property
    def difference(self):
        return self.main - self.tail - self.direct

    @property
    def holds(self):
        return abs(self.difference) <= self.residual


def _rational_upper(v):
    # rational number >= v for a non-negative float v
    return Fraction(int(np.ceil(v * 2**40)) + 1, 2**40)


def split_diagnostics(model, x, cap, seed=0, trial=0, exact=False, signs=None, traces=None):
    """Main term, truncated tail and direct sum for one trial of ``model`` at ``x``.

    Residue: truncated Euler products recombined with the indicator
    coefficients; cyclotomic: Y and Z over prime ideals; tau: I_{x,1} and
    I_{x,2}.  ``signs`` / ``traces`` override the sampled randomness.
    """
    if cap < x:
        cap = x
    if isinstance(model, ResidueModel):
        sieve = build_spf_sieve(max(int(x), 2))
        f = signs if signs is not None else sample_signs(seed, trial, sieve)
        report = decompose_indicator(model.residues)
        table = character_table(model.residues.modulus)
        main = tail = 0
        residual = Fraction(0) if exact else 0.0
        count = 0
        for j, (c, z) in enumerate(zip(report.coefficients, report.numeric)):
            if c.is_zero():
                continue
            st = smooth_tail_sum(f, table, j, x, cap, exact=exact)
            ep = truncated_euler_product(f, table, j, x, exact=exact)
            count += st.count
            if exact:
                main = c * ep + main
                tail = c * st.value + tail
                mag = abs(c.rational_value()) if c.is_rational() else _rational_upper(abs(z))
                residual += mag * st.residual
            else:
                main += z * ep
                tail += z * st.value
                residual += abs(z) * st.residual * (1 + 1e-12)
        direct = partial_sum(f, sieve, model.residues, x, exact=exact).value
        if exact:
            main, tail = main.rational_value(), tail.rational_value()
        else:
            main, tail = main.real, tail.real
            residual += 1e-12 * (1 + abs(main))
        return SplitDiagnostics(main, tail, direct, residual, count, exact)
    if isinstance(model, CyclotomicModel):
        basis = prime_ideal_slots(model.n, max(int(x), 2))
        s = signs if signs is not None else sample_ideal_signs(seed, trial, basis)
        sp = ideal_split(s, basis, x, cap, exact=exact)
        residual = sp.residual if exact else sp.residual + 1e-12 * (1 + abs(sp.main))
        return SplitDiagnostics(sp.main, sp.tail, sp.direct, residual, sp.count, exact)
    if isinstance(model, TauModel):
        sieve = build_spf_sieve(max(int(x), 2))
        primes = sieve.primes_up_to(x)
        if traces is None:
            if exact:
                raise InvalidArgument("exact tau diagnostics need explicit integer traces 2cos(theta)")
            traces = sample_tau_angles(seed, trial, sieve).traces
        sp = tau_split(primes, traces, x, cap, exact=exact)
        residual = sp.residual if exact else sp.residual + 1e-12 * (1 + abs(sp.main))
        return SplitDiagnostics(sp.main, sp.tail, sp.direct, residual, sp.count, exact)
    raise InvalidArgument(f"unknown model {model!r}")
