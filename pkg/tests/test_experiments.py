from fractions import Fraction
from math import exp, log
import random

import numpy as np
import pytest

from rmflab.errors import InvalidArgument, ResourceLimit, UnsupportedModel
from rmflab.experiments import (CyclotomicModel, ResidueModel, Steering, TauModel, TrialConfig,
                                count_negatives, decay_reference, exhaustive_small_probability,
                                hoeffding_bound, make_evaluator, run_probability_experiment,
                                split_diagnostics, trial_sums, wilson_interval, worker_count)
from rmflab.multiplicative import SignAssignment, build_spf_sieve, sample_signs
from rmflab.cyclotomic import IdealSignAssignment

import oracles


def test_wilson_examples():
    lo, hi = wilson_interval(0, 100, 1.96)
    assert lo == 0.0 and hi == pytest.approx(0.0370, abs=5e-5)
    lo, hi = wilson_interval(50, 100)
    assert (lo + hi) / 2 == pytest.approx(0.5, abs=1e-12)
    for k, T in [(3, 40), (0, 10), (10, 10), (7, 9)]:
        a = wilson_interval(k, T)
        b = wilson_interval(10 * k, 10 * T)
        assert b[1] - b[0] < a[1] - a[0]
        assert 0 <= a[0] <= k / T <= a[1] <= 1
    for bad in [(-1, 10), (11, 10), (0, 0)]:
        with pytest.raises(InvalidArgument):
            wilson_interval(*bad)


def test_hoeffding_and_decay_reference():
    assert hoeffding_bound(1, 1) == pytest.approx(0.60653, abs=1e-5)
    assert hoeffding_bound(1e-9, 1) == pytest.approx(1.0)
    with pytest.raises(InvalidArgument):
        hoeffding_bound(0, 1)
    xs = np.logspace(3, 9, 25)
    vals = [decay_reference(x, 1.0) for x in xs]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    inner = [log(x) / log(log(x)) for x in xs]  # exp(-exp(.)) underflows past x ~ 1e8
    assert all(a < b for a, b in zip(inner, inner[1:]))
    assert decay_reference(1e4, 2.0) > decay_reference(1e4, 1.0)
    assert decay_reference(1e6, 1) == pytest.approx(exp(-exp(log(1e6) / log(log(1e6)))), rel=1e-14)
    with pytest.raises(InvalidArgument):
        decay_reference(10, 1)


def test_config_validation():
    m = ResidueModel.of(1, [1])
    with pytest.raises(InvalidArgument):
        TrialConfig(m, (5,), 0, 1)
    with pytest.raises(InvalidArgument):
        TrialConfig(m, (10, 5), 3, 1)
    with pytest.raises(InvalidArgument):
        TrialConfig(TauModel(), (5,), 3, 1, steering=Steering(0.1, 1, 4))


def test_residue_x5_is_never_negative():
    rows = run_probability_experiment(TrialConfig(ResidueModel.of(1, [1]), (5,), 64, 0))
    assert rows[0].count == 0 and rows[0].p_hat == 0.0


def test_determinism_and_order_independence():
    cfg = TrialConfig(ResidueModel.of(4, [3]), (50, 500), 200, 17)
    a = run_probability_experiment(cfg, workers=1)
    assert a == run_probability_experiment(cfg, workers=1)
    order = list(range(200))
    random.Random(3).shuffle(order)
    assert count_negatives(cfg, order).tolist() == [r.count for r in a]
    assert run_probability_experiment(cfg, workers=2) == a


def test_worker_cap(monkeypatch):
    monkeypatch.setenv("RMF_THREADS", "2")
    assert worker_count(8) == 2
    monkeypatch.setenv("RMF_THREADS", "zero")
    with pytest.raises(InvalidArgument):
        worker_count()


def test_trial_sums_match_model_code():
    from rmflab.multiplicative import partial_sum, sample_signs
    from rmflab.characters import ResidueSet
    cfg = TrialConfig(ResidueModel.of(5, [1, 4]), (30, 900), 1, 5)
    sieve = build_spf_sieve(900)
    s = sample_signs(5, 0, sieve)
    want = [partial_sum(s, sieve, ResidueSet(5, [1, 4]), x).value for x in (30, 900)]
    assert trial_sums(cfg, 0) == want


def test_steering_shifts_mass():
    base = TrialConfig(ResidueModel.of(4, [3]), (2000,), 200, 2)
    steered = TrialConfig(ResidueModel.of(4, [3]), (2000,), 200, 2, steering=Steering(-0.6, 3, 4))
    assert run_probability_experiment(steered)[0].count > run_probability_experiment(base)[0].count


def test_exhaustive_examples():
    r1 = ResidueModel.of(1, [1])
    assert exhaustive_small_probability(r1, 5) == 0
    assert exhaustive_small_probability(r1, 2) == 0
    p = exhaustive_small_probability(CyclotomicModel(4), 5)
    assert isinstance(p, Fraction) and p.denominator in (1, 2, 4, 8)
    with pytest.raises(UnsupportedModel):
        exhaustive_small_probability(TauModel(), 5)
    with pytest.raises(ResourceLimit):
        exhaustive_small_probability(r1, 100)


@pytest.mark.parametrize("m,S,x", [(4, [3], 23), (3, [2], 19), (5, [2, 3], 17), (1, [1], 13)])
def test_exhaustive_matches_naive_enumeration(m, S, x):
    ps = oracles.naive_primes(x)
    neg = 0
    for bits in range(1 << len(ps)):
        signs = {p: -1 if bits >> i & 1 else 1 for i, p in enumerate(ps)}
        neg += oracles.naive_rm_sum(signs, x, m, S) < 0
    assert exhaustive_small_probability(ResidueModel.of(m, S), x) == Fraction(neg, 1 << len(ps))


def test_exhaustive_cyclotomic_n4_by_hand():
    # slots: norm 2, norm 5 (twice); ideals 1, 2, 4, 5a, 5b
    neg = 0
    for a in (1, -1):
        for b in (1, -1):
            for c in (1, -1):
                neg += 1 + a / 2 + 1 / 4 + b / 5 + c / 5 < 0
    assert exhaustive_small_probability(CyclotomicModel(4), 5) == Fraction(neg, 8)


def test_monte_carlo_consistency_meta():
    model = ResidueModel.of(4, [3])
    exact = float(exhaustive_small_probability(model, 29))
    assert 0 < exact < 1
    ev = make_evaluator(TrialConfig(model, (29,), 1, 0))
    inside = 0
    for seed in range(100):
        cfg = TrialConfig(model, (29,), 150, seed)
        k = int(count_negatives(cfg, evaluator=ev)[0])
        lo, hi = wilson_interval(k, 150, 3.0)
        inside += lo <= exact <= hi
    assert inside >= 99


def test_split_diagnostics_examples():
    sieve = build_spf_sieve(3)
    d = split_diagnostics(ResidueModel.of(1, [1]), 3, 10**6, exact=True,
                          signs=SignAssignment.constant(sieve))
    assert d.main == 3 and d.direct == Fraction(11, 6)
    assert abs(d.tail - Fraction(7, 6)) <= d.residual and d.holds

    x = 20
    res = split_diagnostics(ResidueModel.of(1, [1]), x, 10**6, seed=4, trial=1)
    f = sample_signs(4, 1, build_spf_sieve(x))
    cyc = split_diagnostics(CyclotomicModel(1), x, 10**6, signs=IdealSignAssignment(f.values))
    assert cyc.main == pytest.approx(res.main, rel=1e-14)
    assert cyc.direct == pytest.approx(res.direct, abs=1e-15)
    assert cyc.tail == pytest.approx(res.tail, abs=1e-13)

    tau = split_diagnostics(TauModel(), 4, 10**6, exact=True, traces=[0, 0])
    assert tau.main == Fraction(18, 25) and tau.holds


@pytest.mark.parametrize("model", [ResidueModel.of(5, [1]), ResidueModel.of(7, [1, 2, 4]),
                                   CyclotomicModel(5), TauModel()])
def test_split_diagnostics_random_trials_hold(model):
    for t in range(3):
        d = split_diagnostics(model, 11, 10**6, seed=1, trial=t)
        assert d.holds and d.residual < 1e-2


def test_large_field_warns():
    with pytest.warns(UserWarning):
        make_evaluator(TrialConfig(CyclotomicModel(4000), (50,), 1, 0))
