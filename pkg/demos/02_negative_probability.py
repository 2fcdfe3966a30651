"""Monte Carlo estimates of P(sum < 0) next to the double-exponential reference curve.

A Decay set stays near zero; the class 3 mod 4 stays near one half.
"""

from rmflab.experiments import (ResidueModel, TrialConfig, decay_reference,
                                run_probability_experiment)

grid = (10**2, 10**3, 10**4, 10**5)
for m, S in [(1, [1]), (5, [1, 4]), (4, [3])]:
    rows = run_probability_experiment(TrialConfig(ResidueModel.of(m, S), grid, 500, seed=2024))
    print(f"m={m} S={S}")
    for r in rows:
        print(f"    x={r.x:>6d}  p={r.p_hat:.3f}  [{r.wilson_lo:.3f}, {r.wilson_hi:.3f}]"
              f"  reference(C=1)={decay_reference(r.x, 1.0):.3e}")
