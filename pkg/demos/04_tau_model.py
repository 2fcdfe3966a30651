"""Random Sato-Tate angles in place of the Hecke eigenvalues of Delta."""

import numpy as np

from rmflab.multiplicative import build_spf_sieve
from rmflab.tau import HeckeWeight, sample_tau_angles, tau_partial_sum, tau_series

t = tau_series(12)
print("tau(1..12):", list(t.coefficients))
print("tau(6) = tau(2) tau(3):", t[6] == t[2] * t[3])

sieve = build_spf_sieve(10**5)
vals = []
for trial in range(200):
    angles = sample_tau_angles(5, trial, sieve)
    vals.append(tau_partial_sum(angles, sieve, HeckeWeight(11), 10**5).value)
vals = np.array(vals)
print(f"I_x at x=1e5 over 200 trials: mean {vals.mean():.3f}, share negative {np.mean(vals < 0):.3f}")
