"""How rational primes split in Q(zeta_n), and the resulting ideal sums."""

from rmflab.cyclotomic import (count_ideals, ideal_partial_sum, prime_ideal_slots,
                               sample_ideal_signs, splitting_type)
from rmflab.experiments import CyclotomicModel, split_diagnostics

n = 12
print(f"splitting in Q(zeta_{n}):  p  v  e  f  r  norm")
for p in (2, 3, 5, 7, 11, 13, 37):
    print("                         ", *splitting_type(n, p).as_row())

for k in (1, 3, 4, 5, 12):
    print(f"ideals of norm <= 1000 in Q(zeta_{k}): {count_ideals(k, 1000)}")

basis = prime_ideal_slots(4, 10**4)
for trial in range(3):
    s = sample_ideal_signs(1, trial, basis)
    print(f"trial {trial}: S_x over Z[i] at x=1e4 is {ideal_partial_sum(s, basis, 10**4).value:+.5f}")

d = split_diagnostics(CyclotomicModel(4), 20, 10**6, seed=1, trial=0)
print(f"Y = {d.main:.6f}, Z = {d.tail:.6f}, Y - Z - S = {d.difference:.2e} (residual {d.residual:.2e})")
