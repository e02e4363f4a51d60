"""Rational approximation of (q/p)^c for prime pairs.

Run:  python notebooks/03_ratio_powers.py

First a single ratio: its continued fraction at high precision and the
best approximation with bounded denominator.  Then the census over a
dyadic window of primes, which shows that with denominators up to 50 most
pairs are within 1e-3 of some rational; the share drops quickly with eps.
"""
from psthue.arith import primes_in_window, sieve
from psthue.diophantine import (
    bad_pair_census, best_rational_error, continued_fraction, ratio_power, ratio_power_expsum,
)

g = ratio_power(4099, 4111, 1.5)
cf = continued_fraction(g, 10**12)
print(f"(4111/4099)^1.5 = {g}")
print("partial quotients:", list(cf.quotients))
best = best_rational_error(g, 50)
print(f"best h1/h2 with h2 <= 50: {best.h1}/{best.h2}, error {best.err:.3e}")

w = primes_in_window(sieve(2**13), 12, 0.999, 2.0**26)
print(f"\nprimes in (2^12, 2^13]: {len(w)}")
for eps in (1e-3, 3e-4, 1e-4, 3e-5, 1e-5):
    r = bad_pair_census(w, 1.5, eps, 50)
    print(f"  eps={eps:.0e}: {r.bad_pairs} of {r.total_pairs} ordered pairs ({r.fraction:.3f})")

print("\n|sum_{m,n in (2^k, 2^{k+1}]} e((n/m)^1.5)| / 4^k")
for k in range(4, 11):
    print(f"  k={k:2d}: {ratio_power_expsum(1, k, 1.5).normalized:.4f}")
