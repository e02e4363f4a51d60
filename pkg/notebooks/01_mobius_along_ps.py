"""Möbius sums twisted by the Thue-Morse sign along floor(n^c).

Run:  python notebooks/01_mobius_along_ps.py

Prints the normalised partial sums at ten checkpoints for a few exponents,
then the pattern statistics that sit behind them: joint frequencies for a
prime pair and the length-4 window frequencies of the sequence itself.
"""
from psthue.arith import sieve
from psthue.experiments import (
    ExperimentConfig, mobius_orthogonality, normality_stats, pattern_frequencies,
)

N = 10**6
table = sieve(N)

print("sum_{n<=x} mu(n) (-1)^t(floor(n^c)) / x")
for c in (1.2, 1.5, 1.8):
    r = mobius_orthogonality(ExperimentConfig(c=c, N=N), table=table)
    row = "  ".join(f"{v / n:+.1e}" for n, v in r.partials)
    print(f"c={c}:  {row}")
    # the signed sum splits into the Mertens function and the 0/1 sum
    print(f"        M(N)={r.mertens}, sum_01={r.sum_01}, sum_pm={r.sum_pm}")

print("\njoint frequencies of (t(floor((11n)^1.3)), t(floor((13n)^1.3))), n in (N, 2N]")
pf = pattern_frequencies(11, 13, ExperimentConfig(c=1.3, N=N))
for pat, cnt in sorted(pf.counts.items()):
    print(f"  {pat}: {cnt / N:.5f}")

print("\nlength-4 windows of t(floor(n^1.3)), n <= 1e6")
nt = normality_stats(1.3, 4, N)
print(f"  distinct {nt.distinct} of 16, largest deviation from 1/16: {nt.max_deviation:.2e}")
