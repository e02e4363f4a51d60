"""Moebius and prime tables, and dyadic prime windows P_k(N, theta)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

MAX_SIEVE = 10**9


@dataclass(frozen=True)
class SieveTable:
    limit: int
    mobius: np.ndarray = field(repr=False, compare=False)
    is_prime: np.ndarray = field(repr=False, compare=False)

    def primes(self, lo: int = 2, hi: int | None = None) -> np.ndarray:
        """Primes p with lo <= p <= hi (hi defaults to the limit)."""
        hi = self.limit if hi is None else min(hi, self.limit)
        lo = max(lo, 0)
        if hi < lo:
            return np.empty(0, dtype=np.int64)
        return np.flatnonzero(self.is_prime[lo : hi + 1]).astype(np.int64) + lo

    def mertens(self, n: int | None = None) -> int:
        n = self.limit if n is None else n
        return int(self.mobius[1 : n + 1].sum(dtype=np.int64))


def sieve(limit: int) -> SieveTable:
    """Moebius function and primality for 0..limit.

    Each prime p <= sqrt(limit) multiplies a running product by -p; what is
    left of n after dividing that product out is 1 or a single prime above
    sqrt(limit), which contributes one more sign flip.  Squares of primes
    zero the entry.
    """
    if not 2 <= limit <= MAX_SIEVE:
        raise ConfigurationError(f"sieve limit must lie in [2, {MAX_SIEVE}], got {limit}")
    n1 = limit + 1
    is_prime = np.ones(n1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False

    prod = np.ones(n1, dtype=np.int64)
    mu = np.ones(n1, dtype=np.int8)
    for p in np.flatnonzero(is_prime[: math.isqrt(limit) + 1]):
        p = int(p)
        prod[p::p] *= -p
        mu[p * p :: p * p] = 0
    idx = np.arange(n1, dtype=np.int64)
    sign = np.sign(prod).astype(np.int8)
    leftover = np.abs(prod) < idx
    sign[leftover] = -sign[leftover]
    mu = np.where(mu == 0, 0, sign).astype(np.int8)
    mu[0] = 0
    mu.setflags(write=False)
    is_prime.setflags(write=False)
    return SieveTable(limit, mu, is_prime)


@dataclass(frozen=True)
class PrimeWindow:
    k: int
    theta: float
    cap: float
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)


def _power_threshold(cap_n: float, theta: float) -> float:
    # anything within one ulp of cap_n**theta is treated as outside the window
    x = float(cap_n) ** float(theta)
    return x - math.ulp(x)


def primes_in_window(table: SieveTable, k: int, theta: float, cap_n: float) -> PrimeWindow:
    """Primes in (2^k, 2^{k+1}] that do not exceed cap_n^theta."""
    if k < 0:
        raise ConfigurationError("k must be nonnegative")
    if not 0 < theta < 1:
        raise ConfigurationError("theta must lie in (0, 1)")
    if 2 ** (k + 1) > table.limit:
        raise ConfigurationError(
            f"window (2^{k}, 2^{k + 1}] exceeds the sieve limit {table.limit}"
        )
    hi = 2 ** (k + 1)
    thr = _power_threshold(cap_n, theta)
    if thr < hi:
        hi = math.floor(thr) if thr > 0 else 0
    ps = table.primes(2**k + 1, hi)
    return PrimeWindow(k, float(theta), float(cap_n), tuple(int(p) for p in ps))


def window_range(cap_n: float, theta: float) -> list[int]:
    """All k with N^{theta/2} <= 2^k <= N^theta."""
    lo = float(cap_n) ** (theta / 2)
    hi = float(cap_n) ** theta
    k = max(0, math.ceil(math.log2(lo)) - 1)
    out = []
    while 2.0**k <= hi:
        if 2.0**k >= lo:
            out.append(k)
        k += 1
    return out
