import numpy as np
import pytest

from oracles import mobius_trial_division
from psthue.arith import primes_in_window, sieve, window_range
from psthue.errors import ConfigurationError


def test_mobius_matches_trial_division():
    t = sieve(5000)
    assert [int(v) for v in t.mobius[1:]] == [mobius_trial_division(n) for n in range(1, 5001)]
    assert t.mobius[0] == 0


def test_primes_and_mertens():
    t = sieve(100)
    assert list(t.primes()) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                73, 79, 83, 89, 97]
    assert t.mertens(100) == 1
    assert t.mertens(10) == -1
    assert sieve(10**6).mertens() == 212
    assert len(sieve(10**6).primes()) == 78498


def test_sieve_limits():
    for bad in (1, 10**9 + 1):
        with pytest.raises(ConfigurationError):
            sieve(bad)
    assert sieve(2).primes().tolist() == [2]


def test_prime_window():
    t = sieve(2**10)
    w = primes_in_window(t, 5, 0.9, 1e6)  # cap 10^5.4 is far above the window
    assert w.primes == tuple(int(p) for p in t.primes(33, 64))
    # cap cuts inside the window: N^theta = 50 exactly excludes 53, 59, 61
    w = primes_in_window(t, 5, 0.5, 2500)
    assert w.primes == (37, 41, 43, 47)
    # the cap itself is excluded when it is a prime to within rounding
    w = primes_in_window(t, 5, 0.5, 47**2)
    assert w.primes[-1] == 43
    with pytest.raises(ConfigurationError):
        primes_in_window(t, 10, 0.5, 1e6)


def test_window_range():
    ks = window_range(10**6, 0.35)
    assert ks == [4, 5, 6]
    for k in ks:
        assert (10**6) ** 0.175 <= 2**k <= (10**6) ** 0.35
