import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psthue.errors import DomainError, NumericRangeError
from psthue.sequences import (
    BeattySpec, PSSpec, PrecisionPolicy, beatty_floor, beatty_floor_array, certified_floor_power,
    linear_approx_mismatch_count, ps_floor, ps_floor_array, ps_floor_three_halves,
)


def test_three_halves_scalar_and_array():
    spec = PSSpec(1.5)
    n = np.arange(1, 20001)
    assert ps_floor_array(spec, n).tolist() == [math.isqrt(int(v) ** 3) for v in n]
    assert all(ps_floor(spec, int(v)) == ps_floor_three_halves(int(v)) for v in n[:2000])


def test_exact_powers_are_not_rounded_down():
    # 4^1.5 = 8, 9^1.5 = 27: the float may land on either side
    assert ps_floor(PSSpec(1.5), 4) == 8
    assert certified_floor_power(10**6, 1.5) == 10**9
    assert certified_floor_power(2**40, 1.25) == 2**50


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**8), st.sampled_from([1.1, 1.3, 1.5, 1.7, 1.9, 1.25]))
def test_verified_floor_agrees_with_high_precision(n, c):
    import mpmath

    with mpmath.workprec(300):
        ref = int(mpmath.floor(mpmath.power(n, mpmath.mpf(c))))
    assert ps_floor(PSSpec(c), n) == ref


def test_multiplier():
    spec = PSSpec(1.5, multiplier=7)
    assert ps_floor(spec, 3) == math.isqrt(21**3)


def test_fast_policy_differs_only_near_integers():
    fast = PSSpec(1.5, precision_policy=PrecisionPolicy.FAST_FLOAT)
    n = np.arange(1, 10**5)
    diff = ps_floor_array(fast, n) != ps_floor_array(PSSpec(1.5), n)
    assert diff.sum() <= 5  # only exact squares can trip double rounding


def test_domain_and_range():
    for c in (1.0, 2.0, 0.5):
        with pytest.raises(DomainError):
            PSSpec(c)
    with pytest.raises(DomainError):
        ps_floor(PSSpec(1.5), 0)
    with pytest.raises(NumericRangeError):
        ps_floor(PSSpec(1.9), 10**11)


def test_beatty():
    spec = BeattySpec(math.sqrt(2), 0.5)
    n = np.arange(1, 1000)
    assert beatty_floor_array(spec, n).tolist() == [beatty_floor(spec, int(v)) for v in n]
    with pytest.raises(DomainError):
        BeattySpec(-1.0)


def test_mismatch_count_within_bound():
    # alpha at the derivative of f(x) = (4x)^1.5 inside [100, 110]
    alpha = 1.5 * 4**1.5 * 104**0.5
    r = linear_approx_mismatch_count(1.5, 2, 100, 110, alpha)
    assert 0 <= r.count <= 10
    assert r.count <= r.bound
    # linear f: exact floors agree with the approximation
    r = linear_approx_mismatch_count(1.0, 3, 5, 50, 8.0)
    assert r.count == 0 and r.second_derivative_bound == 0
    with pytest.raises(DomainError):
        linear_approx_mismatch_count(1.5, 2, 100, 110, 1.0)
