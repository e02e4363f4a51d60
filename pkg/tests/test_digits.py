import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import popcount, thue_morse_recursive
from psthue.digits import (
    PeriodicDigitModel, digit_at, g_rho, g_rho_array, sum_of_digits, sum_of_digits_array,
    thue_morse, thue_morse_array, thue_morse_sign_array, truncated_digit_sum,
    truncated_digit_sum_array,
)
from psthue.errors import ConfigurationError


def test_small_values():
    assert [thue_morse(n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    assert sum_of_digits(0) == 0
    assert sum_of_digits(255) == 8
    assert truncated_digit_sum(0b101101, 3) == 2
    assert digit_at(0b100, 2) == 1 and digit_at(0b100, 1) == 0


@given(st.integers(min_value=0, max_value=2**200))
def test_scalar_against_string_popcount(n):
    assert sum_of_digits(n) == popcount(n)
    assert thue_morse(n) == popcount(n) % 2


@given(st.integers(min_value=0, max_value=2**40), st.integers(min_value=0, max_value=80))
def test_truncation_is_sum_of_low_digits(n, lam):
    assert truncated_digit_sum(n, lam) == sum(digit_at(n, j) for j in range(lam))
    assert truncated_digit_sum(n + 2**lam, lam) == truncated_digit_sum(n, lam)


def test_recursive_definition_agrees():
    assert all(thue_morse(n) == thue_morse_recursive(n) for n in range(5000))


def test_array_forms_match_scalar():
    n = np.random.default_rng(3).integers(0, 2**62, size=2000)
    assert list(sum_of_digits_array(n)) == [sum_of_digits(int(v)) for v in n]
    assert list(thue_morse_array(n)) == [thue_morse(int(v)) for v in n]
    assert list(truncated_digit_sum_array(n, 17)) == [truncated_digit_sum(int(v), 17) for v in n]
    assert list(truncated_digit_sum_array(n, 70)) == list(sum_of_digits_array(n))
    assert set(np.unique(thue_morse_sign_array(n))) <= {-1, 1}


def test_negative_input_rejected():
    with pytest.raises(ValueError):
        sum_of_digits(-1)
    with pytest.raises(ValueError):
        thue_morse_array(np.array([-3]))
    with pytest.raises(TypeError):
        sum_of_digits_array(np.array([1.5]))


def test_periodic_model():
    m = PeriodicDigitModel.build(3)
    assert list(m.table) == [popcount(k) for k in range(8)]
    assert m.size == 8
    assert list(m.signs()) == [1, -1, -1, 1, -1, 1, 1, -1]
    assert PeriodicDigitModel.build(0).size == 1
    for bad in (-1, 25):
        with pytest.raises(ConfigurationError):
            PeriodicDigitModel.build(bad)


def test_g_rho_staircase():
    m = PeriodicDigitModel.build(4)
    for t in range(16):
        x = (t + 0.5) / 16
        assert g_rho(x, m) == popcount(t)
        assert g_rho(x + 7, m) == popcount(t)  # 1-periodic
        assert g_rho(x - 3, m) == popcount(t)
    # tiny negatives reduce to just below 1, never out of range
    assert g_rho(-1e-18, m) == popcount(15)
    xs = np.linspace(-2, 2, 1001)
    assert list(g_rho_array(xs, m)) == [g_rho(float(x), m) for x in xs]
