import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import linear_expsum_direct
from psthue.digits import digit_at
from psthue.errors import DomainError, SizeError
from psthue.reduction import (
    ReductionParams, avg_linear_expsum, digit_constrained_set, linear_expsum, s0_sample,
    section9_parameters,
)


def test_linear_expsum_examples():
    assert linear_expsum(3.0, 17).magnitude == 17
    assert linear_expsum(0.5, 10).magnitude < 1e-12
    assert linear_expsum(1 / 3, 30).magnitude < 1e-12


def test_linear_expsum_closed_form():
    rng = np.random.default_rng(0)
    for _ in range(300):
        x = float(rng.normal() * 5)
        N = int(rng.integers(1, 3000))
        r = linear_expsum(x, N)
        assert r.magnitude == pytest.approx(linear_expsum_direct(x, N), abs=1e-8)
        assert r.magnitude <= r.weyl_cap + 1e-9


def test_avg_linear_expsum():
    a = avg_linear_expsum(100, 0.37, 1000, 20000)
    b = avg_linear_expsum(100, 0.37, 1000, 40000)
    assert abs(a.W_hat - b.W_hat) < 0.05 * b.W_hat
    assert avg_linear_expsum(100, -0.37, 1000, 20000).W_hat == pytest.approx(a.W_hat)
    big = avg_linear_expsum(1000, 3.3, 5000, 50000)
    assert big.ratio < 2
    with pytest.raises(DomainError):
        avg_linear_expsum(5, 0.3, 1000, 10)
    with pytest.raises(DomainError):
        avg_linear_expsum(100, 1e-9, 1000, 10)


def _params(**kw):
    base = dict(lam=20, mu=3, sigma=1, rho=2, m=6, B=2**14)
    base.update(kw)
    return ReductionParams(**base)


def test_params_invariants():
    assert _params().invariant_violations() == []
    assert "rho != lambda - m mu" in _params(rho=5).invariant_violations()
    assert _params().lambda_i(3) == 14


def test_digit_set_membership():
    P = _params()
    s = digit_constrained_set(1234.567, 1.41, P, 2)
    low, top = s.positions
    assert (low, top) == (14, 17)
    ga = 1.41 * 1234.567
    a1, b1 = (1234.567).as_integer_ratio()
    a2, b2 = ga.as_integer_ratio()
    for k in s.members:
        k = int(k)
        for j in range(low, top + 1):
            assert digit_at(a1 * k // b1, j) == 0
            assert digit_at(a2 * k // b2, j) == 0
    # brute force over all k: nothing was missed
    full = [k for k in range(1, P.B + 1)
            if all(digit_at(a1 * k // b1, j) == 0 and digit_at(a2 * k // b2, j) == 0 for j in range(low, top + 1))]
    assert s.members.tolist() == full


def test_digit_set_degenerate_and_power_of_two():
    P = _params(mu=0, sigma=0, rho=20)
    s = digit_constrained_set(1000.5, 1.3, P, 1)
    assert s.size == P.B  # no positions constrained
    P = _params()
    alpha = 2.0 ** (P.lambda_i(2) + 1)
    both = digit_constrained_set(alpha, 1.37, P, 2, "both")
    gam = digit_constrained_set(alpha, 1.37, P, 2, "gamma_only")
    assert both.members.tolist() == gam.members.tolist()
    with pytest.raises(SizeError):
        digit_constrained_set(1.0, 1.0, _params(lam=60, rho=42), 1)


def test_digit_set_concentration():
    P = _params(B=2**16)
    rng = np.random.default_rng(3)
    D = 1000.0
    ok = sum(0.25 <= digit_constrained_set(D * (1 + rng.random()), 1.2247, P, 2).ratio <= 4 for _ in range(100))
    assert ok >= 80


def test_s0_sample():
    a = s0_sample(50.0, 2000, 1.2247, 5, 8, 1)
    assert a == s0_sample(50.0, 2000, 1.2247, 5, 8, 1)
    assert a.lower_bound
    # gamma = 1 with a shared beta: every term is +1 at that grid point
    one = s0_sample(50.0, 500, 1.0, 3, 4, 0)
    assert one.ratio == 1.0
    ratios = [s0_sample(50.0, N, 1.2247, 10, 16, 5).ratio for N in (10**3, 10**4, 10**5)]
    assert ratios[0] > ratios[1] > ratios[2]
    with pytest.raises(SizeError):
        s0_sample(50.0, 10**7, 1.2, 1, 1, 0)


def test_parameter_checks_feasible_regime():
    params, checks = section9_parameters(2**26, 12 * 2**26, 0.05, 0.1)
    failing = [c.name for c in checks if not c.holds]
    assert failing == []
    assert (params.mu, params.rho, params.sigma) == (16777, 1677, 16)
    assert params.rho == params.lam - params.m * params.mu
    assert params.invariant_violations() == []
    assert all(isinstance(c.slack, Fraction) for c in checks)


def test_parameter_checks_small_N_and_zero_theta():
    _, checks = section9_parameters(4000, 48000, 0.05, 0.1)
    names = {c.name for c in checks if not c.holds}
    assert "sigma > 0" in names
    _, checks = section9_parameters(4000, 48000, 0, 0.1)
    names = {c.name for c in checks if not c.holds}
    assert {"mu > 0", "sigma > 0"} <= names


def test_parameter_checks_theta_monotone_for_mu_rho():
    prev = None
    for th in (0.01, 0.02, 0.05, 0.1, 0.2):
        _, checks = section9_parameters(2**26, 12 * 2**26, th, 0.1)
        holds = {c.name: c.holds for c in checks}["mu >= 10 rho"]
        if prev:
            assert holds
        prev = holds
