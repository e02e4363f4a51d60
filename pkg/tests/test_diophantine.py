import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from oracles import best_rational_exhaustive, convergents
from psthue.arith import primes_in_window, sieve
from psthue.diophantine import (
    bad_pair_census, best_rational_error, continued_fraction, ratio_power, ratio_power_expsum,
)
from psthue.errors import DomainError, PrecisionError, SizeError


def test_rational_expansions():
    cf = continued_fraction(Fraction(1, 2), 100)
    assert cf.quotients == (0, 2) and cf.exact
    cf = continued_fraction(Fraction(415, 93), 10**4)
    assert cf.quotients == (4, 2, 6, 7)
    assert cf.convergents[-1] == (415, 93)


def test_golden_ratio_and_pi():
    with mpmath.workprec(256):
        phi = (1 + mpmath.sqrt(5)) / 2
        pi = +mpmath.pi
    cf = continued_fraction(phi, 10**12)
    assert set(cf.quotients) == {1}
    assert (355, 113) in continued_fraction(pi, 1000).convergents
    assert continued_fraction(pi, 1000).quotients[:4] == (3, 7, 15, 1)


def test_convergent_properties():
    rng = np.random.default_rng(0)
    with mpmath.workprec(200):
        for _ in range(50):
            x = mpmath.mpf(rng.random() * 10 + 0.01) + mpmath.sqrt(mpmath.mpf(int(rng.integers(2, 99))))
            cf = continued_fraction(x, 10**8)
            dens = [k for _, k in cf.convergents]
            assert all(a < b for a, b in zip(dens[1:], dens[2:]))
            assert list(convergents(cf.quotients)) == list(cf.convergents)
            for h, k in cf.convergents:
                assert abs(x - mpmath.mpf(h) / k) < mpmath.mpf(1) / k**2


def test_precision_exhaustion():
    with mpmath.workprec(40):
        x = mpmath.sqrt(2)
    with mpmath.workprec(40):
        with pytest.raises(PrecisionError):
            continued_fraction(x, 10**30)


def test_best_rational_examples():
    assert best_rational_error(Fraction(22, 7), 10).err == 0
    with mpmath.workprec(200):
        r2 = mpmath.sqrt(2)
    a = best_rational_error(r2, 100)
    # 140/99 is a semiconvergent and beats the last convergent 99/70
    assert (a.h1, a.h2) == (140, 99)
    assert a.err <= abs(float(r2) - 99 / 70)
    assert abs(a.err - abs(float(r2) - 99 / 70)) < 1e-8


def test_best_rational_is_true_minimum():
    rng = np.random.default_rng(1)
    for _ in range(300):
        Q = int(rng.integers(1, 400))
        x = Fraction(float(rng.random() * 30 + 1e-3))
        a = best_rational_error(x, Q)
        assert a.err_exact == best_rational_exhaustive(x, Q)
        # the guarantee that always holds: error at most 1/(Q + 1)
        assert a.err_exact <= Fraction(1, Q + 1)


def test_dirichlet_square_bound_is_not_universal():
    # |gamma - h/q| <= 1/Q^2 can fail at every q <= Q for gamma just below 1
    a = best_rational_error(Fraction(100, 101), 50)
    assert a.err > 1 / 50**2


def test_census():
    t = sieve(2**9)
    w = primes_in_window(t, 8, 0.999, 1e9)
    loose = bad_pair_census(w, 1.5, 1e-3, 20)
    tight = bad_pair_census(w, 1.5, 1e-5, 20)
    assert loose.total_pairs == len(w) * (len(w) - 1)
    assert tight.bad_pairs <= loose.bad_pairs
    assert bad_pair_census(w, 1.5, 1e-12, 20).bad_pairs == 0


def test_census_agrees_with_high_precision_path():
    t = sieve(2**8)
    w = primes_in_window(t, 7, 0.999, 1e9)
    eps, Q = 2e-3, 30
    bad = 0
    for p in w.primes:
        for q in w.primes:
            if p != q:
                bad += best_rational_error(ratio_power(p, q, 1.5), Q).err < eps
    assert bad_pair_census(w, 1.5, eps, Q).bad_pairs == bad


def test_unordered_census_is_symmetric():
    t = sieve(2**8)
    w = primes_in_window(t, 7, 0.999, 1e9)
    Q, eps = 30, 2e-3

    def bad(p, q):
        return best_rational_error(ratio_power(p, q, 1.5), Q).err < eps

    # classifying an unordered pair by the worse orientation is order-free
    for p in w.primes[:6]:
        for q in w.primes[:6]:
            if p < q:
                assert (bad(p, q) or bad(q, p)) == (bad(q, p) or bad(p, q))


def test_ratio_power_expsum():
    assert ratio_power_expsum(0, 5, 1.5).magnitude == pytest.approx(4**5)
    a = ratio_power_expsum(3, 6, 1.5)
    b = ratio_power_expsum(-3, 6, 1.5)
    assert a.magnitude == pytest.approx(b.magnitude, rel=1e-9)
    vals = [ratio_power_expsum(1, k, 1.5).normalized for k in (6, 8, 10)]
    assert vals[0] > vals[1] > vals[2]
    with pytest.raises(SizeError):
        ratio_power_expsum(1, 14, 1.5)


def test_ratio_power_expsum_limit_is_the_double_integral():
    from scipy.integrate import dblquad

    re = dblquad(lambda y, x: math.cos(2 * math.pi * (y / x) ** 1.5), 1, 2, 1, 2, epsabs=1e-10)[0]
    im = dblquad(lambda y, x: math.sin(2 * math.pi * (y / x) ** 1.5), 1, 2, 1, 2, epsabs=1e-10)[0]
    assert ratio_power_expsum(1, 10, 1.5).normalized == pytest.approx(math.hypot(re, im), abs=2e-3)
