"""Continued fractions, best rational approximations of gamma = (q/p)^c,
the census of badly approximable prime pairs, and the ratio-power exponential sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .arith import PrimeWindow
from .errors import DomainError, PrecisionError, SizeError

WORK_PREC = 192
MAX_TERMS = 10**9


@dataclass(frozen=True)
class CFExpansion:
    x: object
    quotients: tuple
    convergents: tuple  # (h, q) pairs
    exact: bool  # True when the expansion terminated (x rational)


def _cf_rational(x: Fraction):
    a, b = x.numerator, x.denominator
    while b:
        q, r = divmod(a, b)
        yield q
        a, b = b, r


def _as_bounds(x) -> tuple[Fraction, Fraction, bool]:
    """Exact rational bounds for x; the bool says whether x is known exactly."""
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return f, f, True
    if isinstance(x, float):
        f = Fraction(x)
        return f, f, True
    if isinstance(x, mpmath.ctx_iv.ivmpf):
        return _mpf_fraction(x.a), _mpf_fraction(x.b), False
    if isinstance(x, mpmath.mpf):
        # the value is a rounding of the intended real to some precision P;
        # a full mantissa reveals P, a short one (trailing zeros stripped)
        # is taken at the current working precision
        man, exp = x.man_exp
        man, exp = int(man), int(exp)
        f = Fraction(man) * Fraction(2) ** exp
        prec = max(mpmath.mp.prec, abs(man).bit_length())
        ulp = Fraction(2) ** (exp + abs(man).bit_length() - prec)
        return f - ulp, f + ulp, False
    raise TypeError(f"unsupported real type {type(x).__name__}")


def _mpf_fraction(v) -> Fraction:
    man, exp = mpmath.mpf(v).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def continued_fraction(x, q_max: int) -> CFExpansion:
    """All convergents of x with denominator <= q_max.

    ints, Fractions and floats are expanded exactly.  An mpf or interval is
    expanded from both ends of its uncertainty interval and only the common
    quotients are kept; if they run out before the denominators pass q_max a
    PrecisionError is raised.
    """
    if q_max < 1:
        raise DomainError("q_max must be positive")
    lo, hi, known = _as_bounds(x)
    if not lo > 0:
        raise DomainError("x must be positive")
    quotients: list[int] = []
    convs: list[tuple[int, int]] = []
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    terminated = False
    it_lo, it_hi = _cf_rational(lo), _cf_rational(hi)
    while True:
        a = next(it_lo, None)
        b = a if lo == hi else next(it_hi, None)
        if a is None and b is None and known:
            terminated = True
            break
        if a is None or a != b:
            if known:
                terminated = True
                break
            raise PrecisionError("input precision exhausted before reaching q_max")
        a = int(a)
        h = a * h1 + h0
        k = a * k1 + k0
        if k > q_max:
            break
        quotients.append(a)
        convs.append((h, k))
        h0, h1, k0, k1 = h1, h, k1, k
    return CFExpansion(x, tuple(quotients), tuple(convs), terminated)


@dataclass(frozen=True)
class Approximation:
    h1: int
    h2: int
    err: float
    err_exact: Fraction  # distance from the input's rational representation


def best_rational_error(gamma, q_max: int) -> Approximation:
    """min over 1 <= h2 <= q_max of |gamma - h1/h2|, via convergents and semiconvergents."""
    cf = continued_fraction(gamma, q_max)
    lo, hi, _ = _as_bounds(gamma)
    centre = (lo + hi) / 2
    cands = list(cf.convergents)
    if not cf.exact and len(cf.convergents) >= 1:
        h_prev, k_prev = (1, 0) if len(cf.convergents) == 1 else cf.convergents[-2]
        h_last, k_last = cf.convergents[-1]
        j = (q_max - k_prev) // k_last
        if j >= 1:
            cands.append((h_prev + j * h_last, k_prev + j * k_last))
    if not cands:  # gamma < 1 has the convergent 0/1 first, so this cannot happen
        raise DomainError("no convergent with denominator <= q_max")
    best = min(cands, key=lambda hk: (abs(centre - Fraction(*hk)), hk[1]))
    e = abs(centre - Fraction(*best))
    return Approximation(best[0], best[1], float(e), e)


def ratio_power(p: int, q: int, c: float, prec: int = WORK_PREC):
    """(q/p)^c as an mpf at ``prec`` bits."""
    with mpmath.workprec(prec):
        return mpmath.power(mpmath.mpf(q) / p, mpmath.mpf(c))


@dataclass(frozen=True)
class CensusResult:
    total_pairs: int
    bad_pairs: int
    fraction: float
    escalated: int


def bad_pair_census(window: PrimeWindow, c: float, eps: float, q_max: int) -> CensusResult:
    """Count ordered pairs p != q with best_rational_error((q/p)^c, q_max) < eps.

    All pairs are screened in double precision with every denominator up to
    q_max; pairs whose error lies within 1e-9 (relative) of eps are redone
    in high precision.
    """
    if len(window.primes) < 2:
        raise DomainError("the window needs at least two primes")
    if eps <= 0:
        raise DomainError("eps must be positive")
    P = np.array(window.primes, dtype=np.float64)
    h2 = np.arange(1, q_max + 1, dtype=np.float64)
    total = bad = escalated = 0
    for i, p in enumerate(P):
        qs = np.delete(P, i)
        gam = (qs / p) ** c
        prod = gam[:, None] * h2[None, :]
        err = (np.abs(prod - np.rint(prod)) / h2[None, :]).min(axis=1)
        close = np.abs(err - eps) <= 1e-9 * eps + 1e-15
        for j in np.flatnonzero(close):
            escalated += 1
            g = ratio_power(int(p), int(qs[j]), c)
            err[j] = best_rational_error(g, q_max).err
        bad += int(np.count_nonzero(err < eps))
        total += qs.size
    return CensusResult(total, bad, bad / total, escalated)


@dataclass(frozen=True)
class ExpSumResult:
    magnitude: float
    normalized: float


def ratio_power_expsum(h: int, k: int, c: float) -> ExpSumResult:
    """|sum over m, n in (2^k, 2^{k+1}] of e(h (n/m)^c)|, normalised by 2^{2k}."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    if 2 ** (2 * (k + 1)) > MAX_TERMS:
        raise SizeError("2^{2(k+1)} terms exceed the budget")
    M = 1 << k
    r = np.arange(M + 1, 2 * M + 1, dtype=np.float64)
    total = 0j
    step = max(1, (1 << 22) // M)
    for s in range(0, M, step):
        m = r[s : s + step]
        ph = h * (r[None, :] / m[:, None]) ** c
        ph -= np.floor(ph)
        total += complex(np.exp(2j * math.pi * ph).sum())
    mag = abs(total)
    return ExpSumResult(float(mag), float(mag / 2 ** (2 * k)))
