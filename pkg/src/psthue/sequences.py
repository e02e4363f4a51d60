"""Piatetski-Shapiro values floor((p n)^c), Beatty values floor(alpha n + beta),
and the linear-approximation mismatch count.

``ps_floor`` under the ``verified`` policy never returns a silently wrong
floor: double-precision values that land within a guard band of an integer
are recomputed with outward-rounded interval arithmetic at 128, 256, ...,
1024 bits.  Exact integer powers (e.g. 4^1.5 = 8) are detected with integer
arithmetic, since no interval can separate them from their floor.

Beatty values stay in double precision.  Everything that consumes them is a
counting statistic, so a misplaced floor at a measure-zero boundary is
tolerated.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, NumericRangeError, PrecisionError

GUARD_ABS = 1e-6
# 64 ulps of the double-precision power; libm pow is within one ulp
GUARD_REL = 2.0**-46
MIN_PREC = 128
MAX_PREC = 1024
_LIMIT = 2**63


class PrecisionPolicy(enum.Enum):
    FAST_FLOAT = "fast_float"
    VERIFIED = "verified"


@dataclass(frozen=True)
class PSSpec:
    c: float
    multiplier: int = 1
    precision_policy: PrecisionPolicy = PrecisionPolicy.VERIFIED

    def __post_init__(self):
        if not 1 < self.c < 2:
            raise DomainError(f"c must satisfy 1 < c < 2, got {self.c}")
        if self.multiplier < 1:
            raise DomainError("multiplier must be a positive integer")


@dataclass(frozen=True)
class BeattySpec:
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if not self.beta >= 0:
            raise DomainError("beta must be nonnegative")


def _exact_power(base: int, c: float) -> int | None:
    """base**c when it is an integer, else None.  c is read as its exact binary value."""
    a, b = float(c).as_integer_ratio()
    if b == 1:
        return base**a
    if base == 1:
        return 1
    # a b-th root of base < 2^63 other than 1 needs b < 63
    if b >= 63:
        return None
    r = round(base ** (1.0 / b))
    for cand in (r - 1, r, r + 1):
        if cand > 1 and cand**b == base:
            return cand**a
    return None


def certified_floor_power(base: int, c: float) -> int:
    """floor(base**c) for a positive integer base, certified by interval arithmetic."""
    if base < 1:
        raise DomainError("base must be a positive integer")
    exact = _exact_power(base, c)
    if exact is not None:
        return exact
    iv = mpmath.iv
    saved = iv.prec
    try:
        prec = MIN_PREC
        while prec <= MAX_PREC:
            iv.prec = prec
            y = iv.exp(iv.mpf(c) * iv.log(iv.mpf(base)))
            lo = int(mpmath.floor(y.a))
            hi = int(mpmath.floor(y.b))
            if lo == hi:
                return lo
            prec *= 2
    finally:
        iv.prec = saved
    raise PrecisionError(f"floor({base}^{c}) still ambiguous at {MAX_PREC} bits")


def _check_range(x: float) -> None:
    if not x < _LIMIT:
        raise NumericRangeError("(p n)^c does not fit below 2^63")


def ps_floor(spec: PSSpec, n: int) -> int:
    """floor((p n)^c)."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    base = spec.multiplier * n
    x = float(base) ** spec.c
    _check_range(x)
    if spec.precision_policy is PrecisionPolicy.FAST_FLOAT:
        return math.floor(x)
    guard = max(GUARD_ABS, GUARD_REL * x)
    if base < 2**53 and abs(x - round(x)) > guard:
        return math.floor(x)
    return certified_floor_power(base, spec.c)


def ps_floor_array(spec: PSSpec, n) -> np.ndarray:
    """Vectorised ``ps_floor`` over an array of positive integers."""
    n = np.asarray(n, dtype=np.int64)
    if n.size and n.min() < 1:
        raise DomainError("n must be positive")
    base = n * spec.multiplier
    x = np.power(base.astype(np.float64), spec.c)
    if x.size:
        _check_range(float(x.max()))
    out = np.floor(x).astype(np.int64)
    if spec.precision_policy is PrecisionPolicy.FAST_FLOAT:
        return out
    guard = np.maximum(GUARD_ABS, GUARD_REL * x)
    suspect = (np.abs(x - np.rint(x)) <= guard) | (base >= 2**53)
    for i in np.flatnonzero(suspect):
        out[i] = certified_floor_power(int(base[i]), spec.c)
    return out


def ps_floor_three_halves(n: int) -> int:
    """floor(n^{3/2}) = isqrt(n^3), exact integer arithmetic."""
    return math.isqrt(n**3)


def beatty_floor(spec: BeattySpec, n: int) -> int:
    x = spec.alpha * n + spec.beta
    if not abs(x) < 2**62:
        raise NumericRangeError("alpha n + beta does not fit below 2^62")
    return math.floor(x)


def beatty_floor_array(spec: BeattySpec, n) -> np.ndarray:
    x = spec.alpha * np.asarray(n, dtype=np.float64) + spec.beta
    if x.size and not np.abs(x).max() < 2**62:
        raise NumericRangeError("alpha n + beta does not fit below 2^62")
    return np.floor(x).astype(np.int64)


@dataclass(frozen=True)
class MismatchResult:
    count: int
    bound: float
    second_derivative_bound: float
    discrepancy: float


def linear_approx_mismatch_count(
    c: float, k: int, a: int, b: int, alpha: float
) -> MismatchResult:
    """Compare floor(f(n)) with its tangent-line Beatty approximation on (a, b].

    f(x) = (2^k x)^c and the approximation is floor(alpha n + f(a) - alpha a).
    ``c = 1`` is accepted and gives an exactly linear f (second derivative 0).
    The bound is 2 B K^3 + K D_K(alpha n) with B = sup |f''| on [a, b].
    """
    from .equidist import PointSet, discrepancy_1d

    if not 1 <= c < 2:
        raise DomainError("c must satisfy 1 <= c < 2")
    if not 1 <= a < b:
        raise DomainError("need 1 <= a < b")
    K = b - a
    scale = 2**k
    with mpmath.workdps(60):
        mc = mpmath.mpf(c)
        d_lo = mc * mpmath.mpf(scale) ** mc * mpmath.mpf(a) ** (mc - 1)
        d_hi = mc * mpmath.mpf(scale) ** mc * mpmath.mpf(b) ** (mc - 1)
        if not d_lo <= alpha <= d_hi:
            raise DomainError(f"alpha={alpha} is outside f'([a, b]) = [{d_lo}, {d_hi}]")
        # f'' is decreasing on x > 0 for c < 2, so the sup sits at x = a
        B = float(mc * (mc - 1) * mpmath.mpf(scale) ** mc * mpmath.mpf(a) ** (mc - 2))
        fa = (mpmath.mpf(scale) * a) ** mc
        al = mpmath.mpf(alpha)
        count = 0
        for n in range(a + 1, b + 1):
            if c == 1:
                exact = scale * n
            else:
                exact = certified_floor_power(scale * n, c)
            approx = int(mpmath.floor(al * n + fa - al * a))
            count += exact != approx
    pts = np.arange(1, K + 1, dtype=np.float64) * alpha
    dk = discrepancy_1d(PointSet.from_values(pts)).value
    bound = 2 * B * K**3 + K * dk
    return MismatchResult(count, bound, B, dk)
