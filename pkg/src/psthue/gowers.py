"""Gowers uniformity norms of f_rho(n) = (-1)^{s_rho(n)} on Z / 2^rho.

Every discrete method accumulates the +-1 products in exact integers and
returns the 2^m-th power of the norm as ``Fraction(total, 2^{(m+1) rho})``,
so the three methods can be compared bit for bit.  Arguments
n + <eps, r> are reduced mod 2^rho; s_rho is 2^rho-periodic, so this is the
same sum as over the integers.

The continuous norm I_m(g_rho) has no exact evaluator here; it is sampled by
Monte Carlo.  The integrand e(1/2 sum_eps g_rho(...)) is real, so the
conjugations in the general definition play no role.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .digits import PeriodicDigitModel
from .errors import DataError, DomainError, SizeError

BRUTE_BUDGET = 24
RECURSION_BUDGET = 24
MAX_RHO_FOURIER = 24
_CHUNK = 1 << 22


class Method(enum.Enum):
    BRUTE = "brute"
    FOURIER_U2 = "fourier_u2"
    RECURSION = "recursion"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class GowersResult:
    m: int
    rho: int
    power_value: Fraction
    method: Method

    @property
    def value(self) -> float:
        return float(self.power_value)

    @property
    def norm(self) -> float:
        return self.value ** (1.0 / 2**self.m)


def _signs(rho: int) -> np.ndarray:
    return PeriodicDigitModel.build(rho).signs().astype(np.int64)


def gowers_brute(m: int, rho: int) -> GowersResult:
    """Direct sum over n, r_1..r_m < 2^rho of prod_eps f(n + <eps, r>)."""
    if m < 2:
        raise DomainError("m must be at least 2")
    if rho < 0:
        raise DomainError("rho must be nonnegative")
    if (m + 1) * rho > BRUTE_BUDGET:
        raise SizeError(f"(m+1) rho = {(m + 1) * rho} exceeds the brute-force budget {BRUTE_BUDGET}")
    M = 1 << rho
    f = _signs(rho)
    mask = M - 1
    # all r-vectors as rows; offsets <eps, r> for every eps
    r = np.array(list(itertools.product(range(M), repeat=m)), dtype=np.int64).reshape(-1, m)
    eps = np.array(list(itertools.product((0, 1), repeat=m)), dtype=np.int64)
    offsets = r @ eps.T  # (M^m, 2^m)
    total = 0
    rows_per_chunk = max(1, _CHUNK // (M * len(eps)))
    for start in range(0, len(offsets), rows_per_chunk):
        off = offsets[start : start + rows_per_chunk]
        prod = np.ones((len(off), M), dtype=np.int64)
        n = np.arange(M, dtype=np.int64)
        for e in range(len(eps)):
            prod *= f[(n[None, :] + off[:, e : e + 1]) & mask]
        total += int(prod.sum())
    return GowersResult(m, rho, Fraction(total, 1 << ((m + 1) * rho)), Method.BRUTE)


def _autocorrelations(f: np.ndarray) -> np.ndarray:
    """A(r) = sum_n f(n + r) f(n) for each row of f, exact integers via FFT."""
    F = np.fft.fft(f.astype(np.float64), axis=-1)
    A = np.fft.ifft(np.abs(F) ** 2, axis=-1).real
    Ai = np.rint(A)
    if f.shape[-1] and np.max(np.abs(A - Ai)) > 0.25:
        raise ArithmeticError("FFT autocorrelation lost integrality")
    return Ai.astype(np.int64)


def _u2_numerators(f: np.ndarray) -> np.ndarray:
    """sum_{n, r1, r2} f(n) f(n+r1) f(n+r2) f(n+r1+r2) = sum_r A(r)^2, per row."""
    A = _autocorrelations(f)
    return np.sum(A * A, axis=-1, dtype=np.int64) if f.shape[-1] <= 1 << 20 else np.array(
        [sum(int(a) * int(a) for a in row) for row in A]
    )


def gowers_u2_fourier(rho: int) -> GowersResult:
    """U^2 power via the Fourier transform of f_rho.

    ||f||_{U^2}^4 = sum_k |f^(k)|^4 = 2^{-3 rho} sum_r A(r)^2, where A is the
    autocorrelation; A is recovered exactly from |FFT|^2.
    """
    if not 0 <= rho <= MAX_RHO_FOURIER:
        raise SizeError(f"rho must lie in [0, {MAX_RHO_FOURIER}]")
    f = _signs(rho)
    A = _autocorrelations(f[None, :])[0]
    total = sum(int(a) * int(a) for a in A) if rho > 20 else int(np.sum(A * A))
    return GowersResult(2, rho, Fraction(total, 1 << (3 * rho)), Method.FOURIER_U2)


def u2_fourier_float(rho: int) -> float:
    """sum_k |f^(k)|^4 in floating point, with f^ normalised by 2^{-rho}."""
    f = _signs(rho).astype(np.float64)
    F = np.fft.fft(f) / len(f)
    return float(np.sum(np.abs(F) ** 4))


def gowers_recursion(m: int, rho: int) -> GowersResult:
    """||f||_{U^m}^{2^m} as the average over r of ||Delta_r f||_{U^{m-1}}^{2^{m-1}}.

    Delta_r f(n) = f(n + r) f(n) for real +-1 f.  The recursion bottoms out
    in the exact Fourier U^2 evaluation, so 2^{(m-2) rho} transforms of length
    2^rho are needed.
    """
    if m < 2:
        raise DomainError("m must be at least 2")
    if m == 2:
        return gowers_u2_fourier(rho)
    if (m - 2) * rho > RECURSION_BUDGET:
        raise SizeError(f"(m-2) rho = {(m - 2) * rho} exceeds the recursion budget {RECURSION_BUDGET}")
    M = 1 << rho
    f = _signs(rho).astype(np.int8)
    n = np.arange(M)
    shifts = (n[:, None] + n[None, :]) & (M - 1)  # shifts[r, n] = n + r

    def expand(batch: np.ndarray) -> np.ndarray:
        # (B, M) -> (B * M, M): every derivative Delta_r of every row
        return (batch[:, shifts] * batch[:, None, :]).reshape(-1, M)

    total = 0
    rows_per_chunk = max(1, _CHUNK // max(M, 1))

    def descend(batch: np.ndarray, level: int):
        nonlocal total
        if level == 2:
            for start in range(0, len(batch), rows_per_chunk):
                total += int(_u2_numerators(batch[start : start + rows_per_chunk]).sum())
            return
        step = max(1, rows_per_chunk // M)
        for start in range(0, len(batch), step):
            descend(expand(batch[start : start + step]), level - 1)

    descend(f[None, :], m)
    return GowersResult(m, rho, Fraction(total, 1 << ((m + 1) * rho)), Method.RECURSION)


@dataclass(frozen=True)
class DecayFit:
    m: int
    eta_hat: float
    intercept: float
    rhos: tuple
    values: tuple


def decay_fit(m: int, rho_min: int, rho_max: int) -> DecayFit:
    """Least-squares slope of log2(power value) against rho; eta_hat = -slope."""
    rhos = [r for r in range(rho_min, rho_max + 1) if r >= 1]
    if len(rhos) < 3:
        raise DataError("need at least three rho values >= 1 to fit a decay rate")
    vals = [gowers_recursion(m, r) for r in rhos]
    y = np.log2([v.value for v in vals])
    slope, intercept = np.polyfit(np.array(rhos, dtype=float), y, 1)
    return DecayFit(m, float(-slope), float(intercept), tuple(rhos), tuple(v.power_value for v in vals))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    samples: int


def integral_gowers_mc(m: int, rho: int, samples: int, seed: int, batch: int = 1 << 18) -> MonteCarloEstimate:
    """Monte-Carlo estimate of I_m(g_rho) over (x, x_1..x_m) uniform in [0,1]^{m+1}."""
    if not 2 <= m <= 6:
        raise DomainError("m must lie in [2, 6]")
    if samples < 2:
        raise DomainError("need at least two samples")
    model = PeriodicDigitModel.build(rho)
    parity = (model.table & 1).astype(np.int64)
    size = model.size
    eps = np.array(list(itertools.product((0, 1), repeat=m)), dtype=np.float64)
    rng = np.random.default_rng(seed)
    s1 = 0.0
    s2 = 0.0
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        u = rng.random((b, m + 1))
        args = u[:, :1] + u[:, 1:] @ eps.T  # (b, 2^m)
        frac = args - np.floor(args)
        cells = np.minimum((frac * size).astype(np.int64), size - 1)
        val = 1.0 - 2.0 * (parity[cells].sum(axis=1) & 1)
        s1 += float(val.sum())
        s2 += float((val * val).sum())
        done += b
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    return MonteCarloEstimate(mean, (var / samples) ** 0.5, samples)
