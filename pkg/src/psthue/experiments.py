"""Headline statistics: the Moebius/Thue-Morse sum along floor(n^c), prime-pair
correlations, pattern frequencies, the block-deviation bound, and the
complexity and normality of Thue-Morse and Piatetski-Shapiro words.

Sums over n <= N use [1, N]; pattern frequencies use (N, 2N].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

import mpmath
import numpy as np

from .arith import SieveTable, primes_in_window, sieve, window_range
from .digits import thue_morse_array
from .errors import ConfigurationError, DataError, DomainError, InternalError
from .parallel import chunk_ranges, ordered_map
from .sequences import PSSpec, ps_floor_array

_BLOCK = 1 << 20


@dataclass(frozen=True)
class ExperimentConfig:
    c: float = 1.5
    N: int = 10**4
    theta: float = 0.35
    theta1: float = 0.05
    K: int = 64
    H: int = 4
    seed: int = 0

    def __post_init__(self):
        if not 1 < self.c < 2:
            raise ConfigurationError("c must satisfy 1 < c < 2")
        if self.N < 1:
            raise ConfigurationError("N must be positive")
        if not 0 < self.theta < 1:
            raise ConfigurationError("theta must lie in (0, 1)")
        if self.K < 1 or self.H < 0:
            raise ConfigurationError("K must be positive and H nonnegative")


@dataclass(frozen=True)
class ResultRecord:
    name: str
    params: dict
    value: float
    normalized: float
    runtime_ms: int = 0

    def __post_init__(self):
        if not math.isfinite(self.normalized):
            raise DataError(f"{self.name}: normalized value is not finite")


def ps_thue_morse(c: float, lo: int, hi: int, multiplier: int = 1) -> np.ndarray:
    """t(floor((p n)^c)) for lo <= n <= hi, as int8."""
    if hi < lo:
        return np.empty(0, dtype=np.int8)
    spec = PSSpec(c, multiplier)
    out = np.empty(hi - lo + 1, dtype=np.int8)
    for s in range(lo, hi + 1, _BLOCK):
        e = min(s + _BLOCK - 1, hi)
        out[s - lo : e - lo + 1] = thue_morse_array(ps_floor_array(spec, np.arange(s, e + 1)))
    return out


# --- Moebius orthogonality -------------------------------------------------


@dataclass(frozen=True)
class OrthogonalityResult:
    N: int
    sum_pm: int
    sum_01: int
    mertens: int
    partials: tuple  # (n, sum_pm up to n)


def _orth_chunk(args):
    c, lo, hi, mu_slice, marks = args
    t = ps_thue_morse(c, lo, hi).astype(np.int64)
    mu = mu_slice.astype(np.int64)
    pm = np.cumsum(mu * (1 - 2 * t))
    s01 = int((mu * t).sum())
    at = {n: int(pm[n - lo]) for n in marks if lo <= n <= hi}
    return int(pm[-1]), s01, int(mu.sum()), at


def checkpoints(N: int, steps: int = 10) -> list[int]:
    return sorted({max(1, (N * j) // steps) for j in range(1, steps + 1)})


def mobius_orthogonality(cfg: ExperimentConfig, marks=None, table: SieveTable | None = None,
                         workers: int = 1) -> OrthogonalityResult:
    """sum_{n<=N} mu(n) (-1)^{t(floor(n^c))} and sum mu(n) t(floor(n^c)), exact."""
    N = cfg.N
    table = table or sieve(max(N, 2))
    if table.limit < N:
        raise ConfigurationError("sieve does not cover N")
    marks = sorted(set(checkpoints(N) if marks is None else marks))
    parts = chunk_ranges(1, N, max(workers, -(-N // _BLOCK)))
    jobs = [(cfg.c, a, b, np.asarray(table.mobius[a : b + 1]), marks) for a, b in parts]
    results = ordered_map(_orth_chunk, jobs, workers)
    sum_pm = sum_01 = mert = 0
    partials = []
    for total, s01, m, at in results:
        partials += [(n, sum_pm + v) for n, v in sorted(at.items())]
        sum_pm += total
        sum_01 += s01
        mert += m
    if sum_pm != mert - 2 * sum_01:
        raise InternalError("sum_pm != M(N) - 2 sum_01")
    return OrthogonalityResult(N, sum_pm, sum_01, mert, tuple(partials))


# --- prime-pair correlations -----------------------------------------------


@dataclass(frozen=True)
class WindowRow:
    k: int
    primes: int
    aggregate: int
    budget: float
    diagonal: int  # sum over p of floor(N / p), reported separately
    max_pair: int  # largest single |correlation|

    @property
    def ratio(self) -> float:
        return self.aggregate / self.budget


def _window_row(args) -> WindowRow:
    c, N, k, primes = args
    signs = {p: 1 - 2 * ps_thue_morse(c, 1, N // p, p).astype(np.int64) for p in primes}
    agg = 0
    biggest = 0
    for a, p in enumerate(primes):
        for q in primes[a + 1 :]:
            L = min(N // p, N // q)
            v = abs(int(np.dot(signs[p][:L], signs[q][:L])))
            if v > L:
                raise InternalError("correlation exceeds the trivial bound")
            agg += 2 * v  # (p, q) and (q, p)
            biggest = max(biggest, v)
    diag = sum(N // p for p in primes)
    P = len(primes)
    return WindowRow(k, P, agg, N * P * P / 2**k, diag, biggest)


def ddkbsz_harness(cfg: ExperimentConfig, workers: int = 1) -> list[WindowRow]:
    """Per window k: sum over ordered pairs p != q of |sum_{n <= N/max(p,q)} (-1)^{t(.)+t(.)}|."""
    ks = window_range(cfg.N, cfg.theta)
    if not ks:
        raise DataError("no k with N^(theta/2) <= 2^k <= N^theta")
    table = sieve(max(2 ** (max(ks) + 1), 2))
    jobs = []
    for k in ks:
        w = primes_in_window(table, k, cfg.theta, cfg.N)
        if len(w) < 2:
            raise DataError(f"window k={k} has fewer than two primes (k range {ks[0]}..{ks[-1]})")
        jobs.append((cfg.c, cfg.N, k, w.primes))
    return ordered_map(_window_row, jobs, workers)


@dataclass(frozen=True)
class PatternResult:
    p: int
    q: int
    N: int
    counts: dict  # (a1, a2) -> count over n in (N, 2N]
    diagonal: bool

    def deviation(self, a1: int, a2: int) -> Fraction:
        return abs(Fraction(self.counts[(a1, a2)], self.N) - Fraction(1, 4))

    @property
    def deviations(self) -> dict:
        return {key: self.deviation(*key) for key in self.counts}


def pattern_frequencies(p: int, q: int, cfg: ExperimentConfig) -> PatternResult:
    """Counts of (t(floor((pn)^c)), t(floor((qn)^c))) over n in (N, 2N].

    p == q is accepted as a labelled degenerate mode (the two words coincide).
    """
    N = cfg.N
    t1 = ps_thue_morse(cfg.c, N + 1, 2 * N, p).astype(np.int64)
    t2 = t1 if p == q else ps_thue_morse(cfg.c, N + 1, 2 * N, q).astype(np.int64)
    hist = np.bincount(2 * t1 + t2, minlength=4)
    counts = {(a, b): int(hist[2 * a + b]) for a in (0, 1) for b in (0, 1)}
    if sum(counts.values()) != N:
        raise InternalError("pattern counts do not partition N")
    return PatternResult(p, q, N, counts, p == q)


@dataclass(frozen=True)
class Prop2Terms:
    lhs: float
    term1: float
    term2: float
    J_hat: float
    J_stderr: float
    gamma: object = field(repr=False)
    truncated_block: bool = False

    @property
    def rhs(self) -> float:
        return self.term1 + self.term2 + self.J_hat


def _beatty_ones(a: float, n: np.ndarray, betas: np.ndarray) -> np.ndarray:
    x = np.floor(a * n[None, :] + betas[:, None]).astype(np.int64)
    return thue_morse_array(x).astype(np.float64)


def prop2_rhs(p: int, q: int, cfg: ExperimentConfig, k: int, alpha_draws: int = 200,
              beta_grid: int = 16) -> Prop2Terms:
    """Both sides of the block-deviation bound for the pattern (1, 1).

    J_hat averages, over alpha drawn uniformly from the integration range,
    the grid maximum over (beta1, beta2) of |#{n < K : t(.)=1, t(.)=1}/K - 1/4|,
    scaled by the range length over 2^{kc} N^{c-1}.  The beta grid only
    bounds the true maximum from below.
    """
    if p == q:
        raise DomainError("p and q must be distinct")
    c, N, K = cfg.c, cfg.N, cfg.K
    lhs = float(pattern_frequencies(p, q, cfg).deviation(1, 1))
    term1 = 2 ** (k * c) * N ** (c - 2) * K**2
    term2 = math.log(N) ** 2 / K
    with mpmath.workprec(128):
        gamma = mpmath.power(mpmath.mpf(q) / p, mpmath.mpf(c))
    g = float(gamma)
    lo = c * 2 ** (k * c) * N ** (c - 1)
    hi = c * 2 ** (k * c) * (2 * N) ** (c - 1)
    rng = np.random.default_rng(cfg.seed)
    n = np.arange(K, dtype=np.float64)
    best = np.empty(alpha_draws)
    for i in range(alpha_draws):
        alpha = lo + (hi - lo) * rng.random()
        rows = []
        for a in (alpha, g * alpha):
            top = 2.0 ** max(math.ceil(math.log2(a * K)), 0)
            rows.append(_beatty_ones(a, n, np.arange(beta_grid) * (top / beta_grid)))
        both = rows[0] @ rows[1].T
        best[i] = np.abs(both / K - 0.25).max()
    scale = (hi - lo) / (2 ** (k * c) * N ** (c - 1))
    J = scale * float(best.mean())
    se = scale * float(best.std(ddof=1) / math.sqrt(alpha_draws)) if alpha_draws > 1 else float("nan")
    return Prop2Terms(lhs, term1, term2, J, se, gamma, N % K != 0)


# --- complexity and normality ----------------------------------------------


def word(source: str, length: int, c: float | None = None) -> np.ndarray:
    """First ``length`` letters: t(n) for n >= 0, or t(floor(n^c)) for n >= 1."""
    if source == "thue_morse":
        return thue_morse_array(np.arange(length, dtype=np.int64))
    if source == "ps":
        if c is None:
            raise ConfigurationError("source 'ps' needs c")
        return ps_thue_morse(c, 1, length)
    raise ConfigurationError(f"unknown source {source!r}")


def _packed_windows(w: np.ndarray, H: int) -> np.ndarray:
    """Length-H windows packed into integers, first letter in the high bit."""
    n = w.size - H + 1
    if n <= 0:
        return np.empty(0, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    for i in range(H):
        out = (out << 1) | w[i : i + n].astype(np.int64)
    return out


def subword_complexity(source: str, H_max: int, length: int, c: float | None = None) -> list[tuple[int, int]]:
    """(H, number of distinct length-H factors) for H = 1..H_max."""
    if not 1 <= H_max <= 62:
        raise DomainError("H_max must lie in [1, 62]")
    w = word(source, length, c)
    return [(H, int(np.unique(_packed_windows(w, H)).size)) for H in range(1, H_max + 1)]


@dataclass(frozen=True)
class NormalityTable:
    c: float
    H: int
    N: int
    frequencies: dict  # pattern (packed, first letter high) -> Fraction

    @property
    def max_deviation(self) -> float:
        target = Fraction(1, 2**self.H)
        return float(max(abs(f - target) for f in self.frequencies.values()))

    @property
    def distinct(self) -> int:
        return sum(1 for f in self.frequencies.values() if f > 0)


def normality_stats(c: float, H: int, N: int) -> NormalityTable:
    """Frequencies of the 2^H windows (t(floor(n^c)), ..., t(floor((n+H-1)^c))), n <= N."""
    if not 0 <= H <= 16:
        raise DomainError("H must lie in [0, 16]")
    if N < 1:
        raise DomainError("N must be positive")
    if H == 0:
        return NormalityTable(c, 0, N, {0: Fraction(1)})
    w = ps_thue_morse(c, 1, N + H - 1)
    hist = np.bincount(_packed_windows(w, H), minlength=2**H)
    freqs = {pat: Fraction(int(v), N) for pat, v in enumerate(hist)}
    if sum(freqs.values()) != 1:
        raise InternalError("window frequencies do not sum to 1")
    return NormalityTable(c, H, N, freqs)
