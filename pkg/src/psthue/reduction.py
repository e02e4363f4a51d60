"""Ingredients of the digit-cutting reduction, at sampling scale.

* linear exponential sums and their average over alpha in [D, 2D];
* the sets K_i(alpha) of k <= B whose floors floor(alpha k), floor(gamma alpha k)
  have a block of zero digits;
* a sampler for the averaged correlation S_0 of two Beatty digit sums;
* the parameter system (lambda, mu, sigma, rho, m, l, R0, B, H, H_i, L_i) and
  its feasibility checks, evaluated exactly in the exponent domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .digits import sum_of_digits_array
from .errors import DomainError, InternalError, SizeError

WORD_GUARD = 50


def _dist_to_int(x):
    return np.abs(x - np.rint(x))


@dataclass(frozen=True)
class LinearSum:
    magnitude: float
    weyl_cap: float


def linear_expsum(alpha_t: float, N: int) -> LinearSum:
    """|sum_{n<=N} e(alpha_t n)| from the closed form |sin(pi N x) / sin(pi x)|."""
    if N < 1:
        raise DomainError("N must be positive")
    d = float(_dist_to_int(alpha_t))
    if d == 0.0:
        return LinearSum(float(N), float(N))
    mag = abs(math.sin(math.pi * N * d) / math.sin(math.pi * d))
    if mag > min(N, 1 / (2 * d)) * (1 + 1e-12) + 1e-9:
        raise InternalError(f"closed form {mag} exceeds min(N, 1/(2||x||))")
    return LinearSum(mag, min(float(N), 1 / d))


def _linear_magnitudes(x: np.ndarray, N: int) -> np.ndarray:
    d = _dist_to_int(x)
    out = np.full(d.shape, float(N))
    nz = d > 0
    out[nz] = np.abs(np.sin(np.pi * N * d[nz]) / np.sin(np.pi * d[nz]))
    return out


@dataclass(frozen=True)
class AveragedSum:
    W_hat: float
    cap: float
    ratio: float
    panels: int


def avg_linear_expsum(D: float, t: float, N: int, quad_points: int) -> AveragedSum:
    """Midpoint-rule value of the integral over [D, 2D] of |sum_{n<=N} e(alpha t n)| d alpha.

    cap = max(D log N, 1/|t|) is the size the averaged Weyl bound predicts.
    """
    if not (D > 10 and N > 10):
        raise DomainError("need D > 10 and N > 10")
    if not D * abs(t) >= 1 / N:
        raise DomainError("need D |t| >= 1/N")
    if quad_points < 1:
        raise DomainError("quad_points must be positive")
    h = D / quad_points
    alpha = D + h * (np.arange(quad_points) + 0.5)
    W = float(_linear_magnitudes(alpha * t, N).sum() * h)
    cap = max(D * math.log(N), 1 / abs(t))
    return AveragedSum(W, cap, W / cap, quad_points)


@dataclass(frozen=True)
class ReductionParams:
    """Digit-cutting parameters.

    Integers lam, mu, sigma, rho, m, l are used directly.  The sizes R0, B,
    H, H_i and L_i are kept as base-2 logarithms (exact rationals) so the
    parameter system can be checked at scales no machine number reaches; B
    may also be given as a plain integer for desk-scale set construction.
    """

    lam: int
    mu: int
    sigma: int
    rho: int
    m: int
    l: int = 10
    B: int | None = None
    log2_N: Fraction | None = None
    log2_D: Fraction | None = None
    theta1: Fraction | None = None
    eta1: Fraction | None = None
    log2_R0: Fraction | None = None
    log2_B: Fraction | None = None
    log2_H: Fraction | None = None
    log2_Hi: Fraction | None = None
    log2_L_small: Fraction | None = None
    log2_L_large: Fraction | None = None

    def lambda_i(self, i: int) -> int:
        return self.lam - (i - 1) * self.mu

    def invariant_violations(self) -> list[str]:
        out = []
        if self.rho != self.lam - self.m * self.mu:
            out.append("rho != lambda - m mu")
        if not self.sigma < self.mu:
            out.append("sigma >= mu")
        if self.m >= 1 and not self.lambda_i(self.m) > self.rho:
            out.append("lambda_m <= rho")
        return out


@dataclass(frozen=True)
class DigitConstrainedSet:
    alpha: float
    gamma: float
    B: int
    i: int
    variant: str
    positions: tuple  # (lowest, highest) bit index constrained, inclusive
    members: np.ndarray = field(repr=False, compare=False)
    expected: float = 0.0

    @property
    def size(self) -> int:
        return int(self.members.size)

    @property
    def ratio(self) -> float:
        return self.size / self.expected if self.expected else float("nan")


def _exact_floor_times(x: float, k: np.ndarray) -> np.ndarray:
    """floor(x k) for float x, exact (as Python ints, returned as int64)."""
    a, b = float(x).as_integer_ratio()
    return np.array([(a * int(v)) // b for v in k], dtype=np.int64)


def digit_constrained_set(alpha: float, gamma: float, params: ReductionParams, i: int,
                          variant: str = "both") -> DigitConstrainedSet:
    """k <= B with zero digits at positions j in (lambda - i mu - sigma, lambda_i].

    ``variant="both"`` constrains floor(alpha k) and floor(gamma alpha k);
    ``"gamma_only"`` constrains only the second one.  Positions below 0 are
    dropped.
    """
    if variant not in ("both", "gamma_only"):
        raise DomainError("variant must be 'both' or 'gamma_only'")
    if params.B is None or params.B < 1:
        raise DomainError("params.B must be a positive integer")
    top = params.lambda_i(i)
    if top > WORD_GUARD:
        raise SizeError(f"lambda_i = {top} exceeds the word guard {WORD_GUARD}")
    low = max(params.lam - i * params.mu - params.sigma + 1, 0)
    k = np.arange(1, params.B + 1, dtype=np.int64)
    width = max(top - low + 1, 0)
    mask = ((1 << width) - 1) << low if width else 0
    ga = float(gamma) * float(alpha)
    keep = (_exact_floor_times(ga, k) & mask) == 0
    if variant == "both":
        keep &= (_exact_floor_times(alpha, k) & mask) == 0
    factors = 2 if variant == "both" else 1
    expected = params.B / 2 ** (factors * width)
    return DigitConstrainedSet(float(alpha), float(gamma), params.B, i, variant,
                               (low, top), k[keep], expected)


@dataclass(frozen=True)
class S0Estimate:
    estimate: float
    ratio: float
    stderr: float
    samples: int
    lower_bound: bool = True  # beta is maximised over a finite grid only


def _beta_candidates(span: float, grid: int) -> np.ndarray:
    top = 2.0 ** max(math.ceil(math.log2(span)), 0)
    uniform = np.arange(grid) * (top / grid)
    powers = 2.0 ** np.arange(21)
    return np.concatenate([uniform, powers])


def s0_sample(D: float, N: int, gamma: float, alpha_samples: int, beta_grid: int, seed: int) -> S0Estimate:
    """Monte-Carlo value of the integral over [D, 2D] of
    max_{b1, b2} |sum_{n<=N} (-1)^{s(floor(alpha n + b1)) + s(floor(gamma alpha n + b2))}|.

    beta ranges over a uniform grid on [0, 2^ceil(log2(alpha N))) plus the
    powers 2^0..2^20, so the result bounds the true maximum from below.
    """
    if not 1 <= N <= 10**6:
        raise SizeError("N must lie in [1, 10^6]")
    if not 1 <= alpha_samples <= 10**4:
        raise SizeError("alpha_samples must lie in [1, 10^4]")
    if not 1 <= beta_grid <= 64:
        raise SizeError("beta_grid must lie in [1, 64]")
    if D <= 0 or gamma <= 0:
        raise DomainError("D and gamma must be positive")
    rng = np.random.default_rng(seed)
    n = np.arange(1, N + 1, dtype=np.float64)
    maxima = np.empty(alpha_samples)
    for s in range(alpha_samples):
        alpha = D * (1 + rng.random())
        rows = []
        for a in (alpha, gamma * alpha):
            betas = _beta_candidates(a * N, beta_grid)
            x = np.floor(a * n[None, :] + betas[:, None]).astype(np.int64)
            rows.append((1 - 2 * (sum_of_digits_array(x) & 1)).astype(np.float64))
        # sums are integers below 2^53, so the float product is exact
        corr = rows[0] @ rows[1].T
        maxima[s] = np.abs(corr).max()
    mean = float(maxima.mean())
    se = float(maxima.std(ddof=1) / math.sqrt(alpha_samples)) if alpha_samples > 1 else float("nan")
    return S0Estimate(D * mean, mean / N, D * se, alpha_samples)


# --- parameter feasibility -------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    slack: Fraction  # achieved margin; an exponent of N for the kappa checks


def _frac(x) -> Fraction:
    # decimal literals such as 0.05 are meant as 1/20, not their binary rounding
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def _floor(x: Fraction) -> int:
    return math.floor(x)


def section9_parameters(log2_N, log2_D, theta1, eta1=None, rho2=None):
    """Build the parameter tuple from log2 N, log2 D, theta1, eta1 and check every constraint.

    mu = floor(theta1 log2 N / 200), rho = floor(mu / 10), sigma = floor(eta1 rho / 10),
    l = 10, R0 = N^{1/10}, H = L_i (last l indices) = N^{9 theta1 / 10},
    B = H_i = N^{4/5}, L_i = 2^{5 mu} for the first m - l indices.  lambda
    starts at floor(log2(D N^{1/5})) and is lowered to rho + m mu, the
    largest such value, so that rho = lambda - m mu holds exactly.

    Returns (params, checks); nothing is raised for an infeasible regime.
    A check of the form X << N^{-kappa} Y reports kappa as its slack and
    holds when kappa > 0.
    """
    LN = _frac(log2_N)
    LD = _frac(log2_D)
    th = _frac(theta1)
    if eta1 is None:
        from .gowers import decay_fit

        eta1 = decay_fit(2, 2, 12).eta_hat
    e1 = _frac(eta1)
    if LN <= 0:
        raise DomainError("log2 N must be positive")
    l = 10
    mu = _floor(th * LN / 200)
    rho = mu // 10
    sigma = _floor(e1 * rho / 10)
    lam0 = _floor(LD + LN / 5)
    if mu > 0:
        m = (lam0 - rho) // mu
        lam = rho + m * mu
    else:
        m, lam = 0, lam0
    R0 = LN / 10
    H = 9 * th * LN / 10
    B = Hi = 4 * LN / 5
    L_large = 9 * th * LN / 10
    L_small = Fraction(5 * mu)
    params = ReductionParams(lam, mu, sigma, rho, m, l, None, LN, LD, th, e1, R0, B, H, Hi, L_small, L_large)

    checks: list[Check] = []

    def add(name, slack, strict=True):
        slack = Fraction(slack)
        checks.append(Check(name, slack > 0 if strict else slack >= 0, slack))

    floor_size = max(10 * rho, 10 * l * (mu + sigma))
    for nm, v in (("R0", R0), ("B", B), ("H_i", Hi)):
        add(f"{nm} << N^(1-kappa1)", (LN - v) / LN)
    for nm, v in (("R0", R0), ("B", B), ("H_i", Hi), ("H", H)):
        add(f"{nm} >> max(2^(10 rho), 2^(10 l (mu+sigma)))", v - floor_size, strict=False)
    add("eta1 rho >= 10 sigma", e1 * rho - 10 * sigma, strict=False)
    add("mu >= 10 rho", mu - 10 * rho, strict=False)
    add("2^sigma >> N^kappa2", Fraction(sigma) / LN)
    add("2^mu >> N^kappa2", Fraction(mu) / LN)
    add("R0 D << 2^lambda N^(-kappa3)", (lam - R0 - LD) / LN)
    add("B D >> 2^(lambda+rho+2mu+sigma) N^(1/2+kappa4)",
        (B + LD - lam - rho - 2 * mu - sigma) / LN - Fraction(1, 2))
    add("L_i >> max(2^(10 rho), 2^(10 l (mu+sigma))), i > m-l", L_large - floor_size, strict=False)
    add("L_i << N^(1-kappa5), i > m-l", (LN - L_large) / LN)
    add("2^(rho+4mu+4sigma) << L_i, i <= m-l", L_small - (rho + 4 * mu + 4 * sigma), strict=False)
    add("L_i << 2^(l mu), i <= m-l", l * mu - L_small, strict=False)
    add("H_i << N", LN - Hi, strict=False)
    add("H << N^theta1", th * LN - H, strict=False)
    add("L_i << N^theta1, i > m-l", th * LN - L_large, strict=False)
    add("L_i << N^theta1, i <= m-l", th * LN - L_small, strict=False)
    add("mu > 0", mu)
    add("sigma > 0", sigma)
    add("sigma >= 10", sigma - 10, strict=False)
    add("lambda - m mu > sigma", lam - m * mu - sigma)
    add("m > l", m - l)
    add("D >= N^10", LD - 10 * LN, strict=False)
    if rho2 is not None:
        add("D <= N^rho2", _frac(rho2) * LN - LD, strict=False)
    for v in params.invariant_violations():
        checks.append(Check(f"invariant: {v}", False, Fraction(0)))
    return params, checks
