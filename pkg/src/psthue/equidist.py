"""Discrepancy of finite point sets and the classical bounds built on it.

All discrepancies here are *extreme* discrepancies: the supremum runs over
every subinterval (or axis-parallel sub-box) of the unit cube, open, closed
or half-open, with no wrap-around.  The supremum of the positive deviation
is attained on closed boxes whose sides pass through point coordinates, the
negative one on open boxes whose sides pass through point coordinates or
the cube faces.  Both scans below enumerate exactly those candidates.

The Erdős–Turán–Koksma bracket is returned without the dimension constant.
In one dimension the classical Erdős–Turán inequality
D_N <= 6/(H+1) + (4/pi) sum_{h<=H} (1/h - 1/(H+1)) |S_h| gives
D_N <= 6 * bracket; that is the constant ``ETK_CONSTANT_1D``.  No constant
is asserted in two dimensions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, SizeError

ETK_CONSTANT_1D = 6.0
MAX_EXACT_2D = 5000


@dataclass(frozen=True)
class PointSet:
    dim: int
    points: np.ndarray  # shape (N,) for dim 1, (N, 2) for dim 2

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError("only dimensions 1 and 2 are supported")
        p = self.points
        if len(p) == 0:
            raise DomainError("point set must be nonempty")
        if (self.dim == 1 and p.ndim != 1) or (self.dim == 2 and (p.ndim != 2 or p.shape[1] != 2)):
            raise DomainError("points have the wrong shape for the dimension")
        if not (np.all(p >= 0.0) and np.all(p < 1.0)):
            raise DomainError("coordinates must lie in [0, 1)")

    @classmethod
    def from_values(cls, values) -> "PointSet":
        """Reduce reals (1D array) or pairs ((N, 2) array) mod 1."""
        v = np.asarray(values, dtype=np.float64)
        r = v - np.floor(v)
        # x - floor(x) rounds up to 1.0 for tiny negative x
        r[r >= 1.0] = 0.0
        return cls(1 if r.ndim == 1 else 2, r)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DiscrepancyResult:
    value: float
    witness: tuple  # ((a, b), closed) in 1D, ((a1, b1), (a2, b2), closed) in 2D
    star: float | None = None


def interval_deviation(points: np.ndarray, a: float, b: float, closed: bool) -> float:
    """|#{x in J}/N - (b - a)| for J = [a, b] or (a, b), evaluated exactly."""
    x = np.asarray(points)
    inside = (x >= a) & (x <= b) if closed else (x > a) & (x < b)
    cnt = int(inside.sum())
    return float(abs(Fraction(cnt, len(x)) - (Fraction(b) - Fraction(a))))


def box_deviation(points: np.ndarray, xr, yr, closed: bool) -> float:
    (a1, b1), (a2, b2) = xr, yr
    x, y = points[:, 0], points[:, 1]
    if closed:
        inside = (x >= a1) & (x <= b1) & (y >= a2) & (y <= b2)
    else:
        inside = (x > a1) & (x < b1) & (y > a2) & (y < b2)
    cnt = int(inside.sum())
    area = (Fraction(b1) - Fraction(a1)) * (Fraction(b2) - Fraction(a2))
    return float(abs(Fraction(cnt, len(points)) - area))


def _prefix_argmax(a: np.ndarray):
    """Running maximum and the index where it was attained."""
    idx = np.arange(len(a))
    best = np.maximum.accumulate(a)
    arg = np.maximum.accumulate(np.where(a == best, idx, 0))
    return best, arg


def discrepancy_1d(ps: PointSet) -> DiscrepancyResult:
    if ps.dim != 1:
        raise DomainError("discrepancy_1d needs a 1D point set")
    x = np.sort(ps.points)
    n = len(x)
    v, counts = np.unique(x, return_counts=True)
    le = np.cumsum(counts)  # #{x <= v_j}
    lt = le - counts  # #{x < v_j}

    # closed [v_i, v_j]: (le_j/N - v_j) + (v_i - lt_i/N), i <= j
    a_term = v - lt / n
    pre, pre_arg = _prefix_argmax(a_term)
    pos = le / n - v + pre
    j_pos = int(np.argmax(pos))
    i_pos = int(pre_arg[j_pos])
    best_pos = (float(v[i_pos]), float(v[j_pos]))

    # open (a, b), a in {0} u V, b in V u {1}: (b - lt_b/N) + (le_a/N - a), a < b
    zeros = int(counts[0]) if v[0] == 0.0 else 0
    a_vals = np.concatenate(([0.0], v))
    a_le = np.concatenate(([zeros], le))
    g = a_le / n - a_vals
    gpre, garg = _prefix_argmax(g)
    # b = v_j may pair with a_vals[0..j-1] (index shift by one); a = 0 needs v_j > 0
    b_vals = np.concatenate((v, [1.0]))
    b_lt = np.concatenate((lt, [n]))
    neg = np.full(len(b_vals), -np.inf)
    neg_arg = np.zeros(len(b_vals), dtype=np.int64)
    for_b = gpre[: len(b_vals)]
    neg[:] = b_vals - b_lt / n + for_b
    neg_arg[:] = garg[: len(b_vals)]
    if v[0] == 0.0:
        # b = 0 has no admissible a
        neg[0] = -np.inf
    j_neg = int(np.argmax(neg))
    best_neg = (float(a_vals[neg_arg[j_neg]]), float(b_vals[j_neg]))

    d_pos = interval_deviation(x, *best_pos, closed=True)
    d_neg = interval_deviation(x, *best_neg, closed=False) if np.isfinite(neg[j_neg]) else 0.0
    if d_pos >= d_neg:
        res = (d_pos, (best_pos, True))
    else:
        res = (d_neg, (best_neg, False))
    return DiscrepancyResult(res[0], res[1], star_discrepancy_1d(x))


def star_discrepancy_1d(points) -> float:
    """sup over [0, b) of |#/N - b| (never more than the extreme discrepancy)."""
    x = np.sort(np.asarray(points, dtype=np.float64))
    n = len(x)
    v, counts = np.unique(x, return_counts=True)
    le = np.cumsum(counts)
    lt = le - counts
    return float(max(np.max(le / n - v), np.max(v - lt / n), 0.0))


def discrepancy_2d(ps: PointSet) -> DiscrepancyResult:
    if ps.dim != 2:
        raise DomainError("discrepancy_2d needs a 2D point set")
    n = len(ps)
    if n > MAX_EXACT_2D:
        raise SizeError(f"exact 2D discrepancy is limited to N <= {MAX_EXACT_2D}; use grid_discrepancy_2d")
    pts = ps.points
    U, ix = np.unique(pts[:, 0], return_inverse=True)
    W, iy = np.unique(pts[:, 1], return_inverse=True)
    K, L = len(U), len(W)
    M = np.zeros((K, L), dtype=np.int64)
    np.add.at(M, (ix, iy), 1)

    best = (-1.0, None)

    # closed boxes [U_i, U_j] x [W_k, W_l]
    for i in range(K):
        S = np.cumsum(M[i:], axis=0)  # rows j = i..K-1: column counts over x in [U_i, U_j]
        le = np.cumsum(S, axis=1)
        lt = le - S
        Lx = (U[i:] - U[i])[:, None]
        a_term = Lx * W[None, :] - lt / n
        pre = np.maximum.accumulate(a_term, axis=1)
        val = le / n - Lx * W[None, :] + pre
        r, l = np.unravel_index(int(np.argmax(val)), val.shape)
        if val[r, l] > best[0]:
            row = a_term[r, : l + 1]
            k = int(np.flatnonzero(row == row.max())[0])
            best = (float(val[r, l]), ((U[i], U[i + r]), (W[k], W[l]), True))

    # open boxes with sides in {0} u coords u {1}
    Xe = np.concatenate(([0.0], U, [1.0]))
    We = np.concatenate(([0.0], W, [1.0]))
    Me = np.zeros((K + 2, L + 2), dtype=np.int64)
    Me[1 : K + 1, 1 : L + 1] = M
    for ia in range(K + 1):
        # interior rows ia+1 .. jb-1 for jb = ia+1 .. K+1
        inner = np.zeros((K + 1 - ia, L + 2), dtype=np.int64)
        inner[1:] = np.cumsum(Me[ia + 1 : K + 1], axis=0)
        le = np.cumsum(inner, axis=1)  # rows with index <= c
        lt = le - inner  # index < c
        Lx = (Xe[ia + 1 :] - Xe[ia])[:, None]
        g = le / n - Lx * We[None, :]
        gpre = np.maximum.accumulate(g, axis=1)
        val = np.full(le.shape, -np.inf)
        val[:, 1:] = Lx * We[None, 1:] - lt[:, 1:] / n + gpre[:, :-1]
        r, lb = np.unravel_index(int(np.argmax(val)), val.shape)
        if val[r, lb] > best[0]:
            row = g[r, :lb]
            ka = int(np.flatnonzero(row == row.max())[0])
            best = (float(val[r, lb]), ((Xe[ia], Xe[ia + 1 + r]), (We[ka], We[lb]), False))

    xr, yr, closed = best[1]
    xr = (float(xr[0]), float(xr[1]))
    yr = (float(yr[0]), float(yr[1]))
    value = box_deviation(pts, xr, yr, closed)
    return DiscrepancyResult(value, (xr, yr, closed))


def _window_max(P: np.ndarray, A: np.ndarray, n: int, G: int, shrink: int):
    """max over k < l of (P[:, l] - P[:, k]) / n - A (l - k - shrink)_+ / G, row-wise."""
    rows, cols = P.shape  # cols = G + 1
    out = np.full(rows, -np.inf)
    for w in range(1, min(shrink, G) + 1):
        out = np.maximum(out, np.max(P[:, w:] - P[:, :-w], axis=1) / n)
    if G > shrink:
        idx = np.arange(cols)
        left = A[:, None] * idx[None, :] / G - P / n
        pre = np.maximum.accumulate(left, axis=1)
        right = P / n - A[:, None] * idx[None, :] / G
        cand = right[:, shrink:] + pre[:, : cols - shrink] + A[:, None] * shrink / G
        out = np.maximum(out, cand.max(axis=1))
    return out


def _window_min_count(P: np.ndarray, A: np.ndarray, n: int, G: int):
    """max over k < l of A (l - k)/G - (P[:, l] - P[:, k]) / n, row-wise."""
    cols = P.shape[1]
    idx = np.arange(cols)
    left = P / n - A[:, None] * idx[None, :] / G
    pre = np.maximum.accumulate(left, axis=1)
    right = A[:, None] * idx[None, :] / G - P / n
    return (right[:, 1:] + pre[:, :-1]).max(axis=1)


def grid_discrepancy_2d(ps: PointSet, grid: int) -> tuple[float, float]:
    """Lower and upper bounds for the 2D extreme discrepancy from a G x G cell grid.

    The lower bound is the largest deviation over half-open boxes with grid
    corners (each is a genuine box).  The upper bound sandwiches an arbitrary
    box between the cells it touches and the cells strictly inside it.
    Cost is O(G^3).
    """
    if ps.dim != 2:
        raise DomainError("grid_discrepancy_2d needs a 2D point set")
    G = int(grid)
    if G < 1:
        raise DomainError("grid must be positive")
    n = len(ps)
    cx = np.minimum((ps.points[:, 0] * G).astype(np.int64), G - 1)
    cy = np.minimum((ps.points[:, 1] * G).astype(np.int64), G - 1)
    C = np.zeros((G, G), dtype=np.int64)
    np.add.at(C, (cx, cy), 1)

    lower = 0.0
    upper = 0.0
    for i in range(G):
        colsum = np.cumsum(C[i:], axis=0)  # x-cells i..j-1 for j = i+1..G
        P = np.zeros((G - i, G + 1), dtype=np.int64)
        P[:, 1:] = np.cumsum(colsum, axis=1)
        width = np.arange(1, G - i + 1, dtype=np.float64)
        Ax = width / G
        # exact half-open grid boxes
        lower = max(lower, float(_window_max(P, Ax, n, G, 0).max()))
        lower = max(lower, float(_window_min_count(P, Ax, n, G).max()))
        # upper, positive side: outer count against shrunken inner area
        Ain = np.maximum(width - 2, 0) / G
        upper = max(upper, float(_window_max(P, Ain, n, G, 2).max()))
        # upper, negative side: outer area against strictly interior count
        inner = np.zeros((G - i, G + 1), dtype=np.int64)
        if G - i > 2:
            ic = np.cumsum(C[i + 1 : G - 1], axis=0)  # rows i+1..j-2 for j = i+3..G
            inner[2 : 2 + len(ic), 1:] = np.cumsum(ic, axis=1)
        upper = max(upper, float(_interior_scan(inner, Ax, n, G).max()))
    return lower, max(upper, lower)


def _interior_scan(P: np.ndarray, A: np.ndarray, n: int, G: int):
    """max over k < l of A (l - k)/G - count(y-cells k+1 .. l-2)/n.

    P holds prefix counts over y-cells of the strictly interior x-cells.
    """
    rows, cols = P.shape
    out = 2 * A / G  # l - k <= 2: no interior y-cells
    if G >= 2:
        idx = np.arange(cols)
        # m = k + 1 in [1, G-1], q = l - 1 in [m, G-1]; count = P[q] - P[m]
        left = P / n - A[:, None] * idx[None, :] / G  # uses m
        right = A[:, None] * idx[None, :] / G - P / n  # uses q
        pre = np.maximum.accumulate(left[:, 1:G], axis=1)
        cand = right[:, 1:G] + pre + 2 * A[:, None] / G
        out = np.maximum(out, cand.max(axis=1))
    return out


def etk_bound(ps: PointSet, H: int) -> float:
    """1/H + sum_{0 < |h| <= H} |mean e(<h, x_n>)| / r(h), without the dimension constant."""
    if H < 1:
        raise DomainError("H must be positive")
    x = ps.points
    hs = np.arange(1, H + 1)
    if ps.dim == 1:
        S = np.abs(np.exp(2j * np.pi * np.outer(hs, x)).mean(axis=1))
        return float(1.0 / H + 2.0 * np.sum(S / hs))
    total = 1.0 / H
    h = np.arange(-H, H + 1)
    e1 = np.exp(2j * np.pi * np.outer(h, x[:, 0]))  # (2H+1, N)
    e2 = np.exp(2j * np.pi * np.outer(h, x[:, 1]))
    S = np.abs(e1 @ e2.T) / len(x)  # S[a, b] = |mean e(h_a x + h_b y)|
    r = np.maximum(1, np.abs(h))
    weight = 1.0 / np.outer(r, r)
    weight[H, H] = 0.0
    total += float(np.sum(weight * S))
    return total


# ---------------------------------------------------------------------------
# trigonometric approximation of an interval indicator


def _vaaler_weight(t: np.ndarray) -> np.ndarray:
    t = np.abs(t)
    return np.pi * t * (1 - t) / np.tan(np.pi * t) + t


@dataclass(frozen=True)
class FourierExpansion:
    """1_[a,b](x) ~ (b - a) + theta0/H + sum_{0<|h|<=H} theta_h/|h| e(h x).

    Built from Vaaler's polynomial for the sawtooth, so |theta_h| <= 1/pi
    and theta0 = 0; the x-dependent remainder is bounded by
    ``error_majorant``.
    """

    a: float
    b: float
    H: int
    theta0: complex
    theta: dict

    def coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        hs = np.array(sorted(self.theta), dtype=np.int64)
        return hs, np.array([self.theta[h] / abs(h) for h in hs])

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        hs, cs = self.coefficients()
        val = (self.b - self.a) + self.theta0 / self.H + np.exp(2j * np.pi * np.multiply.outer(x, hs)) @ cs
        return val.real

    def error_majorant(self, x) -> np.ndarray:
        """(K(a - x) + K(b - x)) / (2H + 2) with K the Fejér kernel of order H."""
        x = np.asarray(x, dtype=np.float64)
        return (_fejer(self.a - x, self.H) + _fejer(self.b - x, self.H)) / (2 * self.H + 2)


def _fejer(t, H: int) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    s = np.sin(np.pi * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin(np.pi * (H + 1) * t) ** 2 / ((H + 1) * s**2)
    return np.where(np.abs(s) < 1e-12, float(H + 1), val)


def indicator_fourier_expansion(a: float, b: float, H: int) -> FourierExpansion:
    if not 0 <= a < b <= 1:
        raise DomainError("need 0 <= a < b <= 1")
    if H < 10:
        raise DomainError("H must be at least 10")
    theta = {}
    for h in range(-H, H + 1):
        if h == 0:
            continue
        w = float(_vaaler_weight(np.array(h / (H + 1))))
        coef = w * (np.exp(-2j * np.pi * h * a) - np.exp(-2j * np.pi * h * b)) / (2j * np.pi * h)
        theta[h] = complex(coef * abs(h))
    return FourierExpansion(float(a), float(b), int(H), 0j, theta)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FracWindowResult:
    count: int
    main: float
    residual: float
    discrepancy: float


def frac_window_count(alpha: float, beta: float, N: int, t: int, T: int) -> FracWindowResult:
    """#{1 <= n <= N : t/T <= {alpha n + beta} < (t+1)/T} against N/T.

    ``residual`` is |count - N/T| / (N D_N(alpha n)); a shifted window mod 1
    splits into at most two intervals, so it never exceeds 2.
    """
    if not 0 <= t < T:
        raise DomainError("need 0 <= t < T")
    if N < 1:
        raise DomainError("N must be positive")
    n = np.arange(1, N + 1, dtype=np.float64)
    y = alpha * n + beta
    frac = y - np.floor(y)
    scaled = frac * T
    count = int(np.count_nonzero((scaled >= t) & (scaled < t + 1)))
    d = discrepancy_1d(PointSet.from_values(alpha * n)).value
    main = N / T
    return FracWindowResult(count, main, abs(count - main) / (N * d), d)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant function on [0,1)^d, d in {1, 2}, constant on grid cells.

    ``breaks[j]`` is 0 = eta_0 < ... < eta_k = 1 along axis j and
    ``values[i1, i2]`` the value on [eta_i1, eta_{i1+1}) x [eta_i2, eta_{i2+1}).
    """

    breaks: tuple
    values: np.ndarray

    def __post_init__(self):
        if len(self.breaks) != self.values.ndim or self.values.ndim not in (1, 2):
            raise DomainError("one breakpoint list per axis, 1 or 2 axes")
        for j, br in enumerate(self.breaks):
            br = np.asarray(br, dtype=np.float64)
            if br.ndim != 1 or len(br) < 2 or br[0] != 0.0 or br[-1] != 1.0 or np.any(np.diff(br) <= 0):
                raise DomainError("breakpoints must increase strictly from 0 to 1")
            if len(br) - 1 != self.values.shape[j]:
                raise DomainError("values shape does not match the breakpoints")

    @classmethod
    def create(cls, breaks, values) -> "StepFunction":
        v = np.asarray(values, dtype=np.float64)
        if v.ndim == 1 and not isinstance(breaks[0], (list, tuple, np.ndarray)):
            breaks = (breaks,)
        return cls(tuple(np.asarray(b, dtype=np.float64) for b in breaks), v)

    @classmethod
    def product(cls, f: "StepFunction", g: "StepFunction") -> "StepFunction":
        return cls((f.breaks[0], g.breaks[0]), np.outer(f.values, g.values))

    @property
    def dim(self) -> int:
        return self.values.ndim

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64)
        if self.dim == 1:
            i = np.searchsorted(self.breaks[0], pts, side="right") - 1
            return self.values[i]
        i = np.searchsorted(self.breaks[0], pts[:, 0], side="right") - 1
        j = np.searchsorted(self.breaks[1], pts[:, 1], side="right") - 1
        return self.values[i, j]

    def integral(self) -> float:
        w = [np.diff(b) for b in self.breaks]
        if self.dim == 1:
            return float(np.dot(w[0], self.values))
        return float(w[0] @ self.values @ w[1])

    def hardy_krause_variation(self) -> float:
        """Hardy–Krause variation anchored at (1, ..., 1).

        Sum over nonempty coordinate subsets of the Vitali variation of the
        restriction to the face where the other coordinates equal 1; each is
        the difference-operator sum over the cell partition.
        """
        v = self.values
        if self.dim == 1:
            return float(np.abs(np.diff(v)).sum())
        vitali = np.abs(np.diff(np.diff(v, axis=0), axis=1)).sum()
        face_x = np.abs(np.diff(v[:, -1])).sum()
        face_y = np.abs(np.diff(v[-1, :])).sum()
        return float(vitali + face_x + face_y)


@dataclass(frozen=True)
class KoksmaHlawkaResult:
    err: float
    bound: float
    variation: float
    discrepancy: float


def koksma_hlawka_check(f: StepFunction, ps: PointSet) -> KoksmaHlawkaResult:
    if f.dim != ps.dim:
        raise DomainError("function and point set dimensions differ")
    mean = float(np.mean(f(ps.points)))
    err = abs(mean - f.integral())
    V = f.hardy_krause_variation()
    d = discrepancy_1d(ps).value if ps.dim == 1 else discrepancy_2d(ps).value
    return KoksmaHlawkaResult(err, V * d, V, d)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeanSquareResult:
    mean: float
    ratio: float
    stderr: float
    samples: int


def kronecker_discrepancy(alpha: float, N: int) -> float:
    """D_N of {alpha n}, n = 1..N."""
    n = np.arange(1, N + 1, dtype=np.float64)
    return discrepancy_1d(PointSet.from_values(alpha * n)).value


def mean_square_discrepancy_estimate(N: int, samples: int, seed: int) -> MeanSquareResult:
    """Monte-Carlo estimate of the integral of D_N(alpha n) over alpha in [0, 1)."""
    if N < 3:
        raise DomainError("N must be at least 3")
    if samples < 1:
        raise DomainError("samples must be positive")
    rng = np.random.default_rng(seed)
    alphas = rng.random(samples)
    d = np.array([kronecker_discrepancy(float(a), N) for a in alphas])
    mean = float(d.mean())
    stderr = float(d.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
    return MeanSquareResult(mean, mean / (math.log(N) ** 2 / N), stderr, samples)
