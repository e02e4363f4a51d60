"""Van der Corput inequalities and the carry-propagation count, as checkable contracts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digits import sum_of_digits_array, truncated_digit_sum_array
from .errors import DomainError, InternalError, NumericRangeError


@dataclass(frozen=True)
class ComplexSeq:
    """z_n for n in the integer interval [start, start + len(values))."""

    values: np.ndarray
    start: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 1 or v.size < 1:
            raise DomainError("need a nonempty one-dimensional sequence")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def _lagged(z: np.ndarray, d: int) -> complex:
    """sum over n, n + d in I of z_n conj(z_{n+d}); d may be negative."""
    N = z.size
    if abs(d) >= N:
        return 0j
    if d >= 0:
        return complex(np.vdot(z[d:], z[: N - d]))
    return complex(np.vdot(z[: N + d], z[-d:]))


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-9) + 1e-9


def vdc_weighted(z: ComplexSeq, R: int) -> InequalityCheck:
    """|sum z|^2 against ((N+R-1)/R) sum_{|r|<R} (1 - |r|/R) sum_n z_{n+r} conj(z_n)."""
    if R < 1:
        raise DomainError("R must be a positive integer")
    v = z.values
    N = v.size
    lhs = abs(v.sum()) ** 2
    inner = float(np.vdot(v, v).real)
    residue = 0.0
    for r in range(1, min(R, N)):
        plus = _lagged(v, -r)  # sum z_{n+r} conj(z_n)
        minus = _lagged(v, r)  # sum z_{n-r} conj(z_n)
        pair = plus + minus
        residue += abs(pair.imag)
        inner += (1 - r / R) * pair.real
    rhs = (N + R - 1) / R * inner
    if residue > 1e-9 * max(abs(rhs), 1.0):
        raise InternalError(f"paired lag sums left an imaginary residue {residue}")
    return InequalityCheck(float(lhs), float(rhs))


def vdc_set(z: ComplexSeq, K) -> InequalityCheck:
    """|sum z|^2 against ((N + max K - min K)/|K|^2) sum_{k1,k2} sum_n z_n conj(z_{n+k1-k2})."""
    ks = np.unique(np.asarray(list(K), dtype=np.int64))
    if ks.size == 0:
        raise DomainError("K must be nonempty")
    v = z.values
    N = v.size
    lhs = abs(v.sum()) ** 2
    diffs, mult = np.unique((ks[:, None] - ks[None, :]).ravel(), return_counts=True)
    total = sum(int(m) * _lagged(v, int(d)) for d, m in zip(diffs, mult))
    rhs = (N + int(ks[-1]) - int(ks[0])) / ks.size**2 * total.real
    if abs(total.imag) > 1e-9 * max(abs(total.real), 1.0):
        raise InternalError(f"symmetric lag sum left an imaginary residue {total.imag}")
    return InequalityCheck(float(lhs), float(rhs))


@dataclass(frozen=True)
class CarryCount:
    count: int
    bound: float

    @property
    def holds(self) -> bool:
        return self.count <= self.bound


def carry_exception_count(alpha: float, beta: float, r: int, lam: int, N: int) -> CarryCount:
    """How often truncating to the lowest lam digits changes s(x + shift) - s(x).

    Runs over 0 <= n <= N with x = floor(alpha n + beta) and the shifted
    argument floor(alpha n + alpha r + beta).
    """
    if alpha <= 0 or beta < 0 or min(r, lam, N) < 0:
        raise DomainError("need alpha > 0, beta >= 0 and nonnegative r, lam, N")
    if not alpha * N + alpha * r + beta < 2**62:
        raise NumericRangeError("arguments do not fit below 2^62")
    n = np.arange(N + 1, dtype=np.float64)
    x0 = np.floor(alpha * n + beta).astype(np.int64)
    x1 = np.floor(alpha * n + alpha * r + beta).astype(np.int64)
    full = sum_of_digits_array(x1) - sum_of_digits_array(x0)
    trunc = truncated_digit_sum_array(x1, lam) - truncated_digit_sum_array(x0, lam)
    count = int(np.count_nonzero(full != trunc))
    return CarryCount(count, r * (alpha * N / 2**lam + 2))
