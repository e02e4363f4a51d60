"""Binary digit functions: s(n), t(n), truncated sums and the periodic model g_rho.

Scalar functions take Python ints of any size.  The ``*_array`` variants
work on numpy integer arrays (values must fit in 64 bits) and are the ones
used inside long sums.

``g_rho`` reduces a real argument mod 1 in double precision.  That is fine
for statistics and plots; every exact computation in the package works with
``truncated_digit_sum`` on integers instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

MAX_RHO = 24


def sum_of_digits(n: int) -> int:
    """Number of 1-bits in the binary expansion of ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return int(n).bit_count()


def thue_morse(n: int) -> int:
    """t(n) = s(n) mod 2."""
    return sum_of_digits(n) & 1


def truncated_digit_sum(n: int, lam: int) -> int:
    """Sum of the lowest ``lam`` binary digits of ``n`` (2^lam-periodic in n)."""
    if n < 0 or lam < 0:
        raise ValueError("n and lam must be nonnegative")
    return (int(n) & ((1 << lam) - 1)).bit_count()


def digit_at(n: int, j: int) -> int:
    """Binary digit of ``n`` in position ``j`` (position 0 is the lowest)."""
    if n < 0 or j < 0:
        raise ValueError("n and j must be nonnegative")
    return (int(n) >> j) & 1


def _as_u64(n) -> np.ndarray:
    a = np.asarray(n)
    if a.dtype.kind == "i":
        if a.size and a.min() < 0:
            raise ValueError("digit functions need nonnegative input")
        return a.astype(np.uint64)
    if a.dtype.kind == "u":
        return a.astype(np.uint64, copy=False)
    raise TypeError(f"integer array expected, got {a.dtype}")


def sum_of_digits_array(n) -> np.ndarray:
    return np.bitwise_count(_as_u64(n)).astype(np.int64)


def thue_morse_array(n) -> np.ndarray:
    return (np.bitwise_count(_as_u64(n)) & 1).astype(np.int8)


def truncated_digit_sum_array(n, lam: int) -> np.ndarray:
    if lam >= 64:
        return sum_of_digits_array(n)
    mask = np.uint64((1 << lam) - 1)
    return np.bitwise_count(_as_u64(n) & mask).astype(np.int64)


def thue_morse_sign_array(n) -> np.ndarray:
    """(-1)^{t(n)} as int8."""
    return (1 - 2 * thue_morse_array(n)).astype(np.int8)


@dataclass(frozen=True)
class PeriodicDigitModel:
    """Table of s_rho(k) for 0 <= k < 2^rho.

    The model realises the 1-periodic staircase g_rho with
    g_rho(t / 2^rho) = s_rho(floor(t)).
    """

    rho: int
    table: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def build(cls, rho: int) -> "PeriodicDigitModel":
        if not 0 <= rho <= MAX_RHO:
            raise ConfigurationError(f"rho must lie in [0, {MAX_RHO}], got {rho}")
        table = truncated_digit_sum_array(np.arange(1 << rho, dtype=np.uint64), rho)
        table.setflags(write=False)
        return cls(rho, table)

    @property
    def size(self) -> int:
        return 1 << self.rho

    def signs(self) -> np.ndarray:
        """(-1)^{s_rho(k)} on the 2^rho grid, i.e. e(g_rho / 2) at cell k."""
        return (1 - 2 * (self.table & 1)).astype(np.int8)


def g_rho(x: float, model: PeriodicDigitModel) -> int:
    frac = x - math.floor(x)
    cell = int(frac * model.size)
    # frac can round up to 1.0 for tiny negative x
    if cell >= model.size:
        cell = model.size - 1
    return int(model.table[cell])


def g_rho_array(x, model: PeriodicDigitModel) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    frac = x - np.floor(x)
    cells = np.minimum((frac * model.size).astype(np.int64), model.size - 1)
    return model.table[cells]
