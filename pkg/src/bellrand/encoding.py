"""Bit-string encoding of the n-settings Bell functional and its local bound.

Alice holds one setting per complement class of n-bit strings, 2**(n-1)
settings in total; Bob holds n settings. The functional is

    sum_i sum_y (-1)**x^i_y  <A_i B_y>

Bit positions are numbered y = 1..n with y = 1 the most significant bit, so
the string ``0011`` has x_1 = x_2 = 0 and x_3 = x_4 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .errors import InvalidSettingCount, TooLargeForBruteForce

MIN_SETTINGS = 2
MAX_SETTINGS = 24
BRUTE_FORCE_MAX_SETTINGS = 12


@dataclass(frozen=True)
class BitString:
    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits={self.bits} does not fit in {self.n} positions")

    def bit(self, y: int) -> int:
        """Return x_y for 1-based position ``y`` (y = 1 is the leading bit)."""
        if not 1 <= y <= self.n:
            raise IndexError(f"bit position {y} outside 1..{self.n}")
        return (self.bits >> (self.n - y)) & 1

    @property
    def weight(self) -> int:
        return bin(self.bits).count("1")

    def complement(self) -> "BitString":
        return BitString(self.n, self.bits ^ ((1 << self.n) - 1))

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b")


@dataclass(frozen=True, eq=False)
class EncodingScheme:
    """The ordered representative strings x^1..x^{2^(n-1)}.

    ``codes`` holds the integer value of every string; ``signs`` is the
    (2**(n-1), n) matrix of coefficients (-1)**x^i_y.
    """

    n: int
    codes: np.ndarray

    @property
    def size(self) -> int:
        return len(self.codes)

    @cached_property
    def strings(self) -> tuple[BitString, ...]:
        return tuple(BitString(self.n, int(c)) for c in self.codes)

    @cached_property
    def signs(self) -> np.ndarray:
        shifts = np.arange(self.n - 1, -1, -1, dtype=np.int64)
        bits = (self.codes[:, None] >> shifts[None, :]) & 1
        out = 1 - 2 * bits.astype(np.int8)
        out.setflags(write=False)
        return out

    def __eq__(self, other):
        if not isinstance(other, EncodingScheme):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.codes, other.codes)

    def __hash__(self):
        return hash((self.n, self.codes.tobytes()))

    def __len__(self):
        return self.size


def _check_n(n: int, ceiling: int = MAX_SETTINGS) -> None:
    if not isinstance(n, (int, np.integer)) or not MIN_SETTINGS <= n <= ceiling:
        raise InvalidSettingCount(f"n must be an integer in [{MIN_SETTINGS}, {ceiling}], got {n!r}")


def _popcount(values: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros(values.shape, dtype=np.int64)
    for k in range(width):
        out += (values >> k) & 1
    return out


def build_scheme(n: int) -> EncodingScheme:
    """Canonical representative set for ``n`` settings.

    Every string of Hamming weight below n/2, plus (n even) the weight-n/2
    strings with a leading 0. Ordered by weight, then numeric value. For
    n = 3 and n = 4 this reproduces the printed sign tables row by row.
    """
    _check_n(n)
    codes = np.arange(1 << n, dtype=np.int64)
    weight = _popcount(codes, n)
    leading = (codes >> (n - 1)) & 1
    keep = 2 * weight < n
    if n % 2 == 0:
        keep |= (2 * weight == n) & (leading == 0)
    codes, weight = codes[keep], weight[keep]
    order = np.lexsort((codes, weight))
    codes = codes[order]
    codes.setflags(write=False)
    return EncodingScheme(n=int(n), codes=codes)


def coefficient(scheme: EncodingScheme, i: int, y: int) -> int:
    """(-1)**x^i_y with 1-based ``i`` and ``y``."""
    if not 1 <= i <= scheme.size:
        raise IndexError(f"Alice index {i} outside 1..{scheme.size}")
    if not 1 <= y <= scheme.n:
        raise IndexError(f"Bob index {y} outside 1..{scheme.n}")
    return int(scheme.signs[i - 1, y - 1])


def local_bound_closed(n: int) -> int:
    if n < MIN_SETTINGS:
        raise InvalidSettingCount(f"n must be >= {MIN_SETTINGS}, got {n}")
    return n * comb(n - 1, (n - 1) // 2)


def local_bound_symmetric_sum(n: int) -> int:
    """Half of sum_k C(n,k) |n - 2k|; equals the local bound for every n."""
    total = sum(comb(n, k) * abs(n - 2 * k) for k in range(n + 1))
    assert total % 2 == 0
    return total // 2


def bob_assignments(n: int) -> np.ndarray:
    """All 2**n deterministic Bob strategies as a (2**n, n) matrix of +-1."""
    codes = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return 1 - 2 * ((codes[:, None] >> shifts[None, :]) & 1)


def alice_optimized_values(n: int) -> np.ndarray:
    """Functional value for every Bob assignment with Alice answering optimally."""
    _check_n(n, BRUTE_FORCE_MAX_SETTINGS)
    signs = build_scheme(n).signs.astype(np.int64)
    inner = signs @ bob_assignments(n).T
    return np.abs(inner).sum(axis=0)


def local_bound_bruteforce(n: int) -> int:
    """Maximum over all deterministic strategies, by enumeration."""
    if isinstance(n, (int, np.integer)) and n > BRUTE_FORCE_MAX_SETTINGS:
        raise TooLargeForBruteForce(
            f"brute force limited to n <= {BRUTE_FORCE_MAX_SETTINGS}, got {n}"
        )
    return int(alice_optimized_values(n).max())


def copies_required(n: int) -> int:
    """Bell pairs needed for n pairwise anticommuting observables on Bob's side."""
    return n // 2


def quantum_optimum(n: int) -> float:
    return 2 ** (n - 1) * float(np.sqrt(n))
