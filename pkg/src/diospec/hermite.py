"""Hermite polynomials (physicists' convention): coefficients, zeros, the two
equilibrium identities the zeros satisfy, and the coefficient-ordering
machinery that turns them into monic seed polynomials.

The N real zeros of H_N serve as the coefficient pool; each of the N!
orderings produces one monic polynomial whose own zeros feed the matrix
constructions in :mod:`diospec.matrices`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import islice, permutations
from typing import Iterator, Optional

import numpy as np

from .errors import DimensionMismatch, NonConvergence
from .polynomials import MonicPolynomial

__all__ = [
    "MAX_ORDER",
    "HermiteZeros",
    "PermutationId",
    "hermite_coefficients",
    "hermite_zeros",
    "residual_first_order",
    "residual_second_order",
    "enumerate_orderings",
    "permuted_polynomial",
]

# Full-pipeline cap: the N! sweep and the matrix spectra are desk-scale below
# this; zero computation itself would be fine far beyond.
MAX_ORDER = 30

# Coefficients involve factorial ratios; past 170 even the intermediate
# factorial overflows a double's exponent range.
_FACTORIAL_CAP = 170

_RESIDUAL_BOUND = 1e-10


def hermite_coefficients(n: int) -> np.ndarray:
    """Dense monomial coefficients of H_n, highest power first.

    H_n(x) = n! * sum_{k=0..floor(n/2)} (-1)^k (2x)^(n-2k) / (k! (n-2k)!).
    The coefficients are integers, exact in double precision for n <= 20.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n > _FACTORIAL_CAP:
        raise OverflowError(f"order {n} exceeds double-precision factorial range")
    coeffs = np.zeros(n + 1)
    fact_n = math.factorial(n)
    for k in range(n // 2 + 1):
        value = (-1) ** k * 2 ** (n - 2 * k) * (fact_n // (math.factorial(k) * math.factorial(n - 2 * k)))
        coeffs[2 * k] = float(value)
    return coeffs


def hermite_recurrence(n: int, x):
    """(H_n(x), H_n'(x)) via the three-term recurrence, stable for large n."""
    xv = np.asarray(x, dtype=float)
    prev = np.zeros_like(xv)       # H_{k-1}
    cur = np.ones_like(xv)         # H_k, starting at k = 0
    for k in range(n):
        prev, cur = cur, 2.0 * xv * cur - 2.0 * k * prev
    return cur, 2.0 * n * prev


@dataclass(frozen=True)
class HermiteZeros:
    """Ascending zeros of H_N plus the residuals of the two equilibrium
    identities they satisfy."""

    order: int
    zeros: np.ndarray
    residual_first: float
    residual_second: float

    def __post_init__(self):
        arr = np.asarray(self.zeros, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "zeros", arr)


@lru_cache(maxsize=None)
def hermite_zeros(n: int) -> HermiteZeros:
    """Zeros of H_n from the symmetric tridiagonal Jacobi matrix (off-diagonal
    sqrt(k/2)), polished by one Newton step on the recurrence evaluation.

    The zero set is antisymmetrised exactly about 0; for odd n the central
    zero is pinned to 0.
    """
    if not 2 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in 2..{MAX_ORDER}, got {n}")
    off = np.sqrt(np.arange(1, n) / 2.0)
    jacobi = np.diag(off, 1) + np.diag(off, -1)
    x = np.sort(np.linalg.eigvalsh(jacobi))

    value, deriv = hermite_recurrence(n, x)
    x = x - value / deriv          # simple zeros: deriv bounded away from 0
    x = 0.5 * (x - x[::-1])
    if n % 2:
        x[n // 2] = 0.0

    r1 = residual_first_order(x)
    r2 = residual_second_order(x)
    if max(r1, r2) > _RESIDUAL_BOUND:
        raise NonConvergence(
            f"equilibrium residuals {r1:.3e}/{r2:.3e} exceed {_RESIDUAL_BOUND} at n={n}")
    return HermiteZeros(n, x, r1, r2)


def _pairwise_differences(c) -> np.ndarray:
    arr = np.asarray(c, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError("need a 1-d vector with at least two entries")
    diff = arr[:, None] - arr[None, :]
    off = ~np.eye(arr.size, dtype=bool)
    if np.any(diff[off] == 0.0):
        raise ZeroDivisionError("coincident entries make the residual singular")
    np.fill_diagonal(diff, np.inf)
    return diff


def residual_first_order(c) -> float:
    """Max over m of |c_m - sum_{l != m} 1/(c_m - c_l)|.

    Zero exactly when c is a stationary configuration of the first-order
    coefficient flow; Hermite zeros satisfy this identity.
    """
    arr = np.asarray(c, dtype=float)
    diff = _pairwise_differences(arr)
    return float(np.max(np.abs(arr - (1.0 / diff).sum(axis=1))))


def residual_second_order(c) -> float:
    """Max over m of |-c_m + 2 sum_{l != m} 1/(c_m - c_l)^3|.

    Zero exactly when c is an equilibrium of the second-order coefficient
    flow; Hermite zeros satisfy this identity as well.
    """
    arr = np.asarray(c, dtype=float)
    diff = _pairwise_differences(arr)
    return float(np.max(np.abs(-arr + 2.0 * (1.0 / diff ** 3).sum(axis=1))))


@dataclass(frozen=True)
class PermutationId:
    """One of the n! coefficient orderings: a permutation word on 1..n and its
    1-based lexicographic rank."""

    n: int
    word: tuple
    ordinal: int

    def __post_init__(self):
        word = tuple(int(w) for w in self.word)
        object.__setattr__(self, "word", word)
        if sorted(word) != list(range(1, self.n + 1)):
            raise ValueError(f"word {word} is not a permutation of 1..{self.n}")
        if self.ordinal != lexicographic_rank(word):
            raise ValueError(
                f"ordinal {self.ordinal} inconsistent with word {word}")

    @classmethod
    def from_word(cls, word) -> "PermutationId":
        word = tuple(int(w) for w in word)
        return cls(len(word), word, lexicographic_rank(word))

    @classmethod
    def from_rank(cls, n: int, ordinal: int) -> "PermutationId":
        return cls(n, word_from_rank(n, ordinal), ordinal)


def lexicographic_rank(word) -> int:
    """1-based rank of a permutation word among all orderings of its length."""
    word = list(word)
    n = len(word)
    rank = 0
    remaining = sorted(word)
    for i, w in enumerate(word):
        pos = remaining.index(w)
        rank += pos * math.factorial(n - 1 - i)
        remaining.pop(pos)
    return rank + 1


def word_from_rank(n: int, ordinal: int) -> tuple:
    """Inverse of lexicographic_rank (factorial number system)."""
    if not 1 <= ordinal <= math.factorial(n):
        raise ValueError(f"rank {ordinal} outside 1..{n}!")
    rank = ordinal - 1
    remaining = list(range(1, n + 1))
    word = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        pos, rank = divmod(rank, f)
        word.append(remaining.pop(pos))
    return tuple(word)


def enumerate_orderings(n: int, limit: Optional[int] = None) -> Iterator[PermutationId]:
    """Stream all n! permutation words in lexicographic order (or the first
    ``limit`` of them) without materialising the full set."""
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    stream = (
        PermutationId(n, word, rank)
        for rank, word in enumerate(permutations(range(1, n + 1)), start=1)
    )
    return islice(stream, limit) if limit is not None else stream


def permuted_polynomial(h: HermiteZeros, perm: PermutationId) -> MonicPolynomial:
    """Monic polynomial whose coefficient list is the permuted Hermite zeros:
    coefficient slot k receives sorted zero number perm.word[k-1]."""
    if perm.n != h.order:
        raise DimensionMismatch(
            f"permutation on {perm.n} symbols cannot order {h.order} zeros")
    return MonicPolynomial(h.zeros[np.asarray(perm.word) - 1])
