"""Monic complex polynomials: evaluation, Vieta maps, zeros, symmetric functions.

A monic polynomial of degree N is stored as its N trailing coefficients
(c_1, ..., c_N) of

    p(x) = x^N + c_1 x^(N-1) + ... + c_N.

Zero vectors are ordered: the ordering indexes rows and columns of the
matrices built downstream, so it is never silently canonicalised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, NonConvergence

__all__ = [
    "MonicPolynomial",
    "ZeroVector",
    "evaluate",
    "poly_from_zeros",
    "roots",
    "sigma",
    "sigma_brute",
    "sigma_excluding",
    "sigma_excluding_brute",
    "vieta_jacobian_apply",
]

# Successive Aberth starting angles are separated by the golden angle, which
# never aligns two guesses symmetrically about the real axis.
_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

# Subset enumeration is for cross-testing only; beyond this size it explodes.
_BRUTE_FORCE_LIMIT = 12


def as_complex_vector(values, name: str = "values") -> np.ndarray:
    """Coerce to a 1-d complex128 array, rejecting empty or non-finite input."""
    arr = np.atleast_1d(np.asarray(values, dtype=complex))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must have finite components")
    return arr


@dataclass(frozen=True)
class MonicPolynomial:
    """Degree-N monic polynomial held as its N trailing coefficients."""

    coefficients: np.ndarray

    def __post_init__(self):
        arr = as_complex_vector(self.coefficients, "coefficients").copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coefficients", arr)

    @property
    def degree(self) -> int:
        return self.coefficients.size


@dataclass(frozen=True)
class ZeroVector:
    """Ordered tuple of complex zeros."""

    zeros: np.ndarray

    def __post_init__(self):
        arr = as_complex_vector(self.zeros, "zeros").copy()
        arr.flags.writeable = False
        object.__setattr__(self, "zeros", arr)

    @property
    def n(self) -> int:
        return self.zeros.size

    @property
    def separation(self) -> float:
        """Minimum pairwise distance between zeros (inf for a single zero).

        Values below ~1e-8 mean downstream 1/(z_n - z_l) factors amplify
        error; matrix builders surface this as a conditioning warning.
        """
        return pairwise_separation(self.zeros)


def pairwise_separation(values: np.ndarray) -> float:
    """Minimum off-diagonal |v_i - v_j|; inf when fewer than two entries."""
    if values.size < 2:
        return math.inf
    diff = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def _zeros_of(z) -> np.ndarray:
    return z.zeros if isinstance(z, ZeroVector) else as_complex_vector(z, "zeros")


def evaluate(p: MonicPolynomial, x):
    """Evaluate p at x (scalar or array) by nested multiplication."""
    xv = np.asarray(x, dtype=complex)
    acc = np.ones_like(xv)
    for c in p.coefficients:
        acc = acc * xv + c
    return acc if acc.ndim else complex(acc)


def _horner_with_derivative(coefficients: np.ndarray, x: np.ndarray):
    """Value and derivative of the monic polynomial with the given trailing
    coefficients, both by one Horner pass."""
    val = np.ones_like(x)
    der = np.zeros_like(x)
    for c in coefficients:
        der = der * x + val
        val = val * x + c
    return val, der


def poly_from_zeros(z) -> MonicPolynomial:
    """Expand prod_n (x - z_n) by incremental multiplication of linear factors.

    Coefficient m of the result equals (-1)^m * sigma(m, z).
    """
    zz = _zeros_of(z)
    full = np.ones(1, dtype=complex)
    for root in zz:
        full = np.convolve(full, np.array([1.0, -root]))
    return MonicPolynomial(full[1:])


def roots(p: MonicPolynomial, tol: float = 1e-12, max_iter: int = 200,
          start_phase: float = 0.4) -> ZeroVector:
    """All zeros of p by Aberth-Ehrlich simultaneous iteration.

    Starting guesses sit on a circle of radius 1 + max|c_m| with golden-angle
    spacing; convergence requires |p(z_n)| <= tol * (1 + max|c_m|) for every
    zero, after which each zero gets a guarded Newton polish.  Output is
    sorted by (re, im) ascending so repeated runs are reproducible.

    Raises NonConvergence when the iteration budget is exhausted; callers may
    retry with a different ``start_phase``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = p.coefficients
    n = p.degree
    if n == 1:
        return ZeroVector(np.array([-c[0]]))

    radius = 1.0 + float(np.max(np.abs(c)))
    z = radius * np.exp(1j * (start_phase + _GOLDEN_ANGLE * np.arange(n)))
    target = tol * radius
    tiny = np.finfo(float).tiny

    for _ in range(max_iter):
        val, der = _horner_with_derivative(c, z)
        if np.all(np.abs(val) <= target):
            break
        der = np.where(np.abs(der) < tiny, tiny, der)
        newton = val / der
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - newton * inv.sum(axis=1)
        denom = np.where(np.abs(denom) < tiny, 1.0, denom)
        z = z - newton / denom
    else:
        raise NonConvergence(
            f"Aberth iteration did not reach |p| <= {target:.3e} in {max_iter} steps")

    # Newton polish, kept only where it actually reduces the residual.
    best = np.abs(_horner_with_derivative(c, z)[0])
    for _ in range(2):
        val, der = _horner_with_derivative(c, z)
        der = np.where(np.abs(der) < tiny, tiny, der)
        candidate = z - val / der
        resid = np.abs(_horner_with_derivative(c, candidate)[0])
        improved = resid <= best
        z = np.where(improved, candidate, z)
        best = np.minimum(resid, best)

    order = np.lexsort((z.imag, z.real))
    return ZeroVector(z[order])


def _esp_table(values: np.ndarray) -> np.ndarray:
    """Elementary symmetric functions e_0..e_n of the entries, by the stable
    triangular recurrence (one linear-factor multiplication per entry)."""
    n = values.size
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for i in range(n):
        hi = min(i + 1, n)
        e[1:hi + 1] = e[1:hi + 1] + values[i] * e[0:hi]
    return e


def sigma(j: int, z) -> complex:
    """Elementary symmetric function of degree j; sigma(0, z) = 1 (void product)."""
    zz = _zeros_of(z)
    if j < 0 or j > zz.size:
        raise IndexError(f"sigma degree {j} outside 0..{zz.size}")
    return complex(_esp_table(zz)[j])


def sigma_excluding(m: int, j: int, z) -> complex:
    """Sum of (j-1)-fold products over index subsets avoiding index m (1-based).

    j = 1 returns 0 exactly: the sum over an empty set of indices vanishes by
    convention, even though the corresponding void product would be 1.
    """
    zz = _zeros_of(z)
    n = zz.size
    if not 1 <= m <= n:
        raise IndexError(f"excluded index {m} outside 1..{n}")
    if not 1 <= j <= n:
        raise IndexError(f"degree index {j} outside 1..{n}")
    if j == 1:
        return 0j
    return complex(_esp_table(np.delete(zz, m - 1))[j - 1])


def sigma_brute(j: int, z) -> complex:
    """Subset-enumeration twin of sigma, for cross-testing (n <= 12)."""
    zz = _zeros_of(z)
    if j < 0 or j > zz.size:
        raise IndexError(f"sigma degree {j} outside 0..{zz.size}")
    if zz.size > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute-force path limited to n <= {_BRUTE_FORCE_LIMIT}")
    return complex(sum(math.prod(t) for t in combinations(zz, j)))


def sigma_excluding_brute(m: int, j: int, z) -> complex:
    """Subset-enumeration twin of sigma_excluding, for cross-testing (n <= 12)."""
    zz = _zeros_of(z)
    n = zz.size
    if not 1 <= m <= n:
        raise IndexError(f"excluded index {m} outside 1..{n}")
    if not 1 <= j <= n:
        raise IndexError(f"degree index {j} outside 1..{n}")
    if n > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute-force path limited to n <= {_BRUTE_FORCE_LIMIT}")
    if j == 1:
        return 0j
    reduced = np.delete(zz, m - 1)
    return complex(sum(math.prod(t) for t in combinations(reduced, j - 1)))


def reduced_esp_table(z, m: int) -> np.ndarray:
    """e_0..e_{n-1} of z with entry m (1-based) removed.

    Entry j-1 is the true directional derivative d sigma_j / d z_m, i.e. the
    convention-adjusted value delta_{j,1} + sigma_excluding(m, j, z).
    """
    zz = _zeros_of(z)
    if not 1 <= m <= zz.size:
        raise IndexError(f"excluded index {m} outside 1..{zz.size}")
    return _esp_table(np.delete(zz, m - 1))[:zz.size]


def vieta_jacobian_apply(z, v) -> np.ndarray:
    """First-order change of the monic coefficients when the zeros move by v.

    Returns w with w_j = sum_m (d c_j / d z_m) v_m evaluated at z, i.e. the
    Jacobian of poly_from_zeros applied to the direction v.
    """
    zz = _zeros_of(z)
    vv = as_complex_vector(v, "v")
    if vv.size != zz.size:
        raise DimensionMismatch(f"direction has length {vv.size}, zeros {zz.size}")
    n = zz.size
    signs = (-1.0) ** np.arange(1, n + 1)
    w = np.zeros(n, dtype=complex)
    for m in range(n):
        w += vv[m] * signs * _esp_table(np.delete(zz, m))[:n]
    return w
