"""The two closed-form matrices with integer and squared-integer spectra.

Both matrices are assembled from an ordered zero vector z of a monic
polynomial together with that polynomial's coefficient list c.  Entry (n, m)
is

    -[prod_{l != n} (z_n - z_l)]^(-1)
        * sum_j z_n^(N-j) [ w_{j,m} + K sum_{s != j} (w_{j,m} - w_{s,m})
                                                   / (c_j - c_s)^P ]

with (K, P) = (1, 2) for kind M1 and (6, 4) for kind M2, where w_{j,m} is the
Jacobian of the zeros-to-coefficients map.  When the coefficient pool is the
zeros of a Hermite polynomial, the eigenvalues are exactly 1..N (M1) and
1, 4, ..., N^2 (M2), independent of the coefficient ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import eig
from .errors import SingularConfiguration
from .hermite import PermutationId
from .polynomials import as_complex_vector, pairwise_separation, reduced_esp_table

__all__ = [
    "KIND_M1",
    "KIND_M2",
    "CONDITIONING_FLOOR",
    "WTable",
    "DiophantineMatrix",
    "SpectrumReport",
    "w_table",
    "build_m1",
    "build_m2",
    "expected_spectrum",
    "expected_trace",
    "expected_determinant",
    "spectrum_check",
    "permutation_similarity_check",
]

KIND_M1 = "M1"
KIND_M2 = "M2"

# Below this separation the 1/(z_n - z_l) and 1/(c_j - c_s) factors amplify
# roundoff enough that a failed spectrum check is inconclusive, not a fail.
CONDITIONING_FLOOR = 1e-6

_profiles = {KIND_M1: (1.0, 2), KIND_M2: (6.0, 4)}


def _zeros_array(z) -> np.ndarray:
    from .polynomials import ZeroVector

    return z.zeros if isinstance(z, ZeroVector) else as_complex_vector(z, "zeros")


@dataclass(frozen=True)
class WTable:
    """Jacobian of the zeros-to-coefficients map: entries[j-1, m-1] holds
    d c_j / d z_m, which equals (-1)^j [delta_{j,1} + sigma_excluding(m, j, z)].
    Row j = 1 is identically -1."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)


@dataclass(frozen=True)
class DiophantineMatrix:
    """A built matrix, its provenance, and the separation metrics that govern
    how trustworthy a failed spectrum check would be."""

    kind: str
    n: int
    entries: np.ndarray
    source_perm: Optional[PermutationId]
    zero_separation: float
    coeff_separation: float

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def conditioning_warning(self) -> bool:
        return min(self.zero_separation, self.coeff_separation) < CONDITIONING_FLOOR


@dataclass(frozen=True)
class SpectrumReport:
    """Outcome of comparing a matrix spectrum with its expected integers."""

    kind: str
    eigenvalues: np.ndarray
    expected: tuple
    max_deviation: float
    passed: bool
    perm: Optional[PermutationId]

    def __post_init__(self):
        arr = np.asarray(self.eigenvalues, dtype=complex).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "eigenvalues", arr)
        object.__setattr__(self, "expected", tuple(int(e) for e in self.expected))


def w_table(z) -> WTable:
    """Coefficient-perturbation table for the ordered zeros z."""
    zz = _zeros_array(z)
    n = zz.size
    signs = (-1.0) ** np.arange(1, n + 1)
    table = np.empty((n, n), dtype=complex)
    for m in range(1, n + 1):
        table[:, m - 1] = signs * reduced_esp_table(zz, m)
    return WTable(table)


def _build(z, c, kind: str, source_perm: Optional[PermutationId]) -> DiophantineMatrix:
    factor, power = _profiles[kind]
    zz = _zeros_array(z)
    cc = as_complex_vector(c, "coefficients")
    n = zz.size
    if cc.size != n:
        raise SingularConfiguration(
            f"zeros ({n}) and coefficients ({cc.size}) must have equal length")
    if n < 2:
        raise SingularConfiguration("need at least two zeros")

    zdiff = zz[:, None] - zz[None, :]
    cdiff = cc[:, None] - cc[None, :]
    off = ~np.eye(n, dtype=bool)
    if np.any(zdiff[off] == 0.0):
        raise SingularConfiguration("coincident zeros")
    if np.any(cdiff[off] == 0.0):
        raise SingularConfiguration("coincident coefficients")
    zero_sep = pairwise_separation(zz)
    coeff_sep = pairwise_separation(cc)

    w = w_table(zz).entries

    np.fill_diagonal(cdiff, 1.0)
    inv_pow = 1.0 / cdiff ** power
    np.fill_diagonal(inv_pow, 0.0)
    # sum_{s != j} (w[j] - w[s]) / (c_j - c_s)^P, vectorised over m.
    coupled = w + factor * (w * inv_pow.sum(axis=1)[:, None] - inv_pow @ w)

    np.fill_diagonal(zdiff, 1.0)
    prefactor = -1.0 / np.prod(zdiff, axis=1)

    # Horner accumulation over j (descending powers of z_n) limits cancellation.
    acc = np.zeros((n, n), dtype=complex)
    for j in range(n):
        acc = acc * zz[:, None] + coupled[j][None, :]

    return DiophantineMatrix(kind, n, prefactor[:, None] * acc,
                             source_perm, zero_sep, coeff_sep)


def build_m1(z, c, source_perm: Optional[PermutationId] = None) -> DiophantineMatrix:
    """Matrix with spectrum 1..N: inverse-square coefficient coupling."""
    return _build(z, c, KIND_M1, source_perm)


def build_m2(z, c, source_perm: Optional[PermutationId] = None) -> DiophantineMatrix:
    """Matrix with spectrum 1, 4, ..., N^2: inverse-fourth-power coupling,
    weighted by 6."""
    return _build(z, c, KIND_M2, source_perm)


def expected_spectrum(kind: str, n: int) -> np.ndarray:
    m = np.arange(1, n + 1)
    return m if kind == KIND_M1 else m ** 2


def expected_trace(kind: str, n: int) -> float:
    return float(expected_spectrum(kind, n).sum())


def expected_determinant(kind: str, n: int) -> float:
    return float(expected_spectrum(kind, n).prod())


def spectrum_check(matrix: DiophantineMatrix, tol: float = 1e-6,
                   eig_tol: float = 1e-13) -> SpectrumReport:
    """Compare the matrix spectrum against its expected integer list.

    Eigenvalues are sorted by real part and compared positionally; any
    imaginary parts feed straight into the deviation, so a complex eigenvalue
    cannot sneak past the check.  NonConvergence from the eigensolver
    propagates to the caller.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    result = eig.eigenvalues(matrix.entries, tol=eig_tol)
    lam = result.eigenvalues[np.argsort(result.eigenvalues.real, kind="stable")]
    expected = expected_spectrum(matrix.kind, matrix.n)
    deviation = float(np.max(np.abs(lam - expected)))
    return SpectrumReport(matrix.kind, lam, tuple(expected), deviation,
                          deviation <= tol, matrix.source_perm)


def permutation_similarity_check(z, c, kind: str, swap: tuple) -> float:
    """Max elementwise |build(P z) - P build(z) P^T| for the transposition P
    swapping zero positions swap = (a, b), 1-based.

    Relabelling two zeros must permute the matrix rows and columns and nothing
    else; the returned deviation is floating-point noise when that holds.
    """
    a, b = swap
    zz = _zeros_array(z)
    n = zz.size
    if not (1 <= a < b <= n):
        raise ValueError(f"swap positions must satisfy 1 <= a < b <= {n}, got {swap}")
    builder = build_m1 if kind == KIND_M1 else build_m2

    base = builder(zz, c).entries
    swapped_zeros = zz.copy()
    swapped_zeros[[a - 1, b - 1]] = swapped_zeros[[b - 1, a - 1]]
    rebuilt = builder(swapped_zeros, c).entries

    conjugated = np.array(base)
    conjugated[[a - 1, b - 1], :] = conjugated[[b - 1, a - 1], :]
    conjugated[:, [a - 1, b - 1]] = conjugated[:, [b - 1, a - 1]]
    return float(np.max(np.abs(rebuilt - conjugated)))
