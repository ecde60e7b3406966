"""The four isochronous flows, adaptive integration, finite-difference
Jacobians, and modal (linearised) evolution.

Two companion pictures of the same dynamics are integrated here.  In the
coefficient picture ("gamma" systems) the state is the coefficient vector of
a monic polynomial; in the zero picture ("zeta" systems) it is the ordered
zero vector of that polynomial, with the coefficients recovered through the
Vieta map whenever the flow needs them.  Every solution of all four flows is
periodic with period 2*pi, which is what the integration tests certify; the
zero vector of a stationary coefficient configuration is an equilibrium of
the corresponding zeta flow.

First-order pair:

    d gamma_m / dt = i [gamma_m - sum_{l != m} 1/(gamma_m - gamma_l)]
    d zeta_n / dt  = -(sum_m d gamma_m/dt * zeta_n^(N-m))
                     / prod_{l != n} (zeta_n - zeta_l)

Second-order pair (goldfish velocity coupling in the zero picture):

    d2 gamma_m / dt2 = -gamma_m + 2 sum_{l != m} 1/(gamma_m - gamma_l)^3
    d2 zeta_n / dt2  = sum_{l != n} 2 zdot_n zdot_l / (zeta_n - zeta_l)
                       - (sum_m d2 gamma_m/dt2 * zeta_n^(N-m))
                       / prod_{l != n} (zeta_n - zeta_l)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import eig
from .errors import (
    CollisionAbort,
    DegenerateSpectrum,
    DimensionMismatch,
    NearCollision,
    StepFloorReached,
)
from .matrices import KIND_M1, KIND_M2, DiophantineMatrix
from .polynomials import as_complex_vector, pairwise_separation, poly_from_zeros

__all__ = [
    "SYSTEMS",
    "COLLISION_FLOOR",
    "STEP_FLOOR",
    "FirstOrderState",
    "SecondOrderState",
    "TrajectoryRecord",
    "rhs_gamma_first",
    "rhs_zeta_first",
    "rhs_gamma_second",
    "rhs_zeta_second",
    "zeta_force",
    "integrate",
    "central_difference_jacobian",
    "fd_jacobian",
    "linear_evolution_first",
    "linear_evolution_second",
]

SYSTEMS = ("gamma1", "zeta1", "gamma2", "zeta2")

COLLISION_FLOOR = 1e-10
STEP_FLOOR = 1e-12

_FD_STEP_RANGE = (1e-8, 1e-4)


@dataclass(frozen=True)
class FirstOrderState:
    """Zero-picture state of the first-order flow; coefficients are derived,
    never stored."""

    t: float
    zeta: np.ndarray

    def __post_init__(self):
        arr = as_complex_vector(self.zeta, "zeta").copy()
        arr.flags.writeable = False
        object.__setattr__(self, "zeta", arr)

    @property
    def gamma(self) -> np.ndarray:
        return poly_from_zeros(self.zeta).coefficients


@dataclass(frozen=True)
class SecondOrderState:
    """Zero-picture state of the second-order flow: positions and velocities."""

    t: float
    zeta: np.ndarray
    zeta_dot: np.ndarray

    def __post_init__(self):
        pos = as_complex_vector(self.zeta, "zeta").copy()
        vel = as_complex_vector(self.zeta_dot, "zeta_dot").copy()
        if vel.size != pos.size:
            raise DimensionMismatch(
                f"zeta has length {pos.size} but zeta_dot has {vel.size}")
        pos.flags.writeable = False
        vel.flags.writeable = False
        object.__setattr__(self, "zeta", pos)
        object.__setattr__(self, "zeta_dot", vel)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One integrated trajectory: samples at the accepted steps (final time
    hit exactly), step acceptance statistics, and the smallest pairwise
    separation seen among the position components."""

    system: str
    samples: list
    step_stats: tuple
    min_separation_seen: float

    @property
    def final_state(self) -> np.ndarray:
        return self.samples[-1][1]

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])


def _checked_vector(values, what: str) -> np.ndarray:
    arr = as_complex_vector(values, what)
    if arr.size < 2:
        raise ValueError(f"{what} needs at least two components")
    gap = pairwise_separation(arr)
    if gap < COLLISION_FLOOR:
        raise NearCollision(f"{what} separation {gap:.3e} below {COLLISION_FLOOR}")
    return arr


def _inverse_power_sums(values: np.ndarray, power: int) -> np.ndarray:
    """Component m gets sum_{l != m} 1/(v_m - v_l)^power."""
    diff = values[:, None] - values[None, :]
    np.fill_diagonal(diff, 1.0)
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    return (inv ** power).sum(axis=1)


def rhs_gamma_first(gamma) -> np.ndarray:
    """Velocity of the first-order coefficient flow.

    Stationary exactly at configurations with zero first-order equilibrium
    residual, Hermite zeros among them.
    """
    g = _checked_vector(gamma, "gamma")
    return 1j * (g - _inverse_power_sums(g, 1))


def rhs_gamma_second(gamma) -> np.ndarray:
    """Acceleration of the second-order coefficient flow."""
    g = _checked_vector(gamma, "gamma")
    return -g + 2.0 * _inverse_power_sums(g, 3)


def _coefficient_rate_to_zero_rate(zeta: np.ndarray, rate: np.ndarray) -> np.ndarray:
    """Transport a coefficient-space rate through the inverse Vieta Jacobian:
    component n is -(sum_m rate_m zeta_n^(N-m)) / prod_{l != n}(zeta_n - zeta_l)."""
    numer = np.zeros_like(zeta)
    for r in rate:
        numer = numer * zeta + r
    diff = zeta[:, None] - zeta[None, :]
    np.fill_diagonal(diff, 1.0)
    return -numer / np.prod(diff, axis=1)


def rhs_zeta_first(zeta) -> np.ndarray:
    """Velocity of the first-order zero flow.

    The coefficient vector is recovered from the zeros via the Vieta map, its
    flow velocity is evaluated, and the result is transported back to zero
    space.  Raises NearCollision when either the zeros or the derived
    coefficients nearly coincide.
    """
    z = _checked_vector(zeta, "zeta")
    gamma = poly_from_zeros(z).coefficients
    rate = rhs_gamma_first(gamma)
    return _coefficient_rate_to_zero_rate(z, rate)


def zeta_force(zeta) -> np.ndarray:
    """Acceleration of the second-order zero flow at zero velocity."""
    z = _checked_vector(zeta, "zeta")
    gamma = poly_from_zeros(z).coefficients
    accel = rhs_gamma_second(gamma)
    return _coefficient_rate_to_zero_rate(z, accel)


def rhs_zeta_second(state: SecondOrderState) -> np.ndarray:
    """Acceleration of the second-order zero flow: goldfish velocity coupling
    2 zdot_n zdot_l / (zeta_n - zeta_l) plus the transported coefficient
    acceleration."""
    z = _checked_vector(state.zeta, "zeta")
    v = as_complex_vector(state.zeta_dot, "zeta_dot")
    if v.size != z.size:
        raise DimensionMismatch("zeta and zeta_dot lengths differ")
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, np.inf)
    coupling = 2.0 * v * (v[None, :] / diff).sum(axis=1)
    return coupling + zeta_force(z)


# Dormand-Prince 5(4) tableau.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                   187 / 2100, 1 / 40])


def _packed_system(system: str, initial):
    """Normalise the initial condition and return (y0, rhs, n_positions)."""
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; expected one of {SYSTEMS}")

    if system in ("gamma1", "zeta1"):
        if isinstance(initial, FirstOrderState):
            y0 = initial.zeta.copy()
        else:
            y0 = as_complex_vector(initial, "initial").copy()
        rhs = rhs_gamma_first if system == "gamma1" else rhs_zeta_first
        return y0, rhs, y0.size

    if isinstance(initial, SecondOrderState):
        pos, vel = initial.zeta, initial.zeta_dot
    else:
        pos, vel = initial
        pos = as_complex_vector(pos, "initial position")
        vel = as_complex_vector(vel, "initial velocity")
    if pos.size != vel.size:
        raise DimensionMismatch("position and velocity lengths differ")
    n = pos.size
    accel = rhs_gamma_second if system == "gamma2" else None

    def rhs(y):
        if accel is not None:
            a = accel(y[:n])
        else:
            a = rhs_zeta_second(SecondOrderState(0.0, y[:n], y[n:]))
        return np.concatenate([y[n:], a])

    return np.concatenate([pos, vel]).astype(complex), rhs, n


def integrate(system: str, initial, t_end: float, rel_tol: float = 1e-10,
              abs_tol: float = 1e-12, max_steps: int = 2_000_000) -> TrajectoryRecord:
    """Adaptive Dormand-Prince 5(4) integration of one of the four flows.

    Second-order systems integrate as doubled first-order systems (positions
    then velocities).  The final accepted step lands on ``t_end`` exactly.
    Steps whose stage evaluations raise NearCollision are rejected and the
    step is halved; halving below 1e-12 raises CollisionAbort, while ordinary
    error control shrinking the step below the same floor raises
    StepFloorReached.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")

    y, rhs, n_pos = _packed_system(system, initial)
    t = 0.0
    samples = [(0.0, y.copy())]
    min_sep = pairwise_separation(y[:n_pos])
    accepted = rejected = 0

    try:
        k1 = rhs(y)
    except NearCollision as exc:  # a collision at the start is not recoverable
        raise CollisionAbort(str(exc)) from exc
    h = min(t_end, 1e-2)
    stages = [None] * 7

    for _ in range(max_steps):
        if t >= t_end:
            break
        final_step = h >= t_end - t
        if final_step:
            h = t_end - t

        stages[0] = k1
        try:
            for i in range(1, 7):
                yi = y + h * sum(a * stages[j] for j, a in enumerate(_DP_A[i]))
                stages[i] = rhs(yi)
        except NearCollision:
            rejected += 1
            h *= 0.5
            if h < STEP_FLOOR:
                raise CollisionAbort(
                    f"collision pressure drove the step below {STEP_FLOOR} at t={t:.6f}")
            continue

        y5 = y + h * sum(b * k for b, k in zip(_DP_B5, stages) if b != 0.0)
        err_vec = h * sum((b5 - b4) * k for b5, b4, k in zip(_DP_B5, _DP_B4, stages)
                          if b5 != b4)
        weight = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.sqrt(np.mean((np.abs(err_vec) / weight) ** 2)))

        if err <= 1.0:
            t = t_end if final_step else t + h
            y = y5
            k1 = stages[6]  # first-same-as-last
            samples.append((t, y.copy()))
            accepted += 1
            min_sep = min(min_sep, pairwise_separation(y[:n_pos]))
            grow = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h *= grow
        else:
            rejected += 1
            h *= max(0.1, 0.9 * err ** -0.2)
            if h < STEP_FLOOR:
                raise StepFloorReached(
                    f"error control drove the step below {STEP_FLOOR} at t={t:.6f}")
    else:
        raise StepFloorReached(f"step budget {max_steps} exhausted at t={t:.6f}")

    return TrajectoryRecord(system, samples, (accepted, rejected), min_sep)


def central_difference_jacobian(field: Callable[[np.ndarray], np.ndarray],
                                z, h: float) -> np.ndarray:
    """Column m is (field(z + h e_m) - field(z - h e_m)) / (2h)."""
    zz = as_complex_vector(z, "z")
    n = zz.size
    jac = np.empty((n, n), dtype=complex)
    for m in range(n):
        bump = np.zeros(n, dtype=complex)
        bump[m] = h
        jac[:, m] = (field(zz + bump) - field(zz - bump)) / (2.0 * h)
    return jac


def fd_jacobian(system: str, z, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a zero-picture vector field at z.

    ``system`` selects the field: "zeta1" differentiates the first-order flow
    velocity (so J/i, equivalently -i J, reproduces the M1 matrix at an
    equilibrium), "zeta2_force" differentiates the zero-velocity acceleration
    (so -J reproduces M2).
    """
    lo, hi = _FD_STEP_RANGE
    if not lo <= h <= hi:
        raise ValueError(f"step h={h} outside [{lo}, {hi}]")
    fields = {"zeta1": rhs_zeta_first, "zeta2_force": zeta_force}
    if system not in fields:
        raise ValueError(f"unknown field {system!r}; expected one of {tuple(fields)}")
    return central_difference_jacobian(fields[system], z, h)


def _modal_basis(entries: np.ndarray):
    values = eig.eigenvalues(entries).eigenvalues
    basis = eig.eigenvectors(entries, values).eigenvectors
    return values, basis


def linear_evolution_first(matrix: DiophantineMatrix, v0, t: float) -> np.ndarray:
    """Evolve v under dv/dt = i M v by eigen-reconstruction:
    v(t) = sum_m a_m exp(i lambda_m t) u_m with U a = v(0).

    Integer eigenvalues make every mode 2*pi-periodic, so v(2*pi) = v(0).
    """
    if matrix.kind != KIND_M1:
        raise ValueError(f"first-order evolution needs kind {KIND_M1}, got {matrix.kind}")
    v = as_complex_vector(v0, "v0")
    if v.size != matrix.n:
        raise DimensionMismatch("v0 length does not match the matrix")
    values, basis = _modal_basis(matrix.entries)
    amplitudes = np.linalg.solve(basis, v)
    return basis @ (amplitudes * np.exp(1j * values * t))


def linear_evolution_second(matrix: DiophantineMatrix, v0, vdot0, t: float) -> np.ndarray:
    """Evolve v under d2v/dt2 = -M v by eigen-reconstruction:
    v(t) = sum_m [a_m cos(w_m t) + b_m sin(w_m t)/w_m] u_m.

    The modal frequency is taken as w_m = sqrt(eigenvalue); with the
    squared-integer eigenvalues of an M2 matrix this gives integer
    frequencies, hence 2*pi-periodic modes.  Eigenvalues must have positive
    real part for the square root to define a frequency.
    """
    if matrix.kind != KIND_M2:
        raise ValueError(f"second-order evolution needs kind {KIND_M2}, got {matrix.kind}")
    v = as_complex_vector(v0, "v0")
    vd = as_complex_vector(vdot0, "vdot0")
    if v.size != matrix.n or vd.size != matrix.n:
        raise DimensionMismatch("initial vectors do not match the matrix")
    values, basis = _modal_basis(matrix.entries)
    if np.any(values.real <= 0):
        raise DegenerateSpectrum("eigenvalues with non-positive real part have no frequency")
    omega = np.sqrt(values)
    a = np.linalg.solve(basis, v)
    b = np.linalg.solve(basis, vd)
    return basis @ (a * np.cos(omega * t) + b * np.sin(omega * t) / omega)
