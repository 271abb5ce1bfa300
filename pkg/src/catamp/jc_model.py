"""Two-level Jaynes-Cummings model in the frame rotating at the cavity
frequency: Hamiltonian, dressed states, mixing angles and detuning sweeps.

All dynamics in this package are integrated in the frame rotating at
``omega_r`` for both qubit and cavity.  In that frame the static Hamiltonian
is (delta/2) sz + lambda (a^dag sm + a sp) with delta = omega_q - omega_r;
lab-frame transition frequencies are recovered by adding omega_r to
rotating-frame energy differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import GHZ
from .hilbert import (DimensionError, FockKet, OpMatrix, annihilation_op,
                      basis_ket, identity_op, sigma_minus, sigma_plus,
                      sigma_z, tensor_product)

DEFAULT_CAVITY_DIM = 25
FAST_CAVITY_DIM = 12


@dataclass(frozen=True)
class DeviceParams:
    """Device constants: coupling, frequencies, decay rates, truncation.

    All rates and frequencies are angular (rad/us).
    """

    lam: float = 0.1 * GHZ
    omega_r: float = 6.0 * GHZ
    kappa: float = 0.0
    gamma_minus: float = 0.0
    gamma_phi: float = 0.0
    cavity_dim: int = DEFAULT_CAVITY_DIM

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("coupling lam must be positive")
        for name in ("kappa", "gamma_minus", "gamma_phi"):
            if getattr(self, name) < 0:
                raise ValueError(f"decay rate {name} must be >= 0")
        if self.cavity_dim < 2:
            raise DimensionError("cavity_dim must be >= 2")

    @property
    def dims(self) -> tuple[int, int]:
        return (2, self.cavity_dim)

    def with_rates(self, kappa: float, gamma_minus: float,
                   gamma_phi: float) -> "DeviceParams":
        return DeviceParams(self.lam, self.omega_r, kappa, gamma_minus,
                            gamma_phi, self.cavity_dim)

    def with_cavity_dim(self, cavity_dim: int) -> "DeviceParams":
        return DeviceParams(self.lam, self.omega_r, self.kappa,
                            self.gamma_minus, self.gamma_phi, cavity_dim)


@dataclass(frozen=True)
class SweepSchedule:
    """Qubit detuning ramp delta(t) over [0, duration]."""

    delta_start: float = 1.0 * GHZ
    delta_end: float = 0.0
    duration: float = 6.2  # us
    profile: str = "linear"

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("sweep duration must be positive")
        if self.profile not in ("linear", "smoothstep"):
            raise ValueError(f"unknown sweep profile {self.profile!r}")

    def reversed(self) -> "SweepSchedule":
        return SweepSchedule(self.delta_end, self.delta_start, self.duration,
                             self.profile)


def static_hamiltonian(params: DeviceParams, delta: float) -> OpMatrix:
    """(delta/2) sz + lam (a^dag sm + a sp) on the qubit (x) cavity basis."""
    nc = params.cavity_dim
    a = annihilation_op(nc)
    ident_c = identity_op(nc)
    h = 0.5 * delta * tensor_product(sigma_z(), ident_c).matrix
    h = h + params.lam * (tensor_product(sigma_minus(), a.dag()).matrix
                          + tensor_product(sigma_plus(), a).matrix)
    return OpMatrix(h, hermitian_flag=True)


def mixing_angle(n: int, delta: float, lam: float) -> float:
    """Dressed-state mixing angle theta_n = atan2(2 lam sqrt(n+1), delta)/2.

    The atan2 branch keeps theta_n in (0, pi/2) and the dressed labels
    continuous through resonance: theta -> 0 as delta -> +inf and
    theta -> pi/2 as delta -> -inf.
    """
    if lam <= 0:
        raise ValueError("coupling lam must be positive")
    return 0.5 * np.arctan2(2.0 * lam * np.sqrt(n + 1.0), delta)


def dressed_energies(n: int, delta: float, lam: float) -> tuple[float, float]:
    """Rotating-frame energies (E_plus, E_minus) of the n-excitation pair."""
    half = np.sqrt(0.25 * delta ** 2 + lam ** 2 * (n + 1.0))
    return float(half), float(-half)


def dressed_pair(n: int, delta: float, lam: float, cavity_dim: int
                 ) -> tuple[FockKet, FockKet, float, float]:
    """Dressed kets |+,n>, |-,n> and their rotating-frame energies.

    |+,n> = cos(theta) |e,n> + sin(theta) |g,n+1> so that |+,n> -> |e,n>
    for large positive detuning.
    """
    if n < 0 or n + 1 >= cavity_dim:
        raise DimensionError(
            f"manifold n={n} does not fit cavity_dim={cavity_dim}")
    theta = mixing_angle(n, delta, lam)
    dims = (2, cavity_dim)
    e_n = basis_ket(dims, 1, n).amplitudes
    g_n1 = basis_ket(dims, 0, n + 1).amplitudes
    plus = FockKet(np.cos(theta) * e_n + np.sin(theta) * g_n1, dims)
    minus = FockKet(-np.sin(theta) * e_n + np.cos(theta) * g_n1, dims)
    ep, em = dressed_energies(n, delta, lam)
    return plus, minus, ep, em


def transition_frequency(kind: str, n: int, params: DeviceParams,
                         delta: float = 0.0) -> float:
    """Lab-frame dressed transition frequency.

    ``minus_minus``: |-,n> <-> |-,n+1>;  ``plus_minus``: |+,n> <-> |-,n+1>.
    Both are rotating-frame dressed-energy differences plus omega_r.
    """
    if n < 0 or n + 2 >= params.cavity_dim:
        raise DimensionError(
            f"manifolds n={n}, n+1 do not fit cavity_dim={params.cavity_dim}")
    _, em_upper = dressed_energies(n + 1, delta, params.lam)
    ep, em = dressed_energies(n, delta, params.lam)
    if kind == "minus_minus":
        return params.omega_r + (em_upper - em)
    if kind == "plus_minus":
        return params.omega_r + (em_upper - ep)
    raise ValueError(f"unknown transition kind {kind!r}")


def sweep_delta(schedule: SweepSchedule, t: float) -> float:
    """Interpolated detuning delta(t); endpoints exact."""
    if t < -1e-12 or t > schedule.duration + 1e-12:
        raise ValueError(
            f"t={t} outside sweep window [0, {schedule.duration}]")
    s = min(max(t / schedule.duration, 0.0), 1.0)
    if schedule.profile == "smoothstep":
        s = s * s * (3.0 - 2.0 * s)
    return schedule.delta_start + (schedule.delta_end - schedule.delta_start) * s
