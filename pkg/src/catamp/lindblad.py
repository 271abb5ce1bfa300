"""Time-dependent Lindblad master-equation integration.

The generator is

    d rho/dt = -i [H(t), rho] + kappa D[a] + gamma_minus D[sm]
               + (gamma_phi / 2) D[sz],

with D[b] rho = b rho b^dag - (1/2){b^dag b, rho}.  A pure-state
Schroedinger fast path handles the decoherence-free case on vectors
instead of matrices.

Hamiltonian functions are callables ``h(t) -> ndarray`` returning the dense
(rotating-frame) Hamiltonian at time t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .hilbert import (DensityOp, DimensionError, FockKet, annihilation_op,
                      identity_op, number_op, parity_op, sigma_minus, sigma_z,
                      tensor_product)
from .jc_model import DeviceParams

TRACE_DRIFT_TOL = 1e-6
HERMITICITY_TOL = 1e-8
POSITIVITY_TOL = 1e-7
PURE_NORM_TOL = 1e-8


class StiffnessError(RuntimeError):
    """Adaptive step size collapsed below the solver's minimum."""


class IntegrationDivergedError(RuntimeError):
    """A state invariant was breached beyond tolerance during integration."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration method and tolerances.

    ``adaptive_rk45`` is the default embedded 4/5 pair; ``adaptive_dop853``
    is a higher-order option that takes much larger steps on the fast
    rotating-frame phases; ``fixed_rk4`` is retained for convergence tests.
    """

    method: str = "adaptive_rk45"
    dt: float | None = None            # fixed_rk4 step, us
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    sample_stride: int = 1             # keep every k-th requested sample
    n_samples: int = 101               # requested sample count over the span
    # Optional callable(fraction_complete: float); called at >= 5% increments
    # of the integration span.  Excluded from equality/repr.
    progress: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.method not in ("fixed_rk4", "adaptive_rk45", "adaptive_dop853"):
            raise ValueError(f"unknown integrator method {self.method!r}")
        if self.method == "fixed_rk4":
            if self.dt is None or self.dt <= 0:
                raise ValueError("fixed_rk4 requires a positive dt")
        else:
            if self.rel_tol <= 0 or self.abs_tol <= 0:
                raise ValueError("adaptive tolerances must be positive")
        if self.sample_stride < 1 or self.n_samples < 2:
            raise ValueError("sample_stride must be >= 1 and n_samples >= 2")


@dataclass(frozen=True)
class Trajectory:
    """Sampled integration run: times, state snapshots, named observables."""

    times: np.ndarray
    states: tuple
    observables: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def final_state(self):
        return self.states[-1]


def _collapse_ops(params: DeviceParams, dim: int):
    """(rate, operator) pairs for the generator at the given dimension.

    Joint qubit (x) cavity systems get all three channels; a bare cavity
    (dim == cavity_dim) gets photon loss only.
    """
    nc = params.cavity_dim
    ops = []
    if dim == 2 * nc:
        ident_c = identity_op(nc)
        a = tensor_product(identity_op(2), annihilation_op(nc)).matrix
        sm = tensor_product(sigma_minus(), ident_c).matrix
        sz = tensor_product(sigma_z(), ident_c).matrix
        ops = [(params.kappa, a), (params.gamma_minus, sm),
               (params.gamma_phi / 2.0, sz)]
    elif dim == nc:
        ops = [(params.kappa, annihilation_op(nc).matrix)]
    else:
        raise DimensionError(
            f"state dim {dim} matches neither cavity ({nc}) nor joint ({2 * nc})")
    return [(g, op) for g, op in ops if g > 0]


def lindblad_rhs(rho: np.ndarray, t: float, hamiltonian_fn,
                 params: DeviceParams) -> np.ndarray:
    """Right-hand side of the master equation at time t."""
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(hamiltonian_fn(t), dtype=complex)
    if h.shape != rho.shape:
        raise DimensionError(
            f"Hamiltonian shape {h.shape} != state shape {rho.shape}")
    out = -1j * (h @ rho - rho @ h)
    for g, b in _collapse_ops(params, rho.shape[0]):
        bdb = b.conj().T @ b
        out += g * (b @ rho @ b.conj().T - 0.5 * (bdb @ rho + rho @ bdb))
    return out


def _make_rho_rhs(hamiltonian_fn, params: DeviceParams, dim: int):
    """Flattened-RHS closure with collapse operators hoisted out of the loop."""
    cops = [(g, b, b.conj().T, b.conj().T @ b)
            for g, b in _collapse_ops(params, dim)]

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        h = hamiltonian_fn(t)
        out = (-1j) * (h @ rho - rho @ h)
        for g, b, bd, bdb in cops:
            out += g * (b @ rho @ bd) - (0.5 * g) * (bdb @ rho + rho @ bdb)
        return out.ravel()

    return rhs


def _rk4_fixed(rhs, y0: np.ndarray, t_eval: np.ndarray, dt: float) -> list:
    """Classical RK4 with a fixed step, sampling by interpolation-free landing.

    Steps are chosen to land exactly on every requested sample time.
    """
    ys = [y0.copy()]
    y = y0.copy()
    for t0, t1 in zip(t_eval[:-1], t_eval[1:]):
        span = t1 - t0
        n = max(1, int(np.ceil(span / dt - 1e-12)))
        h = span / n
        t = t0
        for _ in range(n):
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        ys.append(y.copy())
    return ys


def _with_progress(rhs, t0: float, t1: float, report):
    """Wrap an RHS so `report(fraction)` fires at 5% span increments."""
    span = t1 - t0
    last = [-1.0]

    def wrapped(t, y):
        frac = min(max((t - t0) / span, 0.0), 1.0)
        if frac >= last[0] + 0.05 or (frac >= 1.0 and last[0] < 1.0):
            last[0] = frac
            report(frac)
        return rhs(t, y)

    return wrapped


def _integrate(rhs, y0: np.ndarray, t_span, config: IntegratorConfig):
    t0, t1 = float(t_span[0]), float(t_span[1])
    if config.progress is not None and t1 != t0:
        rhs = _with_progress(rhs, t0, t1, config.progress)
    t_eval = np.linspace(t0, t1, config.n_samples)
    if config.sample_stride > 1:
        keep = np.arange(0, config.n_samples, config.sample_stride)
        if keep[-1] != config.n_samples - 1:
            keep = np.append(keep, config.n_samples - 1)
        t_eval = t_eval[keep]
    if t1 == t0:
        return np.array([t0]), [y0.copy()]
    if config.method == "fixed_rk4":
        ys = _rk4_fixed(rhs, y0.astype(complex), t_eval, config.dt)
        return t_eval, ys
    method = "RK45" if config.method == "adaptive_rk45" else "DOP853"
    sol = solve_ivp(rhs, (t0, t1), y0.astype(complex), method=method,
                    t_eval=t_eval, rtol=config.rel_tol, atol=config.abs_tol)
    if not sol.success:
        raise StiffnessError(f"adaptive integration failed: {sol.message}")
    return sol.t, [sol.y[:, i].copy() for i in range(sol.y.shape[1])]


def _check_rho(rho: np.ndarray, t: float) -> None:
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_DRIFT_TOL:
        raise IntegrationDivergedError(
            f"trace drifted to {tr:.8f} at t={t:.4f}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise IntegrationDivergedError(
            f"Hermiticity breach at t={t:.4f}")
    w_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if w_min < -POSITIVITY_TOL:
        raise IntegrationDivergedError(
            f"negative eigenvalue {w_min:.3e} at t={t:.4f}")


def _standard_observables(params: DeviceParams, dim: int):
    nc = params.cavity_dim
    if dim == 2 * nc:
        nop = tensor_product(identity_op(2), number_op(nc)).matrix
        pop = tensor_product(identity_op(2), parity_op(nc)).matrix
    else:
        nop = number_op(nc).matrix
        pop = parity_op(nc).matrix
    return nop, pop


def evolve(rho0: DensityOp, hamiltonian_fn, params: DeviceParams, t_span,
           config: IntegratorConfig | None = None,
           check_invariants: bool = True) -> Trajectory:
    """Integrate the master equation, sampling states and observables.

    Trace, Hermiticity and positivity are enforced at every sampled instant;
    a breach beyond tolerance raises IntegrationDivergedError.
    """
    config = config or IntegratorConfig()
    dim = rho0.dim
    rhs = _make_rho_rhs(hamiltonian_fn, params, dim)
    times, ys = _integrate(rhs, rho0.matrix.ravel().copy(), t_span, config)
    nop, pop = _standard_observables(params, dim)
    states, trace, nbar, par = [], [], [], []
    for t, y in zip(times, ys):
        rho = y.reshape(dim, dim)
        if check_invariants:
            _check_rho(rho, t)
        states.append(DensityOp(rho, rho0.basis_dims))
        trace.append(np.trace(rho).real)
        nbar.append(np.trace(nop @ rho).real)
        par.append(np.trace(pop @ rho).real)
    obs = {"trace": np.array(trace), "nbar": np.array(nbar),
           "parity": np.array(par)}
    return Trajectory(times, states, obs)


def evolve_pure(ket0: FockKet, hamiltonian_fn, params: DeviceParams, t_span,
                config: IntegratorConfig | None = None) -> Trajectory:
    """Schroedinger evolution fast path; all decoherence rates must be zero."""
    if params.kappa > 0 or params.gamma_minus > 0 or params.gamma_phi > 0:
        raise ValueError(
            "evolve_pure requires all decoherence rates to be zero")
    config = config or IntegratorConfig()
    dim = ket0.dim

    def rhs(t, y):
        return -1j * (hamiltonian_fn(t) @ y)

    times, ys = _integrate(rhs, ket0.amplitudes.copy(), t_span, config)
    nop, pop = _standard_observables(params, dim)
    # Norm drift grows with integration length on fast-rotating problems;
    # allow the solver's own error scale on long spans.
    span = abs(float(t_span[1]) - float(t_span[0]))
    norm_tol = max(PURE_NORM_TOL, 1e3 * config.rel_tol * max(1.0, span))
    states, norms, nbar, par = [], [], [], []
    for t, y in zip(times, ys):
        n = np.linalg.norm(y)
        if abs(n - 1.0) > norm_tol:
            raise IntegrationDivergedError(
                f"norm drifted to {n:.10f} at t={t:.4f}")
        states.append(FockKet(y, ket0.basis_dims))
        norms.append(n * n)
        nbar.append(np.vdot(y, nop @ y).real)
        par.append(np.vdot(y, pop @ y).real)
    obs = {"trace": np.array(norms), "nbar": np.array(nbar),
           "parity": np.array(par)}
    return Trajectory(times, states, obs)
