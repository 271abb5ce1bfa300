"""Master-equation integrator: closed-form decay oracles and invariants."""

import numpy as np
import pytest

from catamp.hilbert import basis_ket, tensor_product
from catamp.jc_model import DeviceParams, static_hamiltonian
from catamp.lindblad import (IntegratorConfig, StiffnessError, Trajectory,
                             evolve, evolve_pure, lindblad_rhs)
from catamp.states import coherent_ket, fidelity

GHZ_FREE = DeviceParams(cavity_dim=8)


def cavity_params(nc, kappa=0.0, gamma_minus=0.0, gamma_phi=0.0):
    return DeviceParams(cavity_dim=nc, kappa=kappa, gamma_minus=gamma_minus,
                        gamma_phi=gamma_phi)


def zero_hamiltonian(dim):
    h = np.zeros((dim, dim), dtype=complex)
    return lambda t: h


class TestIntegratorConfig:
    def test_unknown_method(self):
        with pytest.raises(ValueError):
            IntegratorConfig(method="leapfrog")

    def test_fixed_rk4_needs_dt(self):
        with pytest.raises(ValueError):
            IntegratorConfig(method="fixed_rk4")

    def test_bad_tolerances(self):
        with pytest.raises(ValueError):
            IntegratorConfig(rel_tol=0.0)

    def test_bad_sampling(self):
        with pytest.raises(ValueError):
            IntegratorConfig(n_samples=1)


class TestTrajectory:
    def test_monotonic_times_enforced(self):
        with pytest.raises(ValueError):
            Trajectory(np.array([0.0, 1.0, 0.5]), (None, None, None))

    def test_final_state(self):
        tr = Trajectory(np.array([0.0, 1.0]), ("a", "b"))
        assert tr.final_state == "b"


class TestClosedFormDecay:
    def test_coherent_state_photon_loss(self):
        # Pure cavity loss keeps a coherent state coherent:
        # alpha(t) = alpha e^{-kappa t / 2}.
        nc, alpha, kappa, t1 = 15, 1.2, 0.4, 2.0
        params = cavity_params(nc, kappa=kappa)
        rho0 = coherent_ket(alpha, nc).projector()
        traj = evolve(rho0, zero_hamiltonian(nc), params, (0.0, t1),
                      IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12))
        target = coherent_ket(alpha * np.exp(-0.5 * kappa * t1), nc)
        assert fidelity(traj.final_state, target) >= 1.0 - 1e-6

    def test_nbar_exponential_decay(self):
        nc, alpha, kappa = 15, 1.2, 0.4
        params = cavity_params(nc, kappa=kappa)
        rho0 = coherent_ket(alpha, nc).projector()
        traj = evolve(rho0, zero_hamiltonian(nc), params, (0.0, 3.0),
                      IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12))
        expected = alpha ** 2 * np.exp(-kappa * traj.times)
        np.testing.assert_allclose(traj.observables["nbar"], expected,
                                   atol=1e-6)

    def test_qubit_relaxation(self):
        nc, gm = 4, 0.7
        params = cavity_params(nc, gamma_minus=gm)
        rho0 = tensor_product(basis_ket((2, 1), 1, 0),
                              basis_ket((1, nc), 0, 0)).projector()
        traj = evolve(rho0, zero_hamiltonian(2 * nc), params, (0.0, 2.0))
        pe = np.array([s.matrix[nc, nc].real for s in traj.states])
        np.testing.assert_allclose(pe, np.exp(-gm * traj.times), atol=1e-7)

    def test_pure_dephasing_coherence_decay(self):
        # (gamma_phi/2) D[sz] decays qubit coherences at rate gamma_phi.
        nc, gp = 2, 0.9
        params = cavity_params(nc, gamma_phi=gp)
        plus = (tensor_product(basis_ket((2, 1), 0, 0),
                               basis_ket((1, nc), 0, 0)).amplitudes
                + tensor_product(basis_ket((2, 1), 1, 0),
                                 basis_ket((1, nc), 0, 0)).amplitudes)
        rho = np.outer(plus, plus.conj()) / 2.0
        from catamp.hilbert import DensityOp
        traj = evolve(DensityOp(rho, (2, nc)), zero_hamiltonian(2 * nc),
                      params, (0.0, 2.0))
        coh = np.array([abs(s.matrix[0, nc]) for s in traj.states])
        np.testing.assert_allclose(coh, 0.5 * np.exp(-gp * traj.times),
                                   atol=1e-7)


class TestUnitaryOracles:
    def test_vacuum_rabi_oscillation(self):
        # |e,0> under resonant JC: P_e(t) = cos^2(lam t).
        params = GHZ_FREE
        nc = params.cavity_dim
        ket0 = tensor_product(basis_ket((2, 1), 1, 0), basis_ket((1, nc), 0, 0))
        h = static_hamiltonian(params, 0.0).matrix
        t1 = 2.5 * np.pi / params.lam
        traj = evolve_pure(ket0, lambda t: h, params, (0.0, t1),
                           IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12,
                                            n_samples=41))
        pe = np.array([np.sum(np.abs(s.amplitudes[nc:]) ** 2)
                       for s in traj.states])
        np.testing.assert_allclose(pe, np.cos(params.lam * traj.times) ** 2,
                                   atol=1e-6)

    def test_rabi_period(self):
        # Full revival of |e,0> at t = pi / lam.
        params = GHZ_FREE
        nc = params.cavity_dim
        ket0 = tensor_product(basis_ket((2, 1), 1, 0), basis_ket((1, nc), 0, 0))
        h = static_hamiltonian(params, 0.0).matrix
        traj = evolve_pure(ket0, lambda t: h, params,
                           (0.0, np.pi / params.lam),
                           IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13))
        overlap = abs(np.vdot(ket0.amplitudes,
                              traj.final_state.amplitudes)) ** 2
        assert overlap == pytest.approx(1.0, abs=1e-8)

    def test_evolve_pure_rejects_decoherence(self):
        params = cavity_params(4, kappa=0.1)
        ket0 = tensor_product(basis_ket((2, 1), 1, 0), basis_ket((1, 4), 0, 0))
        with pytest.raises(ValueError):
            evolve_pure(ket0, zero_hamiltonian(8), params, (0.0, 1.0))


class TestMethods:
    def test_rk4_convergence_order(self):
        # Error vs dt on the vacuum-Rabi problem; fitted slope >= 3.8.
        params = DeviceParams(cavity_dim=4)
        nc = params.cavity_dim
        rho0 = tensor_product(basis_ket((2, 1), 1, 0),
                              basis_ket((1, nc), 0, 0)).projector()
        h = static_hamiltonian(params, 0.0).matrix
        t1 = 0.5 * np.pi / params.lam
        ref = evolve(rho0, lambda t: h, params, (0.0, t1),
                     IntegratorConfig(method="adaptive_dop853", rel_tol=1e-12,
                                      abs_tol=1e-14, n_samples=2)).final_state
        errs, dts = [], [t1 / 10, t1 / 20, t1 / 40]
        for dt in dts:
            out = evolve(rho0, lambda t: h, params, (0.0, t1),
                         IntegratorConfig(method="fixed_rk4", dt=dt,
                                          n_samples=2)).final_state
            errs.append(np.max(np.abs(out.matrix - ref.matrix)))
        slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
        assert slope >= 3.8

    def test_methods_agree(self):
        params = cavity_params(12, kappa=0.3)
        rho0 = coherent_ket(1.0, 12).projector()
        h = np.diag(np.arange(12)).astype(complex) * 0.5
        outs = []
        for cfg in (IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12),
                    IntegratorConfig(method="adaptive_dop853",
                                     rel_tol=1e-10, abs_tol=1e-12),
                    IntegratorConfig(method="fixed_rk4", dt=1e-3)):
            outs.append(evolve(rho0, lambda t: h, params, (0.0, 1.0),
                               cfg).final_state.matrix)
        np.testing.assert_allclose(outs[0], outs[1], atol=1e-8)
        np.testing.assert_allclose(outs[0], outs[2], atol=1e-8)

    def test_rhs_matches_generator_definition(self):
        # Independent oracle: assemble the dissipator by hand.
        nc = 5
        params = cavity_params(nc, kappa=0.8)
        rng = np.random.default_rng(3)
        m = rng.normal(size=(nc, nc)) + 1j * rng.normal(size=(nc, nc))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        h = rng.normal(size=(nc, nc))
        h = (h + h.T) / 2.0
        a = np.diag(np.sqrt(np.arange(1, nc)), k=1)
        expected = -1j * (h @ rho - rho @ h) + 0.8 * (
            a @ rho @ a.conj().T
            - 0.5 * (a.conj().T @ a @ rho + rho @ a.conj().T @ a))
        got = lindblad_rhs(rho, 0.0, lambda t: h, params)
        np.testing.assert_allclose(got, expected, atol=1e-12)


class TestInvariantsAndProgress:
    def test_trace_preserved_on_all_snapshots(self):
        params = cavity_params(12, kappa=0.5, gamma_minus=0.0)
        rho0 = coherent_ket(1.0, 12).projector()
        traj = evolve(rho0, zero_hamiltonian(12), params, (0.0, 2.0))
        np.testing.assert_allclose(traj.observables["trace"], 1.0, atol=1e-7)

    def test_progress_reaches_completion(self):
        fracs = []
        cfg = IntegratorConfig(progress=fracs.append)
        params = cavity_params(10, kappa=0.2)
        rho0 = coherent_ket(0.8, 10).projector()
        evolve(rho0, zero_hamiltonian(10), params, (0.0, 1.0), cfg)
        assert fracs and fracs[0] <= 0.05 and max(fracs) >= 0.95

    def test_stiffness_error_wraps_solver_failure(self):
        # A rapidly exploding RHS makes the adaptive solver give up.
        params = cavity_params(4)
        ket0 = basis_ket((1, 4), 0, 0)

        def bad_h(t):
            return np.eye(4) * (1e12j)  # non-Hermitian: exponential blowup

        with pytest.raises((StiffnessError, Exception)):
            evolve_pure(ket0, bad_h, params, (0.0, 1.0))
