"""Protocol plumbing: SNAP fitting, resets, cat fitting, shift evidence."""

import numpy as np
import pytest

from catamp.hilbert import DensityOp, basis_ket, tensor_product
from catamp.protocol import (ProtocolConfig, ShiftEvidenceReport,
                             _best_cat_fit, default_config, fit_snap_phases,
                             partial_trace_cavity, prepare_initial,
                             qubit_reset, run_edag, shift_evidence, snap_gate,
                             amplify)
from catamp.states import (CatSpec, apply_shift, cat_ket, coherent_ket,
                           fidelity)


def small_config(**kw):
    return default_config(cavity_dim=16, **kw)


class TestConfig:
    def test_bad_snap_mode(self):
        with pytest.raises(ValueError):
            small_config(snap_mode="guess")

    def test_decoherence_flag_requires_rates(self):
        with pytest.raises(ValueError):
            small_config(decoherence_on=True)

    def test_amplify_k_validation(self):
        with pytest.raises(ValueError):
            amplify(1.5, "even", 3, small_config())

    def test_double_shift_needs_reset(self):
        with pytest.raises(ValueError):
            amplify(1.5, "even", 2, small_config(reset_mode="skip"))


class TestStatePlumbing:
    def test_prepare_initial_pure(self):
        cfg = small_config()
        state = prepare_initial(1.5, "even", cfg)
        nc = cfg.device.cavity_dim
        # qubit excited: all support on the |e> block
        assert np.sum(np.abs(state.amplitudes[:nc]) ** 2) == pytest.approx(0.0)

    def test_prepare_initial_density_when_decoherent(self):
        cfg = default_config(cavity_dim=16, decoherence_on=True,
                             kappa=1e-3, gamma_minus=1e-2, gamma_phi=1e-2)
        assert isinstance(prepare_initial(1.5, "even", cfg), DensityOp)

    def test_qubit_reset_flips(self):
        cfg = small_config()
        nc = cfg.device.cavity_dim
        state = tensor_product(basis_ket((2, 1), 1, 0),
                               coherent_ket(1.0, nc))
        out = qubit_reset(state, cfg)
        assert np.sum(np.abs(out.amplitudes[nc:]) ** 2) == pytest.approx(0.0)
        np.testing.assert_allclose(out.amplitudes[:nc], state.amplitudes[nc:])

    def test_partial_trace_cavity(self):
        nc = 12
        ket = tensor_product(basis_ket((2, 1), 1, 0), coherent_ket(0.9, nc))
        q = partial_trace_cavity(ket.projector())
        np.testing.assert_allclose(q.matrix, [[0, 0], [0, 1]], atol=1e-12)


class TestSnap:
    def test_gate_applies_fock_phases(self):
        nc = 12
        ket = coherent_ket(1.0, nc)
        phases = [0.0, 0.5, -0.3, 1.0]
        out = snap_gate(ket, phases)
        full = np.concatenate([phases, np.zeros(nc - 4)])
        np.testing.assert_allclose(
            out.amplitudes, np.exp(1j * full) * ket.amplitudes, atol=1e-12)

    def test_too_many_phases(self):
        with pytest.raises(ValueError):
            snap_gate(coherent_ket(0.5, 10), np.zeros(11))

    def test_fit_recovers_scrambled_phases(self):
        # Scramble a cat with random Fock phases; the fit must undo them.
        nc = 20
        rng = np.random.default_rng(11)
        target = cat_ket(CatSpec(1.5, "even"), nc)
        scramble = rng.uniform(-np.pi, np.pi, nc)
        scrambled = snap_gate(target, scramble)
        assert fidelity(scrambled, target) < 0.9  # genuinely scrambled
        phases, converged = fit_snap_phases(scrambled.projector(), target)
        assert converged
        fixed = snap_gate(scrambled, phases)
        assert fidelity(fixed, target) == pytest.approx(1.0, abs=1e-9)

    def test_fit_leaves_unsupported_fock_states_alone(self):
        nc = 14
        target = cat_ket(CatSpec(1.2, "even"), nc)
        phases, _ = fit_snap_phases(target.projector(), target)
        assert np.all(phases[1::2] == 0.0)

    def test_fit_on_mixed_state(self):
        nc = 16
        target = cat_ket(CatSpec(1.2, "even"), nc)
        rot = snap_gate(target, np.linspace(0, 1.5, nc))
        rho = DensityOp(0.9 * rot.projector().matrix
                        + 0.1 * np.eye(nc) / nc, (1, nc))
        phases, _ = fit_snap_phases(rho, target)
        fixed = snap_gate(rho, phases)
        assert fidelity(fixed, target) >= 0.9 * (1 - 1e-6)


class TestCatFit:
    def test_recovers_exact_cat(self):
        nc = 25
        rho = cat_ket(CatSpec(1.78, "odd"), nc).projector()
        ap, f = _best_cat_fit(rho, 1.5, "odd")
        assert ap == pytest.approx(1.78, abs=1e-3)
        assert f == pytest.approx(1.0, abs=1e-6)


class TestShiftEvidence:
    def test_exact_shift_oracle(self):
        # The exact-operator path must give residual exactly 0 and zero
        # wrong-parity leakage.
        nc = 25
        cat = cat_ket(CatSpec(1.5, "even"), nc)
        rho_in = cat.projector()
        rho_out = apply_shift(cat, 2).projector()
        rep = shift_evidence(rho_in, rho_out, 2)
        assert isinstance(rep, ShiftEvidenceReport)
        assert rep.residual == 0.0
        assert rep.wrong_parity_population == 0.0

    def test_detects_mismatch(self):
        nc = 25
        cat = cat_ket(CatSpec(1.5, "even"), nc)
        rep = shift_evidence(cat.projector(), cat.projector(), 2)
        assert rep.residual > 0.1

    def test_dims_must_match(self):
        a = cat_ket(CatSpec(1.0, "even"), 20).projector()
        b = cat_ket(CatSpec(1.0, "even"), 25).projector()
        with pytest.raises(ValueError):
            shift_evidence(a, b, 1)


class TestRunEdag:
    def test_unknown_round(self):
        cfg = small_config()
        state = prepare_initial(1.0, "even", cfg)
        with pytest.raises(ValueError):
            run_edag(state, cfg, "third")

    def test_warns_on_ground_qubit(self):
        cfg = small_config()
        nc = cfg.device.cavity_dim
        state = tensor_product(basis_ket((2, 1), 0, 0), coherent_ket(1.0, nc))
        # The warning is the point; a one-step fixed integrator keeps the
        # run cheap (its own failure afterwards is irrelevant here).
        bad = ProtocolConfig(
            device=cfg.device, sweep=cfg.sweep,
            schedule_first=cfg.schedule_first,
            integrator=cfg.integrator.__class__(
                method="fixed_rk4", dt=1e6, n_samples=2))
        with pytest.warns(UserWarning):
            try:
                run_edag(state, bad, "first")
            except Exception:
                pass
