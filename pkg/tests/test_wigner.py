"""Wigner evaluation: exact values, normalization, symmetry, truncation."""

import math

import numpy as np
import pytest

from catamp.hilbert import cavity_ket
from catamp.states import CatSpec, TruncationError, cat_ket, coherent_ket
from catamp.wigner import GridSpec, WignerGrid, displacement_op, wigner

TWO_OVER_PI = 2.0 / np.pi
SMALL_GRID = GridSpec(-2.5, 2.5, -2.5, 2.5, 21, 21)


def fock_rho(n, nc):
    amps = np.zeros(nc, dtype=complex)
    amps[n] = 1.0
    return cavity_ket(amps).projector()


class TestGridSpec:
    def test_axes(self):
        g = GridSpec(-1.0, 1.0, -2.0, 2.0, 5, 9)
        np.testing.assert_allclose(g.x_axis, np.linspace(-1, 1, 5))
        np.testing.assert_allclose(g.p_axis, np.linspace(-2, 2, 9))

    def test_rejects_empty_extent(self):
        with pytest.raises(ValueError):
            GridSpec(1.0, -1.0, -1.0, 1.0, 5, 5)

    def test_rejects_single_point_axis(self):
        with pytest.raises(ValueError):
            GridSpec(-1.0, 1.0, -1.0, 1.0, 1, 5)


class TestWignerGrid:
    def test_shape_enforced(self):
        with pytest.raises(ValueError):
            WignerGrid(np.zeros(3), np.zeros(4), np.zeros((3, 4)))

    def test_bound_enforced(self):
        with pytest.raises(ValueError):
            WignerGrid(np.linspace(-1, 1, 3), np.linspace(-1, 1, 3),
                       np.full((3, 3), 1.0))


class TestDisplacementOp:
    def test_vacuum_column_is_coherent_state(self):
        beta = 0.9 + 0.4j
        d = displacement_op(beta, 40).matrix
        exact = np.array([math.exp(-0.5 * abs(beta) ** 2) * beta ** n
                          / math.sqrt(math.factorial(n)) for n in range(40)],
                         dtype=complex)
        np.testing.assert_allclose(d[:, 0], exact, atol=1e-10)

    def test_unitary_at_ample_dim(self):
        d = displacement_op(1.0, 40).matrix
        np.testing.assert_allclose(d @ d.conj().T, np.eye(40), atol=1e-10)

    def test_truncation_rejected_with_hint(self):
        with pytest.raises(TruncationError) as exc:
            displacement_op(3.0, 5)
        assert exc.value.required_dim >= 5
        displacement_op(3.0, exc.value.required_dim)


class TestWignerValues:
    def test_vacuum_peak(self):
        grid = wigner(fock_rho(0, 4), GridSpec(-1.0, 1.0, -1.0, 1.0, 3, 3))
        assert grid.values[1, 1] == pytest.approx(TWO_OVER_PI, abs=1e-9)

    def test_vacuum_gaussian_profile(self):
        # W(beta) = (2/pi) e^{-2|beta|^2} for the vacuum.
        g = GridSpec(-1.5, 1.5, -1.5, 1.5, 7, 7)
        grid = wigner(fock_rho(0, 4), g)
        for i, p in enumerate(g.p_axis):
            for j, x in enumerate(g.x_axis):
                assert grid.values[i, j] == pytest.approx(
                    TWO_OVER_PI * np.exp(-2 * (x * x + p * p)), abs=1e-9)

    def test_single_photon_negative_at_origin(self):
        grid = wigner(fock_rho(1, 4), GridSpec(-1.0, 1.0, -1.0, 1.0, 3, 3))
        assert grid.values[1, 1] == pytest.approx(-TWO_OVER_PI, abs=1e-9)

    def test_coherent_state_peak_location(self):
        alpha = 1.0 + 0.5j
        g = GridSpec(0.5, 1.5, 0.0, 1.0, 11, 11)
        grid = wigner(coherent_ket(alpha, 25).projector(), g)
        i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        assert grid.x_axis[j] == pytest.approx(1.0, abs=0.06)
        assert grid.p_axis[i] == pytest.approx(0.5, abs=0.06)

    def test_even_cat_positive_central_fringe(self):
        rho = cat_ket(CatSpec(1.5, "even"), 25).projector()
        grid = wigner(rho, GridSpec(-0.2, 0.2, -0.2, 0.2, 3, 3))
        assert grid.values[1, 1] == pytest.approx(TWO_OVER_PI, abs=1e-6)

    def test_odd_cat_negative_central_fringe(self):
        rho = cat_ket(CatSpec(1.5, "odd"), 25).projector()
        grid = wigner(rho, GridSpec(-0.2, 0.2, -0.2, 0.2, 3, 3))
        assert grid.values[1, 1] == pytest.approx(-TWO_OVER_PI, abs=1e-6)

    def test_origin_equals_parity_expectation(self):
        # W(0) = (2/pi) <P> for any state; mixed-state check.
        rho = 0.5 * fock_rho(0, 6).matrix + 0.3 * fock_rho(1, 6).matrix \
            + 0.2 * fock_rho(2, 6).matrix
        from catamp.hilbert import DensityOp
        grid = wigner(DensityOp(rho, (1, 6)),
                      GridSpec(-0.1, 0.1, -0.1, 0.1, 3, 3))
        assert grid.values[1, 1] == pytest.approx(
            TWO_OVER_PI * (0.5 - 0.3 + 0.2), abs=1e-9)

    def test_cat_point_symmetry(self):
        rho = cat_ket(CatSpec(1.2, "even"), 20).projector()
        grid = wigner(rho, SMALL_GRID)
        np.testing.assert_allclose(grid.values,
                                   grid.values[::-1, ::-1], atol=1e-10)

    def test_normalization_integral(self):
        grid = wigner(coherent_ket(0.8, 15).projector(),
                      GridSpec(-3.5, 3.5, -3.5, 3.5, 41, 41))
        assert grid.integral() == pytest.approx(1.0, abs=5e-4)

    def test_mixed_state_linear(self):
        rho_a = fock_rho(0, 6)
        rho_b = fock_rho(2, 6)
        from catamp.hilbert import DensityOp
        mix = DensityOp(0.6 * rho_a.matrix + 0.4 * rho_b.matrix, (1, 6))
        g = GridSpec(-1.0, 1.0, -1.0, 1.0, 5, 5)
        wa, wb, wm = (wigner(r, g).values for r in (rho_a, rho_b, mix))
        np.testing.assert_allclose(wm, 0.6 * wa + 0.4 * wb, atol=1e-10)
