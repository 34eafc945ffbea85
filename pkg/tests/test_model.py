# tests/test_model.py
"""
Tests for the effective parameters, coherent amplitude and the two propagators.
"""

import math
import unittest

import numpy as np

from src.core import fock
from src.core.errors import DomainError, LeakageError
from src.core.fock import ModeSpec
from src.main.constants import BEC_G, BEC_OMEGA_B, MECH_DIM, OPTICAL_G, SOLID_G, SOLID_OMEGA_B
from src.physics import model
from src.physics.model import EffectiveParams, SystemParams
from tests.support import bec_params, optical_params, random_pure


class TestParameters(unittest.TestCase):

    def test_ratio_outside_domain(self):
        with self.assertRaises(DomainError):
            SystemParams.from_ratio(BEC_OMEGA_B, 2.0, BEC_G)
        with self.assertRaises(DomainError):
            SystemParams.from_ratio(BEC_OMEGA_B, -2.1, BEC_G)

    def test_negative_values_rejected(self):
        with self.assertRaises(DomainError):
            SystemParams(omega_b=BEC_OMEGA_B, g=-1.0)
        with self.assertRaises(DomainError):
            SystemParams(omega_b=BEC_OMEGA_B, kappa_a=-1.0)
        with self.assertRaises(DomainError):
            SystemParams(omega_b=0.0)

    def test_effective_params_without_scattering(self):
        e = model.effective_params(bec_params(0.0))
        self.assertEqual(e.r_s, 0.0)
        self.assertAlmostEqual(e.omega_s, BEC_OMEGA_B)
        self.assertAlmostEqual(e.g_s, BEC_G / math.sqrt(2.0))
        self.assertAlmostEqual(e.eta, -e.g_s / e.omega_s)

    def test_effective_params_with_scattering(self):
        e = model.effective_params(bec_params(1.0))
        self.assertAlmostEqual(e.r_s, 0.25 * math.log(3.0), places=12)
        self.assertAlmostEqual(e.omega_s / BEC_OMEGA_B, math.sqrt(3.0) / 2.0, places=12)

    def test_effective_params_consistency_enforced(self):
        with self.assertRaises(DomainError):
            EffectiveParams(r_s=0.0, omega_s=1.0, g_s=1.0, eta=1.0, delta=1.0)

    def test_effective_params_continuous_at_zero_scattering(self):
        base = model.effective_params(bec_params(0.0))
        for ratio in (1e-6, -1e-6):
            e = model.effective_params(bec_params(ratio))
            with self.subTest(ratio=ratio):
                self.assertLess(abs(e.r_s), 1e-6)
                for name in ("omega_s", "g_s", "eta", "delta"):
                    self.assertLess(abs(getattr(e, name) / getattr(base, name) - 1.0), 1e-6)
        up, down = model.effective_params(bec_params(1e-6)), model.effective_params(bec_params(-1e-6))
        self.assertAlmostEqual(up.r_s, -down.r_s, places=12)

    def test_with_replaces_field(self):
        p = bec_params(0.5, kappa_a=1e5)
        self.assertEqual(p.with_(kappa_a=0.0).kappa_a, 0.0)
        self.assertAlmostEqual(p.omega_sw_ratio, 0.5)


class TestAmplitude(unittest.TestCase):

    def test_peak_amplitude(self):
        p = bec_params(0.0)
        alpha = model.coherent_amplitude(math.pi / p.omega_b, model.effective_params(p))
        self.assertAlmostEqual(abs(alpha), math.sqrt(2.0) * BEC_G / BEC_OMEGA_B, places=9)
        self.assertAlmostEqual(abs(alpha), 4.2426, places=4)

    def test_solid_state_amplitude(self):
        p = SystemParams(omega_b=SOLID_OMEGA_B, g=SOLID_G)
        grid = np.linspace(0.0, 2 * math.pi / p.omega_b, 401)
        peak, _ = model.peak_amplitude(p, grid)
        self.assertAlmostEqual(peak, 1.41421e-3, places=8)

    def test_amplitude_vanishes_after_period(self):
        for ratio in (-1.2, 0.0, 0.7, 1.5):
            e = model.effective_params(bec_params(ratio))
            for n in (1, 2, 3):
                self.assertLess(abs(model.coherent_amplitude(n * e.period, e)), 1e-9)

    def test_vectorised_amplitude(self):
        e = model.effective_params(bec_params(0.3))
        times = np.linspace(0.0, e.period, 7)
        values = model.coherent_amplitude(times, e)
        self.assertEqual(values.shape, (7,))
        self.assertAlmostEqual(values[3], model.coherent_amplitude(times[3], e))

    def test_amplitude_periodic(self):
        rng = np.random.default_rng(2)
        for ratio in (-1.5, -0.18, 0.0, 0.9, 1.8):
            e = model.effective_params(bec_params(ratio))
            times = rng.uniform(0.0, e.period, 8)
            with self.subTest(ratio=ratio):
                np.testing.assert_allclose(np.abs(model.coherent_amplitude(times + e.period, e)),
                                           np.abs(model.coherent_amplitude(times, e)), atol=1e-10)

    def test_peak_between_grid_points(self):
        p = bec_params(0.0)
        grid = np.linspace(0.0, 2 * math.pi, 400) / p.omega_b
        on_grid = float(np.max(np.abs(model.coherent_amplitude(grid, model.effective_params(p)))))
        peak, t_peak = model.peak_amplitude(p, grid)
        self.assertLess(abs(peak - math.sqrt(2.0) * BEC_G / BEC_OMEGA_B), 1e-6)
        self.assertAlmostEqual(t_peak * p.omega_b, math.pi, places=4)
        self.assertGreater(peak, on_grid)

    def test_kerr_phase(self):
        e = model.effective_params(bec_params(0.0))
        t = 1.7 / BEC_OMEGA_B
        expected = e.delta * t - e.eta ** 2 * math.sin(e.omega_s * t)
        self.assertAlmostEqual(model.kerr_phase(t, e), expected, places=12)

    def test_enlargement_near_lower_edge(self):
        self.assertAlmostEqual(model.amplitude_enlargement(BEC_OMEGA_B, BEC_G, 0.0), 1.0, places=12)
        self.assertGreater(model.amplitude_enlargement(BEC_OMEGA_B, BEC_G, -1.999), 5.0)

    def test_enlargement_needs_coupling(self):
        with self.assertRaises(DomainError):
            model.amplitude_enlargement(BEC_OMEGA_B, 0.0, -1.0)

    def test_suggested_dimension_floor(self):
        self.assertGreaterEqual(model.suggest_mech_dim(0.0, bec_params(0.0)), MECH_DIM)
        t = math.pi / BEC_OMEGA_B
        p = bec_params(0.0)
        alpha = abs(model.coherent_amplitude(t, model.effective_params(p)))
        self.assertGreaterEqual(model.suggest_mech_dim(t, p), fock.displacement_dimension(alpha))


class TestKerrRatio(unittest.TestCase):

    def test_reference_ratios(self):
        self.assertAlmostEqual(model.kerr_ratio(optical_params(-0.71)), 0.25083, places=4)
        self.assertAlmostEqual(model.kerr_ratio(optical_params(-0.18)), 0.16689, places=4)
        self.assertAlmostEqual(model.kerr_ratio(optical_params(0.5)), 0.12497, places=4)

    def test_tune_scattering_two_component(self):
        omega_sw = model.tune_scattering(0.25, BEC_OMEGA_B, OPTICAL_G)
        self.assertAlmostEqual(omega_sw / BEC_OMEGA_B, -0.71, delta=0.01)
        p = SystemParams(omega_b=BEC_OMEGA_B, omega_sw=omega_sw, g=OPTICAL_G)
        self.assertAlmostEqual(model.kerr_ratio(p), 0.25, places=10)

    def test_tune_scattering_unbracketed(self):
        with self.assertRaises(DomainError):
            model.tune_scattering(10.0, BEC_OMEGA_B, OPTICAL_G)


class TestHamiltonian(unittest.TestCase):

    def test_hamiltonian_is_hermitian_and_block_diagonal(self):
        dims = (ModeSpec(3), ModeSpec(12))
        p = optical_params(0.4).with_(omega_c_eff=3e4)
        h = model.build_hamiltonian(p, dims).matrix
        np.testing.assert_allclose(h, h.conj().T, atol=1e-9)
        blocks = model.hamiltonian_blocks(p, dims)
        for n, block in enumerate(blocks):
            np.testing.assert_allclose(h[n * 12:(n + 1) * 12, n * 12:(n + 1) * 12], block, atol=1e-6)
        self.assertTrue(np.all(h[:12, 12:] == 0))

    def test_direct_blockwise_matches_full_expm(self):
        dims = (ModeSpec(2), ModeSpec(20))
        p = optical_params(0.5)
        t = 2.3 / BEC_OMEGA_B
        blockwise = model.direct_propagator(t, p, dims).matrix
        full = model.direct_propagator(t, p, dims, blockwise=False).matrix
        np.testing.assert_allclose(blockwise, full, atol=1e-10)


class TestPropagators(unittest.TestCase):

    def test_factorized_matches_direct(self):
        rng = np.random.default_rng(11)
        for ratio in (-0.71, 0.0, 0.5, 1.0):
            p = optical_params(ratio)
            state = random_pure(rng, (3, 60), support=4)
            period = model.effective_params(p).period
            for t in np.linspace(0.0, period, 5):
                with self.subTest(ratio=ratio, t=t):
                    a = model.apply_factorized(t, p, state)
                    b = model.apply_direct(t, p, state)
                    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-8)

    def test_factorized_operator_is_unitary(self):
        dims = (ModeSpec(2), ModeSpec(40))
        p = optical_params(0.5)
        u = model.factorized_propagator(1.1 / BEC_OMEGA_B, p, dims)
        self.assertLess(u.unitarity_defect(margin=15, factors=(1,)), 1e-8)

    def test_factorized_guard(self):
        with self.assertRaises(LeakageError):
            model.factorized_propagator(math.pi / BEC_OMEGA_B, bec_params(0.0), (ModeSpec(3), ModeSpec(20)))

    def test_cavity_frequency_rotated_out(self):
        dims = (ModeSpec(2), ModeSpec(30))
        p = optical_params(0.0)
        rotating = p.with_(omega_c_eff=5e4)
        state = fock.tensor(fock.basis(dims[0], 1), fock.vacuum(dims[1]))
        t = 0.9 / BEC_OMEGA_B
        plain = model.apply_factorized(t, p, state)
        rotated = model.rotate_out_cavity(model.apply_factorized(t, rotating, state), t, rotating)
        np.testing.assert_allclose(rotated.amplitudes, plain.amplitudes, atol=1e-10)


if __name__ == "__main__":
    unittest.main()
