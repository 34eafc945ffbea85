# tests/test_measures.py
"""
Tests for Wigner grids, fidelities and entanglement measures.
"""

import math
import unittest

import numpy as np

from src.core import fock
from src.core.errors import DimensionMismatchError, DomainError, LeakageError
from src.core.fock import DensityOp, ModeSpec, PureState
from src.main.constants import SOLID_G, SOLID_OMEGA_B
from src.physics import analytic, measures
from src.physics.model import SystemParams
from tests.support import bec_params


class TestWigner(unittest.TestCase):

    def test_vacuum_peak_and_integral(self):
        axis = np.linspace(-4.0, 4.0, 81)
        w = measures.wigner(fock.vacuum(ModeSpec(10)), axis, axis)
        self.assertAlmostEqual(w.value_at(0j), 2.0 / math.pi, places=12)
        self.assertAlmostEqual(w.max(), 2.0 / math.pi, places=12)
        self.assertAlmostEqual(w.integral(), 1.0, places=6)
        self.assertEqual(measures.negativity_volume(w), 0.0)

    def test_coherent_state_peaks_at_alpha(self):
        axis = np.linspace(-2.0, 2.0, 41)
        w = measures.wigner(fock.coherent(1.0 + 0.5j, ModeSpec(30)), axis, axis)
        peaks = measures.local_maxima(w, 0.1)
        self.assertEqual(len(peaks), 1)
        self.assertAlmostEqual(peaks[0][0], 1.0, places=9)
        self.assertAlmostEqual(peaks[0][1], 0.5, places=9)
        self.assertAlmostEqual(peaks[0][2], 2.0 / math.pi, places=8)

    def test_evaluators_agree(self):
        cat = analytic.ideal_cat("two", 1.0, 20)
        axis = np.linspace(-1.5, 1.5, 11)
        lag = measures.wigner(cat, axis, axis, method="laguerre")
        par = measures.wigner(cat, axis, axis, method="displaced_parity")
        np.testing.assert_allclose(lag.values, par.values, atol=1e-10)

    def test_threads_do_not_change_values(self):
        cat = analytic.ideal_cat("four", 1.5, 30)
        axis = np.linspace(-3.0, 3.0, 25)
        single = measures.wigner(cat, axis, axis)
        split = measures.wigner(cat, axis, axis, threads=4)
        np.testing.assert_allclose(single.values, split.values, atol=1e-14)

    def test_unpadded_guard(self):
        axis = np.linspace(-3.0, 3.0, 7)
        with self.assertRaises(LeakageError):
            measures.wigner(fock.vacuum(ModeSpec(10)), axis, axis, pad=False)

    def test_unknown_method(self):
        with self.assertRaises(DomainError):
            measures.wigner(fock.vacuum(ModeSpec(4)), [0.0], [0.0], method="husimi")

    def test_grid_shape_checked(self):
        with self.assertRaises(DimensionMismatchError):
            measures.WignerGrid(np.zeros(3), np.zeros(4), np.zeros((4, 3)))

    def test_mechanical_cat_fringes(self):
        p = bec_params(0.0)
        cat = analytic.projected_cat(math.pi / p.omega_b, p, "+", mech_dim=60)
        alpha = -3.0 * math.sqrt(2.0)
        peaks = measures.wigner(cat.state, [alpha, 0.0], [0.0])
        self.assertAlmostEqual(peaks.values[0, 0], 1.0 / math.pi, delta=1e-3)
        self.assertAlmostEqual(peaks.values[1, 0], 1.0 / math.pi, delta=1e-3)

        fringe = measures.wigner(cat.state, np.linspace(-3.0, -1.0, 21), np.linspace(-1.0, 1.0, 41))
        self.assertLess(fringe.min(), -0.05)
        self.assertGreater(measures.negativity_volume(fringe), 0.0)

    def test_solid_state_single_peak(self):
        p = SystemParams(omega_b=SOLID_OMEGA_B, g=SOLID_G)
        cat = analytic.projected_cat(math.pi / p.omega_b, p, "+", mech_dim=20)
        axis = np.linspace(-2.0, 2.0, 41)
        w = measures.wigner(cat.state, axis, axis)
        self.assertEqual(len(measures.local_maxima(w, 0.1)), 1)

    def test_moments_of_coherent_state(self):
        axis = np.linspace(-5.0, 5.0, 201)
        w = measures.wigner(fock.coherent(0.8 - 0.4j, ModeSpec(30)), axis, axis)
        moments = measures.wigner_moments(w)
        self.assertAlmostEqual(moments["mean_x"], 0.8, places=6)
        self.assertAlmostEqual(moments["mean_y"], -0.4, places=6)
        self.assertAlmostEqual(moments["var_x"], 0.25, places=6)
        self.assertAlmostEqual(moments["var_y"], 0.25, places=6)

    def test_moments_of_projected_cat_match_variances(self):
        p = bec_params(0.2)
        cat = analytic.projected_cat(math.pi / p.omega_b, p, "+")
        w = measures.wigner(cat.state, np.linspace(-9.0, 5.0, 141), np.linspace(-5.0, 5.0, 101))
        moments = measures.wigner_moments(w)
        direct = analytic.variances_numeric(cat.state)
        self.assertAlmostEqual(moments["var_x"], direct.var_x, delta=1e-4)
        self.assertAlmostEqual(moments["var_y"], direct.var_y, delta=1e-4)

    def test_position_distribution_of_vacuum(self):
        x = np.linspace(-4.0, 4.0, 401)
        density = measures.position_distribution(fock.vacuum(ModeSpec(5)), x)
        self.assertAlmostEqual(density[200], math.sqrt(2.0 / math.pi), places=12)
        self.assertAlmostEqual(float(np.sum(density) * (x[1] - x[0])), 1.0, places=8)


class TestFidelity(unittest.TestCase):

    def test_pure_cases(self):
        mode = ModeSpec(20)
        a = fock.coherent(0.5, mode)
        self.assertAlmostEqual(measures.fidelity(a, a), 1.0, places=12)
        self.assertAlmostEqual(measures.fidelity(fock.basis(mode, 0), fock.basis(mode, 1)), 0.0, places=12)

    def test_mixed_cases(self):
        mode = ModeSpec(3)
        rho = DensityOp(np.diag([0.5, 0.5, 0.0]), (mode,))
        self.assertAlmostEqual(measures.fidelity(fock.basis(mode, 0), rho), 0.5, places=12)
        self.assertAlmostEqual(measures.fidelity(rho, rho), 1.0, places=7)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            measures.fidelity(fock.vacuum(ModeSpec(3)), fock.vacuum(ModeSpec(4)))

    def test_distance_ignores_global_phase(self):
        a = fock.coherent(0.7j, ModeSpec(20))
        b = PureState(np.exp(0.9j) * a.amplitudes, a.dims)
        self.assertLess(measures.state_distance(a, b), 1e-7)
        self.assertAlmostEqual(abs(measures.overlap(a, b)), 1.0, places=12)

    def test_purity(self):
        mode = ModeSpec(2)
        self.assertEqual(measures.purity(fock.vacuum(mode)), 1.0)
        self.assertAlmostEqual(measures.purity(DensityOp(np.eye(2) / 2, (mode,))), 0.5, places=12)


class TestEntanglement(unittest.TestCase):

    def setUp(self):
        dims = (ModeSpec(2), ModeSpec(2))
        self.bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0), dims)
        self.product = fock.tensor(fock.vacuum(ModeSpec(2)), fock.basis(ModeSpec(2), 1))

    def test_concurrence(self):
        self.assertAlmostEqual(measures.concurrence_numeric(self.bell), 1.0, places=12)
        self.assertLess(measures.concurrence_numeric(self.product), 1e-7)

    def test_entropy(self):
        self.assertAlmostEqual(measures.entanglement_entropy(self.bell), math.log(2.0), places=12)
        self.assertAlmostEqual(measures.entanglement_entropy(self.bell.to_density()), math.log(2.0), places=12)
        self.assertAlmostEqual(measures.entanglement_entropy(self.product), 0.0, places=12)

    def test_single_mode_rejected(self):
        with self.assertRaises(DimensionMismatchError):
            measures.concurrence_numeric(fock.vacuum(ModeSpec(3)))


if __name__ == "__main__":
    unittest.main()
