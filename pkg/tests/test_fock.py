# tests/test_fock.py
"""
Tests for truncated Fock-space operators, states and composition.
"""

import math
import unittest

import numpy as np

from src.core import fock
from src.core.errors import DimensionMismatchError, DomainError, LeakageError
from src.core.fock import DensityOp, ModeSpec, Operator, PureState


class TestOperators(unittest.TestCase):

    def test_ladder_matrix_elements(self):
        b = fock.annihilation(ModeSpec(6)).matrix
        self.assertAlmostEqual(b[0, 1], 1.0)
        self.assertAlmostEqual(b[1, 2], math.sqrt(2.0))
        self.assertAlmostEqual(b[4, 5], math.sqrt(5.0))
        self.assertEqual(b[1, 0], 0.0)

    def test_commutator_except_top_level(self):
        d = 8
        b = fock.annihilation(ModeSpec(d)).matrix
        comm = b @ b.conj().T - b.conj().T @ b
        np.testing.assert_allclose(np.diag(comm)[:-1], np.ones(d - 1), atol=1e-12)
        self.assertAlmostEqual(comm[-1, -1].real, -(d - 1))

    def test_number_and_parity(self):
        mode = ModeSpec(5)
        np.testing.assert_allclose(np.diag(fock.number(mode).matrix).real, [0, 1, 2, 3, 4])
        np.testing.assert_allclose(np.diag(fock.parity(mode).matrix).real, [1, -1, 1, -1, 1])

    def test_displacement_is_unitary_below_margin(self):
        d = fock.displacement(1.5 - 0.5j, ModeSpec(40))
        self.assertLess(d.unitarity_defect(), 1e-10)

    def test_displacement_guard(self):
        with self.assertRaises(LeakageError) as ctx:
            fock.displacement(3.0, ModeSpec(20))
        self.assertEqual(ctx.exception.dimension, 20)

    def test_squeeze_inverse(self):
        mode = ModeSpec(60)
        z = 0.4 * np.exp(0.3j)
        prod = fock.squeeze(z, mode).matrix @ fock.squeeze(-z, mode).matrix
        np.testing.assert_allclose(prod, np.eye(60), atol=1e-10)

    def test_squeeze_magnitude_guard(self):
        with self.assertRaises(LeakageError):
            fock.squeeze(2.5, ModeSpec(80))

    def test_squeezed_vacuum_variance(self):
        mode = ModeSpec(60)
        r = 0.5
        psi = fock.squeeze(r, mode).matrix[:, 0]
        b = fock.annihilation(mode).matrix
        x = 0.5 * (b + b.conj().T)
        var_x = np.vdot(psi, x @ x @ psi).real
        self.assertAlmostEqual(var_x, 0.25 * math.exp(-2 * r), places=10)

    def test_operator_shape_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            Operator(np.eye(3), (ModeSpec(4),))

    def test_expm_inverse_on_random_hermitian(self):
        rng = np.random.default_rng(5)
        z = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = z + z.conj().T
        h /= np.linalg.norm(h, 2)
        mode = (ModeSpec(6),)
        product = fock.expm(Operator(h, mode)).matrix @ fock.expm(Operator(-h, mode)).matrix
        np.testing.assert_allclose(product, np.eye(6), atol=1e-10)

    def test_expm_derivative(self):
        rng = np.random.default_rng(6)
        z = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        gen = -1j * (z + z.conj().T) / np.linalg.norm(z + z.conj().T, 2)
        mode = (ModeSpec(5),)
        s, h = 0.3, 1e-5
        forward = fock.expm(Operator((s + h) * gen, mode)).matrix
        backward = fock.expm(Operator((s - h) * gen, mode)).matrix
        slope = (forward - backward) / (2 * h)
        np.testing.assert_allclose(slope, gen @ fock.expm(Operator(s * gen, mode)).matrix, atol=1e-7)


class TestStates(unittest.TestCase):

    def test_coherent_amplitudes(self):
        alpha = 1.0 + 0.5j
        psi = fock.coherent(alpha, ModeSpec(30)).amplitudes
        for n in range(15):
            expected = math.exp(-0.5 * abs(alpha) ** 2) * alpha ** n / math.sqrt(math.factorial(n))
            self.assertAlmostEqual(abs(psi[n] - expected), 0.0, places=10)

    def test_coherent_mean_photon_number(self):
        mode = ModeSpec(40)
        psi = fock.coherent(1.2, mode)
        self.assertAlmostEqual(fock.expect(fock.number(mode), psi).real, 1.44, places=10)

    def test_basis_out_of_range(self):
        with self.assertRaises(DomainError):
            fock.basis(ModeSpec(3), 3)

    def test_mode_dimension_validated(self):
        with self.assertRaises(DomainError):
            ModeSpec(1)

    def test_state_length_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            PureState(np.ones(5), (ModeSpec(4),))

    def test_normalized_zero_vector(self):
        with self.assertRaises(DomainError):
            PureState(np.zeros(3), (ModeSpec(3),)).normalized()

    def test_density_invariants(self):
        rho = fock.coherent(0.7, ModeSpec(20)).to_density()
        rho.check_invariants()
        bad = DensityOp(np.array([[1.0, 0.5], [0.0, 0.0]]), (ModeSpec(2),))
        with self.assertRaises(DomainError):
            bad.check_invariants()


class TestLeakage(unittest.TestCase):

    def test_tail_population_of_top_state(self):
        mode = ModeSpec(10)
        self.assertAlmostEqual(fock.tail_population(fock.basis(mode, 9).amplitudes, (mode,)), 1.0)
        self.assertEqual(fock.tail_population(fock.basis(mode, 2).amplitudes, (mode,)), 0.0)

    def test_check_leakage_raises(self):
        mode = ModeSpec(10)
        with self.assertRaises(LeakageError):
            fock.check_leakage(fock.basis(mode, 8).amplitudes, (mode,), "top")

    def test_displacement_dimension(self):
        self.assertEqual(fock.displacement_dimension(0.0), 10)
        self.assertEqual(fock.displacement_dimension(2.0), 26)


class TestComposition(unittest.TestCase):

    def test_tensor_dims_and_partial_trace(self):
        a = fock.coherent(0.5, ModeSpec(12))
        b = fock.basis(ModeSpec(3), 1)
        joint = fock.tensor(a, b)
        self.assertEqual([d.dimension for d in joint.dims], [12, 3])

        reduced = fock.partial_trace(joint, keep=0)
        np.testing.assert_allclose(reduced.matrix, a.to_density().matrix, atol=1e-12)
        reduced_b = fock.partial_trace(joint.to_density(), keep=1)
        np.testing.assert_allclose(reduced_b.matrix, b.to_density().matrix, atol=1e-12)

    def test_partial_trace_bad_factor(self):
        joint = fock.tensor(fock.vacuum(ModeSpec(2)), fock.vacuum(ModeSpec(2)))
        with self.assertRaises(DimensionMismatchError):
            fock.partial_trace(joint, keep=2)

    def test_lift_acts_on_one_factor(self):
        dims = (ModeSpec(3), ModeSpec(4))
        n_c = fock.lift(fock.number(dims[0]), 0, dims)
        state = fock.tensor(fock.basis(dims[0], 2), fock.basis(dims[1], 3))
        self.assertAlmostEqual(fock.expect(n_c, state).real, 2.0)

    def test_expect_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            fock.expect(fock.number(ModeSpec(3)), fock.vacuum(ModeSpec(4)))

    def test_embed_pads_with_zeros(self):
        psi = fock.coherent(0.3, ModeSpec(10))
        big = fock.embed(psi, 15)
        self.assertEqual(big.dims[0].dimension, 15)
        np.testing.assert_allclose(big.amplitudes[:10], psi.amplitudes)
        self.assertTrue(np.all(big.amplitudes[10:] == 0))
        with self.assertRaises(DimensionMismatchError):
            fock.embed(psi, 5)

    def test_tensor_all_three_factors(self):
        dims = (ModeSpec(2), ModeSpec(3), ModeSpec(4))
        joint = fock.tensor_all([fock.basis(dims[0], 1), fock.basis(dims[1], 2), fock.basis(dims[2], 0)])
        self.assertEqual(tuple(d.dimension for d in joint.dims), (2, 3, 4))
        middle = fock.partial_trace(joint, keep=1)
        self.assertAlmostEqual(middle.matrix[2, 2].real, 1.0)
        self.assertAlmostEqual(middle.trace, 1.0)

    def test_tensor_type_mismatch(self):
        with self.assertRaises(TypeError):
            fock.tensor(fock.vacuum(ModeSpec(2)), fock.number(ModeSpec(2)))


if __name__ == "__main__":
    unittest.main()
