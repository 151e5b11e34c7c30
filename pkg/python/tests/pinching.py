import unittest

import numpy as np
from numpy.testing import assert_allclose
from utils import binary_state, noiseless_state, random_cq_state, random_density_matrix

import gpwlab
from gpwlab import DensityMatrix
from gpwlab.pinching import (
    PinchingConstants,
    PinchingMap,
    apply_pinching,
    build_conditional_pinching,
    build_E_chain,
    commutation_check,
    commutator_norms,
    iid_component_bounds,
    iid_conditional_bound,
    pinching_constants,
    pinching_from_state,
)
from gpwlab.status import LayoutMismatchError, SchemaError


class TestPinchingMap(unittest.TestCase):
    def test_spectral_clusters(self):
        sigma = DensityMatrix.from_diagonal([0.25, 0.5, 0.25], [("B", 3)])
        pinching = pinching_from_state(sigma)
        self.assertEqual(pinching.count, 2)
        self.assertEqual(len(pinching), 2)

        rho = DensityMatrix(np.full((3, 3), 1 / 3), [("B", 3)])
        pinched = apply_pinching(pinching, rho)

        expected = np.zeros((3, 3))
        expected[np.ix_([0, 2], [0, 2])] = 1 / 3
        expected[1, 1] = 1 / 3
        assert_allclose(pinched.data, expected, atol=1e-12)

    def test_pinching_inequality(self):
        rng = np.random.default_rng(0xC0FFEE)
        for _ in range(5):
            sigma = random_density_matrix(rng, [("B", 4)])
            rho = random_density_matrix(rng, [("B", 4)])

            pinching = pinching_from_state(sigma)
            pinched = apply_pinching(pinching, rho)

            # E(ρ) commutes with σ and ρ ≤ v E(ρ)
            commutator = pinched.data @ sigma.data - sigma.data @ pinched.data
            self.assertLess(np.max(np.abs(commutator)), 1e-10)

            difference = pinching.count * pinched.data - rho.data
            self.assertGreater(gpwlab.min_eigenvalue(difference), -1e-10)

    def test_invalid(self):
        with self.assertRaises(SchemaError):
            PinchingMap([], [("B", 2)])

        with self.assertRaises(SchemaError):
            PinchingMap([np.diag([1.0, 0.0])], [("B", 2)])

        with self.assertRaises(SchemaError):
            PinchingMap([np.eye(2), np.diag([1.0, 0.0])], [("B", 2)])

        with self.assertRaises(LayoutMismatchError):
            PinchingMap([np.eye(3)], [("B", 2)])

        pinching = PinchingMap([np.eye(2)], [("B", 2)])
        with self.assertRaises(LayoutMismatchError):
            apply_pinching(pinching, DensityMatrix.maximally_mixed([("E", 2)]))


class TestConditionalPinching(unittest.TestCase):
    def test_apply(self):
        references = {
            (0,): DensityMatrix.from_diagonal([0.75, 0.25], [("S", 2)]),
            (1,): DensityMatrix.maximally_mixed([("S", 2)]),
        }
        pinching = build_conditional_pinching(references, "U")

        self.assertEqual(pinching.count, 2)
        self.assertEqual(pinching[0].count, 2)
        self.assertEqual(pinching[(1,)].count, 1)
        self.assertEqual(len(pinching), 2)

        state = binary_state(c=0.5).marginal(classical=["U"], quantum=["S"])
        pinched = pinching.apply(state)
        assert_allclose(
            pinched.conditional(0).data, state.conditional(0).data, atol=1e-12
        )

        other = binary_state().marginal(classical=["U"], quantum=["B"])
        with self.assertRaises(LayoutMismatchError):
            pinching.apply(other)


class TestChain(unittest.TestCase):
    def test_binary_family(self):
        chain = build_E_chain(binary_state(c=0.5), quantum="S")
        first, second, (v1, v2) = chain
        self.assertEqual((v1, v2), (1, 2))
        self.assertIs(first, chain.first)
        self.assertIs(second, chain.second)

        chain = build_E_chain(binary_state(p_v=0.25), quantum="B")
        self.assertEqual((chain.v1, chain.v2), (2, 2))

    def test_commutation(self):
        rng = np.random.default_rng(5)
        state = random_cq_state(rng, [("U", 2), ("V", 3)], [("B", 3)])

        self.assertTrue(commutation_check(state))
        norms = commutator_norms(state)
        self.assertEqual(len(norms), 3)
        self.assertLess(max(norms), 1e-8)

        self.assertTrue(commutation_check(binary_state(c=0.5), quantum="S"))

        # a single cluster turns every pinching into the identity
        self.assertFalse(commutation_check(state, cluster_tol=1.0))
        self.assertGreater(max(commutator_norms(state, cluster_tol=1.0)), 1e-6)


class TestConstants(unittest.TestCase):
    def test_binary_family(self):
        constants = pinching_constants(binary_state(c=0.5))
        self.assertEqual(
            constants.as_dict(), {"v1": 1, "v2": 1, "v3": 1, "v4": 2, "v5": 1}
        )

        constants = pinching_constants(binary_state(c=0.0))
        self.assertEqual(constants.v4, 1)

        constants = pinching_constants(binary_state(p_v=0.25, c=0.5))
        self.assertEqual((constants.v1, constants.v2), (2, 2))

    def test_missing_registers(self):
        constants = pinching_constants(noiseless_state())
        self.assertEqual((constants.v3, constants.v4, constants.v5), (1, 1, 1))
        self.assertEqual(constants.v1, 1)

        with self.assertRaises(ValueError):
            PinchingConstants(1, 1, 0, 1, 1)

    def test_iid_bounds(self):
        self.assertEqual(iid_component_bounds(3, 2, 2), (4.0, 256.0))
        self.assertEqual(iid_conditional_bound(3, 2, 2), 16.0)
        self.assertEqual(iid_component_bounds(1, 1, 1), (1.0, 1.0))

        _, v2 = iid_component_bounds(10**6, 64, 64)
        self.assertEqual(v2, np.inf)

        with self.assertRaises(ValueError):
            iid_component_bounds(0, 2, 2)


if __name__ == "__main__":
    unittest.main()
