import unittest

import numpy as np

from gpwlab.families import (
    BinaryWiretapFamily,
    GridFamily,
    StateFamily,
    binary_symmetric_channel,
    uniform_grid,
)
from gpwlab.status import DOMAIN_ERROR, EmptyFeasibleSetError


class TestHelpers(unittest.TestCase):
    def test_binary_symmetric_channel(self):
        channel = binary_symmetric_channel(0.1)
        np.testing.assert_allclose(channel, [[0.9, 0.1], [0.1, 0.9]])
        np.testing.assert_allclose(np.sum(channel, axis=0), [1.0, 1.0])

        with self.assertRaises(ValueError):
            binary_symmetric_channel(1.5)

    def test_uniform_grid(self):
        np.testing.assert_allclose(uniform_grid(0.25), [0, 0.25, 0.5, 0.75, 1.0])

        grid = uniform_grid(0.02, stop=0.98)
        self.assertEqual(len(grid), 50)
        self.assertEqual(grid[-1], 0.98)


class TestBinaryFamily(unittest.TestCase):
    def test_grid(self):
        family = BinaryWiretapFamily(0.1, 0.3)
        self.assertEqual(len(family), 51 * 50)
        self.assertEqual(family.grid[0], (0.0, 0.0))
        self.assertEqual(family.grid[-1], (1.0, 0.98))

        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.0, 0.5])
        self.assertEqual(list(family), [(0.5, 0.0), (0.5, 0.5)])

    def test_invalid_parameters(self):
        with self.assertRaises(ValueError):
            BinaryWiretapFamily(0.1, 0.3, p_v=[1.5])

        with self.assertRaises(ValueError):
            BinaryWiretapFamily(0.1, 0.3, c=[-0.1])

    def test_encoder_state(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.25], c=[0.5])
        state = family.state((0.25, 0.5))

        self.assertEqual(state.classical_layout.names, ("U", "V"))
        self.assertEqual(state.quantum_layout.names, ("A", "S"))
        np.testing.assert_allclose(state.pmf, [[0.375, 0.125], [0.375, 0.125]])

        # A is a copy of V, S only depends on U
        expected = np.diag([0, 0, 0.75, 0.25])
        np.testing.assert_allclose(state.conditional((0, 1)).data, expected)
        expected = np.diag([0.25, 0.75, 0, 0])
        np.testing.assert_allclose(state.conditional((1, 0)).data, expected)

        # the channel state marginal does not depend on the parameters
        np.testing.assert_allclose(state.average(["S"]).data, np.eye(2) / 2)

    def test_evaluation_state(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.5])
        state = family.evaluation_state((0.5, 0.5))

        self.assertEqual(state.quantum_layout.names, ("B", "E", "S"))

        to_b = state.marginal(classical=["V"], quantum=["B"])
        np.testing.assert_allclose(to_b.conditional((0,)).data, np.diag([0.9, 0.1]))
        np.testing.assert_allclose(to_b.conditional((1,)).data, np.diag([0.1, 0.9]))

        to_e = state.marginal(classical=["V"], quantum=["E"])
        np.testing.assert_allclose(to_e.conditional((1,)).data, np.diag([0.3, 0.7]))

        side = state.marginal(classical=["U"], quantum=["S"])
        np.testing.assert_allclose(
            side.conditional((1,)).data, np.diag([0.25, 0.75])
        )

    def test_setup(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.0])
        setup = family.setup((0.5, 0.0))

        self.assertIs(setup.channel, family.channel)
        self.assertIsNone(setup.phi)
        self.assertEqual(setup.side, "S")


class TestGenericFamilies(unittest.TestCase):
    def test_grid_family(self):
        binary = BinaryWiretapFamily(0.1, 0.3)
        family = GridFamily(
            lambda p: binary.state((p[0], 0.0)), binary.channel, [[0.25], [0.75]]
        )

        self.assertEqual(family.grid, [(0.25,), (0.75,)])
        state = family.state([0.75])
        np.testing.assert_allclose(state.pmf, [[0.125, 0.375], [0.125, 0.375]])

        family.check_not_empty()

    def test_empty(self):
        binary = BinaryWiretapFamily(0.1, 0.3)
        family = GridFamily(binary.state, binary.channel, [])

        with self.assertRaises(EmptyFeasibleSetError) as cm:
            family.check_not_empty()
        self.assertEqual(cm.exception.status, DOMAIN_ERROR)
        self.assertIn("GridFamily", str(cm.exception))

    def test_abstract_state(self):
        family = StateFamily(BinaryWiretapFamily(0.1, 0.3).channel, [(0.0,)])
        with self.assertRaises(NotImplementedError):
            family.state((0.0,))


if __name__ == "__main__":
    unittest.main()
