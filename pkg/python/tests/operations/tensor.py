import unittest

import numpy as np
from numpy.testing import assert_allclose
from utils import random_density_matrix

import gpwlab
from gpwlab import DensityMatrix, RegisterLayout
from gpwlab.status import LayoutMismatchError


class TestTensor(unittest.TestCase):
    def test_tensor(self):
        first = DensityMatrix.from_diagonal([0.25, 0.75], [("A", 2)])
        second = DensityMatrix.maximally_mixed([("S", 3)])

        product = gpwlab.tensor(first, second)
        self.assertEqual(product.layout, RegisterLayout([("A", 2), ("S", 3)]))
        assert_allclose(np.diag(product.data).real, [1 / 12] * 3 + [0.25] * 3)

    def test_shared_registers(self):
        state = DensityMatrix.maximally_mixed([("A", 2)])
        with self.assertRaises(LayoutMismatchError):
            gpwlab.tensor(state, state)


class TestReorderRegisters(unittest.TestCase):
    def test_reorder(self):
        rng = np.random.default_rng(17)
        first = random_density_matrix(rng, [("A", 2)])
        second = random_density_matrix(rng, [("S", 3)])

        matrix, layout = gpwlab.reorder_registers(
            first.tensor(second).data, RegisterLayout([("A", 2), ("S", 3)]), ["S", "A"]
        )
        self.assertEqual(layout, RegisterLayout([("S", 3), ("A", 2)]))
        assert_allclose(matrix, second.tensor(first).data, atol=1e-14)

    def test_not_a_permutation(self):
        layout = RegisterLayout([("A", 2), ("S", 3)])
        with self.assertRaises(LayoutMismatchError):
            gpwlab.reorder_registers(np.eye(6), layout, ["A"])


if __name__ == "__main__":
    unittest.main()
