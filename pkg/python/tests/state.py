import unittest

import numpy as np
from numpy.testing import assert_allclose

from gpwlab import DensityMatrix, RegisterLayout
from gpwlab.state import InvalidStateError
from gpwlab.status import INPUT_ERROR, LayoutMismatchError, NotHermitianError


try:
    import torch

    HAS_TORCH = True
except ImportError:
    HAS_TORCH = False


class TestDensityMatrix(unittest.TestCase):
    def test_constructors(self):
        state = DensityMatrix.maximally_mixed([("A", 2), ("S", 2)])
        self.assertEqual(state.dim, 4)
        self.assertTrue(state.normalized)
        self.assertAlmostEqual(state.trace, 1.0)
        self.assertEqual(state.layout, RegisterLayout([("A", 2), ("S", 2)]))

        pure = DensityMatrix.from_pure([1.0, 1j], [("B", 2)])
        assert_allclose(pure.data, [[0.5, -0.5j], [0.5j, 0.5]])

        layout = RegisterLayout.single("B", 2)
        diagonal = DensityMatrix.from_diagonal([0.2, 0.8], layout)
        assert_allclose(diagonal.data, np.diag([0.2, 0.8]))

    def test_immutable(self):
        state = DensityMatrix.maximally_mixed([("B", 2)])
        with self.assertRaises(ValueError):
            state.data[0, 0] = 1.0

    def test_eig_is_cached(self):
        state = DensityMatrix.from_diagonal([0.2, 0.8], [("B", 2)])
        eig = state.eig()
        self.assertIs(state.eig(), eig)
        assert_allclose(eig.eigenvalues, [0.2, 0.8], atol=1e-14)

    def test_sub_normalized(self):
        data = np.diag([0.25, 0.25])
        with self.assertRaises(InvalidStateError):
            DensityMatrix(data, [("B", 2)])

        state = DensityMatrix(data, [("B", 2)], normalized=False)
        self.assertFalse(state.normalized)
        self.assertAlmostEqual(state.trace, 0.5)
        self.assertEqual(
            repr(state), "DensityMatrix (sub-normalized) on RegisterLayout(B: 2)"
        )

        with self.assertRaises(InvalidStateError):
            DensityMatrix(np.diag([1.0, 0.5]), [("B", 2)], normalized=False)

    def test_invalid(self):
        with self.assertRaises(NotHermitianError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]), [("B", 2)])

        with self.assertRaises(InvalidStateError) as cm:
            DensityMatrix(np.diag([1.5, -0.5]), [("B", 2)])
        self.assertEqual(cm.exception.status, INPUT_ERROR)
        self.assertIn("not positive semi-definite", cm.exception.message)

        with self.assertRaises(LayoutMismatchError):
            DensityMatrix(np.eye(3) / 3, [("B", 2)])

        with self.assertRaises(InvalidStateError):
            DensityMatrix.from_pure([0.0, 0.0], [("B", 2)])

    @unittest.skipIf(not HAS_TORCH, "torch is not installed")
    def test_torch(self):
        data = torch.eye(2, dtype=torch.complex128) / 2
        state = DensityMatrix(data, [("B", 2)])
        self.assertIsInstance(state.data, np.ndarray)
        assert_allclose(state.data, np.eye(2) / 2)


if __name__ == "__main__":
    unittest.main()
