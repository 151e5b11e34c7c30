import unittest

import numpy as np

import gpwlab
from gpwlab import DensityMatrix
from gpwlab.status import LayoutMismatchError


class TestAllclose(unittest.TestCase):
    def test_allclose(self):
        first = DensityMatrix.from_diagonal([0.5, 0.5], [("B", 2)])
        second = DensityMatrix.from_diagonal([0.5 + 1e-14, 0.5 - 1e-14], [("B", 2)])
        third = DensityMatrix.from_diagonal([0.6, 0.4], [("B", 2)])

        self.assertTrue(gpwlab.allclose(first, first))
        self.assertTrue(gpwlab.allclose(first, second))
        self.assertFalse(gpwlab.allclose(first, third))
        self.assertTrue(gpwlab.allclose(first, third, atol=0.2))

    def test_allclose_raise(self):
        first = DensityMatrix.from_diagonal([0.5, 0.5], [("B", 2)])
        second = DensityMatrix.from_diagonal([0.75, 0.25], [("B", 2)])

        with self.assertRaises(ValueError) as cm:
            gpwlab.allclose_raise(first, second)

        self.assertEqual(
            str(cm.exception),
            "states on RegisterLayout(B: 2) are different: largest difference "
            "between entries is 2.500e-01",
        )

    def test_different_layouts(self):
        first = DensityMatrix.maximally_mixed([("B", 2)])
        second = DensityMatrix.maximally_mixed([("E", 2)])

        self.assertFalse(gpwlab.allclose(first, second))
        with self.assertRaises(LayoutMismatchError):
            gpwlab.allclose_raise(first, second)

        with self.assertRaises(TypeError):
            gpwlab.allclose(first, np.eye(2) / 2)


if __name__ == "__main__":
    unittest.main()
