import unittest

import numpy as np
from utils import binary_setup

from gpwlab.simulation import codebook_batch, expurgation_check


class TestExpurgationCheck(unittest.TestCase):
    def test_fraction(self):
        report = expurgation_check([0.1, 0.2, 0.3, 10.0], [1.0, 1.0, 1.0, 1.0])

        self.assertAlmostEqual(report.error_threshold, 2.1 * 2.65)
        self.assertAlmostEqual(report.secrecy_threshold, 2.1)
        np.testing.assert_array_equal(report.good, [True, True, True, False])
        self.assertEqual(report.fraction, 0.75)
        self.assertAlmostEqual(report.threshold, 1 / 21)
        self.assertTrue(report.passed)

        data = report.as_dict()
        self.assertEqual(data["codebooks"], 4)
        self.assertEqual(data["beta"], 1.1)

    def test_both_conditions(self):
        report = expurgation_check([1.0, 0.0, 0.0], [0.0, 0.0, 1.0], beta=1.5)
        np.testing.assert_array_equal(report.good, [False, True, False])
        self.assertAlmostEqual(report.threshold, 0.2)

    def test_zero_samples(self):
        report = expurgation_check([0.0, 0.0], [0.0, 0.0])
        self.assertEqual(report.fraction, 1.0)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            expurgation_check([0.1, 0.2], [0.1])

        with self.assertRaises(ValueError):
            expurgation_check([], [])

        with self.assertRaises(ValueError):
            expurgation_check([0.1], [0.1], beta=1.0)


class TestCodebookBatch(unittest.TestCase):
    def test_batch(self):
        setup = binary_setup()
        batch = codebook_batch(setup, (1, 1, 1), trials=4, seed=21)

        self.assertEqual(batch.decode.trials, 4)
        self.assertEqual(batch.secrecy.trials, 4)
        self.assertEqual(len(batch.expurgation.good), 4)
        self.assertTrue(batch.decode.checks["povm_valid"])
        self.assertIn("first_message_mean", batch.decode.extra)
        self.assertEqual(len(batch.decode.rows), 4)
        self.assertEqual(batch.decode.rows[0]["trial"], 0)
        self.assertTrue(batch.passed)

        data = batch.as_dict()
        self.assertEqual(set(data), {"decode", "secrecy", "expurgation", "passed"})

    def test_threads(self):
        setup = binary_setup(c=0.5)
        single = codebook_batch(setup, (1, 0, 1), trials=4, seed=5)
        threaded = codebook_batch(setup, (1, 0, 1), trials=4, seed=5, threads=2)

        np.testing.assert_array_equal(single.decode.values, threaded.decode.values)
        np.testing.assert_array_equal(single.secrecy.values, threaded.secrecy.values)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            codebook_batch(binary_setup(), (1, 1, 1), trials=0, seed=0)


if __name__ == "__main__":
    unittest.main()
