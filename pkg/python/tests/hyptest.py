import unittest

import numpy as np
from numpy.testing import assert_allclose
from utils import binary_state, random_cq_state, random_density_matrix

from gpwlab import DensityMatrix
from gpwlab.divergence import sandwiched_renyi
from gpwlab.hyptest import (
    build_tests,
    error_terms,
    hat_renyi,
    lemma5_check,
    petz_renyi,
    single_system_comparison,
)


class TestBuildTests(unittest.TestCase):
    def test_binary_family(self):
        tests = build_tests(binary_state(), 1.5, 1.2)

        self.assertEqual(len(tests.keys), 4)
        self.assertEqual(tests.pi.shape, (8, 8))

        # ρ_{B|v=0} = diag(0.9, 0.1) against 1.5 ρ_B = diag(0.75, 0.75)
        assert_allclose(tests.block((0, 0), "pi1"), np.diag([1.0, 0.0]), atol=1e-12)
        assert_allclose(tests.block((1, 1), "pi1"), np.diag([0.0, 1.0]), atol=1e-12)
        assert_allclose(tests.block((1, 1), "pi2"), np.diag([0.0, 1.0]), atol=1e-12)

        with self.assertRaises(ValueError):
            tests.block((0, 0), "other")

    def test_projectors(self):
        rng = np.random.default_rng(21)
        state = random_cq_state(rng, [("U", 2), ("V", 2)], [("B", 3)])
        tests = build_tests(state, 2.0, 1.5)

        for pi in (tests.pi1, tests.pi2):
            assert_allclose(pi @ pi, pi, atol=1e-10)
            assert_allclose(pi, pi.conj().T, atol=1e-10)

        assert_allclose(tests.pi, tests.pi1 @ tests.pi2, atol=1e-10)

        # Π1 and Π2 commute, so their product is a projector
        assert_allclose(tests.pi @ tests.pi, tests.pi, atol=1e-10)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            build_tests(binary_state(), 0.0, 1.0)


class TestLemma5(unittest.TestCase):
    def test_binary_family(self):
        state = binary_state(p_v=0.25, c=0.5)
        report = lemma5_check(state, 2.0**1.5, 2.0, [0.25, 0.5, 0.75])

        self.assertEqual(report.alphas, [0.25, 0.5, 0.75])
        self.assertEqual(report.v2, 2)
        self.assertTrue(report.all_hold())
        self.assertEqual(report.slacks().shape, (3, 4))

        for trace in report.traces:
            self.assertGreaterEqual(trace, -1e-12)
            self.assertLessEqual(trace, 1 + 1e-12)

        rows = report.as_rows()
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[0]["alpha"], 0.25)
        self.assertIn("bound4", rows[0])

    def test_exact_traces(self):
        # with M1 below every likelihood ratio, Π1 is the identity
        report = lemma5_check(binary_state(), 0.1, 0.1, [0.5])
        self.assertAlmostEqual(report.traces[0], 1.0, places=12)
        self.assertAlmostEqual(report.traces[2], 0.0, places=12)

        # and with a large threshold, Π1 vanishes
        report = lemma5_check(binary_state(), 100.0, 100.0, [0.5])
        self.assertAlmostEqual(report.traces[0], 0.0, places=12)
        self.assertAlmostEqual(report.traces[3], 1.0, places=12)

    def test_random_states(self):
        rng = np.random.default_rng(0xD1CE)
        for _ in range(3):
            state = random_cq_state(rng, [("U", 2), ("V", 2)], [("B", 2)])
            report = lemma5_check(state, 2.0, 1.5, [0.25, 0.5])
            self.assertTrue(report.all_hold())

    def test_error_terms(self):
        state = binary_state()
        terms = error_terms(state, 0.5)

        # without U, the divergence is the Rényi information of the BSC
        expected = -2 * np.log2(2**-0.5 * (np.sqrt(0.9) + np.sqrt(0.1)))
        self.assertAlmostEqual(terms.divergence, expected, places=10)
        self.assertAlmostEqual(terms.information_used, expected, places=8)
        self.assertLessEqual(terms.information_used, terms.markov + 1e-12)

        with self.assertRaises(ValueError):
            error_terms(state, 1.0)


class TestSingleSystem(unittest.TestCase):
    def test_commuting(self):
        rho = DensityMatrix.from_diagonal([0.7, 0.2, 0.1], [("B", 3)])
        sigma = DensityMatrix.from_diagonal([0.2, 0.3, 0.5], [("B", 3)])

        self.assertAlmostEqual(
            petz_renyi(rho, sigma, 0.5), sandwiched_renyi(rho, sigma, 0.5)
        )
        self.assertAlmostEqual(hat_renyi(rho, sigma, 0.5), petz_renyi(rho, sigma, 0.5))

        report = single_system_comparison(rho, sigma, 1.0, 0.5)
        assert_allclose(report.pinched_errors, report.optimal_errors, atol=1e-12)
        assert_allclose(report.pinched_errors, (0.3, 0.2), atol=1e-12)
        self.assertTrue(report.petz_dominates)
        self.assertEqual(report.v, 3)

    def test_random(self):
        rng = np.random.default_rng(99)
        for alpha in (0.25, 0.5):
            rho = random_density_matrix(rng, [("B", 3)])
            sigma = random_density_matrix(rng, [("B", 3)])
            report = single_system_comparison(rho, sigma, 1.5, alpha)

            self.assertTrue(report.petz_dominates)
            for error, bound in zip(report.pinched_errors, report.pinched_bounds):
                self.assertLessEqual(error, bound + 1e-10)

            # the plain test is the optimal Neyman-Pearson test
            optimal = report.optimal_errors[0] + 1.5 * report.optimal_errors[1]
            pinched = report.pinched_errors[0] + 1.5 * report.pinched_errors[1]
            self.assertLessEqual(optimal, pinched + 1e-10)

            data = report.as_dict()
            self.assertEqual(len(data["warnings"]), 1)

    def test_invalid_order(self):
        rho = DensityMatrix.maximally_mixed([("B", 2)])
        with self.assertRaises(ValueError):
            petz_renyi(rho, rho, 1.5)

        with self.assertRaises(ValueError):
            single_system_comparison(rho, rho, 1.0, 0.0)


if __name__ == "__main__":
    unittest.main()
