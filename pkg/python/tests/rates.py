import unittest

import numpy as np
from utils import binary_entropy, binary_state, noiseless_state

from gpwlab import CQState, DensityMatrix, QuantumChannel
from gpwlab.divergence import von_neumann_quantities
from gpwlab.families import BinaryWiretapFamily, GridFamily
from gpwlab.rates import (
    RateAllocation,
    allocate_rates,
    corollary_reductions,
    erasure_check,
    lemma_LA_equivalence,
    rate_point,
    trivialize,
)
from gpwlab.status import DOMAIN_ERROR, EmptyFeasibleSetError, InfeasibleRatesError


H_B = binary_entropy(0.1)
H_E = binary_entropy(0.3)
I_US = 1 - binary_entropy(0.75)

Z = np.diag([1.0, -1.0])


class TestRatePoint(unittest.TestCase):
    def test_without_correlation(self):
        point = rate_point(binary_state(c=0.0))

        self.assertTrue(point.s2_member)
        self.assertAlmostEqual(point.rate_a, H_E - H_B, places=12)
        self.assertAlmostEqual(point.rate_alt, H_E - H_B, places=12)
        self.assertAlmostEqual(point.components[1], 1 - H_B, places=12)

    def test_correlated_channel_state(self):
        point = rate_point(binary_state(c=0.5))

        self.assertFalse(point.s2_member)
        self.assertAlmostEqual(point.rate_a, H_E - H_B - I_US, places=12)
        # I[UV;B] - I[UV;S] is the smaller of the two terms of R_alt here
        self.assertAlmostEqual(point.rate_alt, 1 - H_B - I_US, places=12)
        self.assertAlmostEqual(point.components[0], H_E - H_B, places=12)
        self.assertAlmostEqual(point.components[1], 1 - H_B - I_US, places=12)

        data = point.as_dict()
        self.assertEqual(data["s2_member"], False)
        self.assertEqual(len(data["components"]), 3)
        self.assertAlmostEqual(data["quantities"]["u_s"], I_US, places=12)

    def test_noiseless(self):
        point = rate_point(noiseless_state())
        self.assertAlmostEqual(point.rate_a, 2.0, places=12)
        self.assertTrue(point.s2_member)


class TestAllocation(unittest.TestCase):
    def test_allocate(self):
        table = von_neumann_quantities(binary_state(c=0.5))
        allocation = allocate_rates(table, 0.01, 0.01, 0.01)

        self.assertAlmostEqual(allocation.R1, 1 - H_E + 0.01, places=12)
        self.assertAlmostEqual(allocation.r, I_US + 0.01, places=12)
        self.assertAlmostEqual(allocation.R, H_E - H_B - I_US - 0.03, places=12)
        self.assertTrue(allocation.is_admissible(table))

        slacks = allocation.constraint_slacks(table)
        self.assertEqual(set(slacks), set(RateAllocation.CONSTRAINTS))
        self.assertAlmostEqual(slacks["total_rate"], 0.01, places=12)
        self.assertAlmostEqual(slacks["secrecy_scrambling"], 0.01, places=12)

        scaled = allocation.scaled(3)
        self.assertAlmostEqual(scaled.R, 3 * allocation.R, places=12)
        self.assertEqual(scaled.slack, allocation.slack)

    def test_infeasible(self):
        table = von_neumann_quantities(binary_state(q_b=0.2, q_e=0.2))
        with self.assertRaises(InfeasibleRatesError) as cm:
            allocate_rates(table, 0.01, 0.01, 0.01)
        self.assertEqual(cm.exception.status, DOMAIN_ERROR)

        with self.assertRaises(ValueError):
            allocate_rates(table, 0.0, 0.01, 0.01)

        with self.assertRaises(ValueError):
            RateAllocation(-1.0, 0.0, 0.0)

    def test_not_admissible(self):
        table = von_neumann_quantities(binary_state(c=0.5))
        self.assertFalse(RateAllocation(0.1, 0.0, 1.0).is_admissible(table))


class TestErasure(unittest.TestCase):
    def test_check(self):
        check = erasure_check(binary_state(c=0.5))

        self.assertAlmostEqual(check.epsilon, 1 - I_US / (1 - H_B), places=9)
        self.assertAlmostEqual(check.rate_a, H_E - H_B - I_US, places=12)
        self.assertTrue(check.passed())
        self.assertAlmostEqual(check.boundary_residual, 0.0, places=8)
        self.assertAlmostEqual(check.total_margin, 1 - H_E, places=8)
        self.assertEqual(check.as_dict()["passed"], True)


class TestLemmaLA(unittest.TestCase):
    def test_equal_maxima(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.25, 0.5], c=[0.0, 0.5])
        report = lemma_LA_equivalence(family)

        self.assertEqual(len(report.points), 4)
        self.assertEqual(report.argmax, (0.5, 0.0))
        self.assertAlmostEqual(report.max_rate_a, H_E - H_B, places=12)
        self.assertAlmostEqual(report.max_rate_alt, H_E - H_B, places=12)
        self.assertAlmostEqual(report.gap, 0.0, places=12)
        self.assertIsNone(report.erasure)

        members = [p.s2_member for _, p in report.points]
        self.assertEqual(members, [True, False, True, False])

    def test_threads(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.25, 0.5], c=[0.0, 0.5])
        single = lemma_LA_equivalence(family, threads=1)
        multiple = lemma_LA_equivalence(family, threads=3)

        for (first, a), (second, b) in zip(single.points, multiple.points):
            self.assertEqual(first, second)
            self.assertEqual(a.rate_a, b.rate_a)

    def test_maximizer_outside(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.5])
        report = lemma_LA_equivalence(family)

        self.assertIsNone(report.max_rate_alt)
        self.assertIsNone(report.gap)
        self.assertIsNotNone(report.erasure)
        self.assertTrue(report.erasure.passed())
        self.assertIsNone(report.as_dict()["gap"])

    def test_empty(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.0])
        with self.assertRaises(EmptyFeasibleSetError):
            lemma_LA_equivalence(family, grid=[])


class TestCorollaries(unittest.TestCase):
    def test_trivialize(self):
        state = trivialize(binary_state(), ["S", "E"], merge_classical=True)
        self.assertEqual(state.classical_layout.names, ("V",))
        self.assertEqual(state.quantum_layout.names, ("B",))

    def test_reductions(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.0])
        rates = corollary_reductions(family.channel, family)

        self.assertAlmostEqual(rates.holevo, 1 - H_B, places=10)
        self.assertAlmostEqual(rates.wiretap, H_E - H_B, places=10)
        self.assertAlmostEqual(rates.gel_fand_pinsker, 1 - H_B, places=10)
        self.assertEqual(rates.as_dict()["k"], 1)

    def test_two_uses(self):
        family = BinaryWiretapFamily(0.1, 0.3, p_v=[0.5], c=[0.0])
        rates = corollary_reductions(family.channel, family, k=2)
        self.assertAlmostEqual(rates.wiretap, H_E - H_B, places=9)

        with self.assertRaises(ValueError):
            corollary_reductions(family.channel, family, k=4)

    def test_noiseless_bit(self):
        family = BinaryWiretapFamily(0.0, 0.5, p_v=[0.25, 0.5], c=[0.0])
        rates = corollary_reductions(family.channel, family)
        self.assertAlmostEqual(rates.holevo, 1.0, places=12)
        self.assertAlmostEqual(rates.wiretap, 1.0, places=12)

    def test_degraded_eavesdropper(self):
        # E receives exactly what B receives
        family = BinaryWiretapFamily(0.2, 0.2, p_v=[0.25, 0.5], c=[0.0, 0.5])
        rates = corollary_reductions(family.channel, family)
        self.assertAlmostEqual(rates.wiretap, 0.0, delta=1e-10)
        self.assertAlmostEqual(rates.holevo, 1 - binary_entropy(0.2), places=10)

    def test_dephasing_channel(self):
        p = 0.2
        inputs = [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / np.sqrt(2)]
        side = np.diag([1.0, 0.0])

        def builder(parameters):
            (weight,) = parameters
            pmf = np.array([[1 - weight, weight], [1 - weight, weight]]) / 2
            conditionals = {
                (u, v): DensityMatrix(
                    np.kron(np.outer(psi, psi.conj()), side), [("A", 2), ("S", 2)]
                )
                for u in range(2)
                for v, psi in enumerate(inputs)
            }
            return CQState(
                [("U", 2), ("V", 2)], pmf, conditionals, [("A", 2), ("S", 2)]
            )

        # phase flip on A, S is forwarded to E untouched
        kraus = [np.sqrt(1 - p) * np.eye(4), np.sqrt(p) * np.kron(Z, np.eye(2))]
        channel = QuantumChannel(kraus, [("A", 2), ("S", 2)], [("B", 2), ("E", 2)])
        family = GridFamily(builder, channel, [(0.5,)])

        # χ = S(ρ_B) - Σ_v p(v) S(ρ_B|v), the output for |0⟩ being pure
        average = 0.5 + np.sqrt(1 + (1 - 2 * p) ** 2) / 4
        expected = binary_entropy(average) - binary_entropy(p) / 2

        rates = corollary_reductions(channel, family)
        self.assertAlmostEqual(rates.holevo, expected, delta=1e-9)
        self.assertAlmostEqual(rates.wiretap, expected, delta=1e-9)
        self.assertAlmostEqual(rates.gel_fand_pinsker, expected, delta=1e-9)


if __name__ == "__main__":
    unittest.main()
