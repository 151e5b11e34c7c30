import unittest

import numpy as np
from utils import binary_setup, binary_state, noiseless_state

from gpwlab.simulation import (
    Codebook,
    leakage,
    sample_codebook,
    secrecy_batch,
    secrecy_experiment,
)


class TestLeakage(unittest.TestCase):
    def test_useless_eavesdropper(self):
        state = binary_state(q_e=0.5)
        p_uv = state.marginal(classical=["U", "V"]).pmf
        codebook = sample_codebook(p_uv, (2, 1, 1), seed=6)

        self.assertAlmostEqual(leakage(state, codebook), 0.0, places=6)

    def test_perfect_eavesdropper(self):
        state = binary_state(q_e=0.0)
        v_words = np.array([[[0]], [[1]]], dtype=np.int64)
        codebook = Codebook(np.zeros(1, dtype=np.int64), v_words, 0, (1, 0, 0))

        # F(|m⟩⟨m|, I/2)^2 = 1/2 for both messages
        self.assertAlmostEqual(leakage(state, codebook), 0.5, places=6)

    def test_single_message(self):
        state = binary_state()
        p_uv = state.marginal(classical=["U", "V"]).pmf
        codebook = sample_codebook(p_uv, (0, 2, 1), seed=6)

        self.assertAlmostEqual(leakage(state, codebook), 0.0, places=6)

    def test_no_eavesdropper(self):
        v_words = np.arange(4, dtype=np.int64).reshape(4, 1, 1)
        codebook = Codebook(np.zeros(1, dtype=np.int64), v_words, 0, (2, 0, 0))
        self.assertEqual(leakage(noiseless_state(), codebook), 0.0)


class TestSecrecyExperiments(unittest.TestCase):
    def test_experiment(self):
        setup = binary_setup()
        p_uv = setup.state.marginal(classical=["U", "V"]).pmf
        codebook = sample_codebook(p_uv, (1, 1, 1), seed=8, trial=3)

        result = secrecy_experiment(setup, codebook)
        self.assertEqual(result.name, "secrecy")
        self.assertEqual(result.trials, 1)
        self.assertEqual(result.rows, [{"trial": 3, "value": result.values[0]}])
        self.assertIn("secrecy_alpha", result.extra)

    def test_batch(self):
        setup = binary_setup()
        result = secrecy_batch(setup, (1, 1, 1), trials=6, seed=8, threads=2)

        state = setup.evaluation_state()
        p_uv = state.marginal(classical=["U", "V"]).pmf
        for trial in (0, 5):
            codebook = sample_codebook(p_uv, (1, 1, 1), seed=8, trial=trial)
            self.assertAlmostEqual(result.values[trial], leakage(state, codebook))

        self.assertTrue(np.all(result.values >= 0.0))
        self.assertTrue(np.all(result.values <= 1.0))
        self.assertTrue(result.passed)

        with self.assertRaises(ValueError):
            secrecy_batch(setup, (1, 1, 1), trials=0, seed=8)


if __name__ == "__main__":
    unittest.main()
