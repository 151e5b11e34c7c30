import logging
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from ..cq import CQState, SideInfoSetup
from ..exponents import EXPURGATION_BETA
from .bounds import BOUND_ALPHAS, codebook_bounds, evaluation_state
from .codebook import WORD_BUDGET, sample_codebook
from .decoding import check_decoding_budget, decode_codebook, decoding_rows
from .results import TrialResult, ordered_map
from .secrecy import leakage


LOGGER = logging.getLogger(__name__)


class ExpurgationReport:
    """
    Fraction of codebooks whose error and leakage are both below ``1 + β``
    times their average, compared with the lower bound ``(β - 1)/(β + 1)``
    given by Markov's inequality.
    """

    def __init__(self, errors: np.ndarray, secrecy: np.ndarray, beta: float):
        self.beta: float = beta
        self.error_threshold: float = (1.0 + beta) * float(np.mean(errors))
        self.secrecy_threshold: float = (1.0 + beta) * float(np.mean(secrecy))

        self.good: np.ndarray = (errors <= self.error_threshold) & (
            secrecy <= self.secrecy_threshold
        )
        """which codebooks satisfy both conditions"""

    @property
    def fraction(self) -> float:
        return float(np.mean(self.good))

    @property
    def threshold(self) -> float:
        """``(β - 1)/(β + 1)``, i.e. 1/21 for ``β = 1.1``"""
        return (self.beta - 1.0) / (self.beta + 1.0)

    @property
    def passed(self) -> bool:
        return self.fraction >= self.threshold

    def as_dict(self) -> Dict:
        return {
            "beta": self.beta,
            "codebooks": int(len(self.good)),
            "fraction": self.fraction,
            "threshold": self.threshold,
            "error_threshold": self.error_threshold,
            "secrecy_threshold": self.secrecy_threshold,
            "passed": self.passed,
        }


def expurgation_check(
    error_samples: Sequence[float],
    secrecy_samples: Sequence[float],
    beta: float = EXPURGATION_BETA,
) -> ExpurgationReport:
    """
    Count the codebooks which have both an error below ``(1 + β)`` times the
    average error and a leakage below ``(1 + β)`` times the average leakage.

    :param error_samples: error of every codebook
    :param secrecy_samples: leakage of the same codebooks, in the same order
    :param beta: expurgation parameter, larger than one
    """
    errors = np.asarray(error_samples, dtype=np.float64)
    secrecy = np.asarray(secrecy_samples, dtype=np.float64)
    if errors.shape != secrecy.shape or errors.ndim != 1 or len(errors) == 0:
        raise ValueError("error and secrecy samples should be paired")
    if beta <= 1.0:
        raise ValueError(f"beta must be larger than 1, got {beta}")
    return ExpurgationReport(errors, secrecy, beta)


class BatchResult:
    """Decoding, leakage and expurgation results on the same codebooks"""

    def __init__(
        self, decode: TrialResult, secrecy: TrialResult, expurgation: ExpurgationReport
    ):
        self.decode: TrialResult = decode
        self.secrecy: TrialResult = secrecy
        self.expurgation: ExpurgationReport = expurgation

    @property
    def passed(self) -> bool:
        return self.decode.passed and self.secrecy.passed and self.expurgation.passed

    def as_dict(self) -> Dict:
        return {
            "decode": self.decode.as_dict(),
            "secrecy": self.secrecy.as_dict(),
            "expurgation": self.expurgation.as_dict(),
            "passed": self.passed,
        }


def codebook_batch(
    setup: Union[SideInfoSetup, CQState],
    rates: Tuple[int, int, int],
    trials: int,
    seed: int,
    threads: int = 1,
    alphas: Sequence[float] = BOUND_ALPHAS,
    beta: float = EXPURGATION_BETA,
    budget: int = WORD_BUDGET,
) -> BatchResult:
    """
    Sample ``trials`` codebooks, compute the decoding error and the leakage
    of each of them, and check the expurgation argument on the pairs.

    :param setup: the coding setup, or its state over ``(U, V; B, E, S)``
    :param rates: integer rates ``(R, R1, r)``
    :param trials: number of sampled codebooks
    :param seed: seed of the experiment
    :param threads: number of worker threads
    :param alphas: values of ``α`` where the bounds are evaluated
    :param beta: expurgation parameter
    """
    if trials < 1:
        raise ValueError(f"the number of trials must be positive, got {trials}")

    state = evaluation_state(setup)
    check_decoding_budget(state, rates)
    p_uv = state.marginal(classical=["U", "V"]).pmf

    def trial(index):
        codebook = sample_codebook(p_uv, rates, seed, index, budget)
        return decode_codebook(state, codebook), leakage(state, codebook)

    results = ordered_map(trial, range(trials), threads)
    decoding = [result for result, _ in results]
    leaks = [value for _, value in results]
    bounds = codebook_bounds(state, rates, alphas)

    decode = TrialResult(
        "decode",
        [result.error for result in decoding],
        bounds.error,
        rows=decoding_rows(decoding),
        checks={"povm_valid": all(result.povm_valid for result in decoding)},
        extra={
            **bounds.as_dict(),
            "first_message_mean": float(
                np.mean([result.message_errors[0] for result in decoding])
            ),
        },
    )
    secrecy = TrialResult(
        "secrecy",
        leaks,
        bounds.secrecy,
        rows=[{"trial": i, "value": value} for i, value in enumerate(leaks)],
        extra=bounds.as_dict(),
    )
    expurgation = expurgation_check(decode.values, secrecy.values, beta)

    batch = BatchResult(decode, secrecy, expurgation)
    LOGGER.info(
        "codebook batch: %s, %s, expurgation fraction %.4f",
        decode,
        secrecy,
        expurgation.fraction,
    )
    return batch
