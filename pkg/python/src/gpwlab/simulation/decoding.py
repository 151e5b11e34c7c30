"""
Exact decoding error of a sampled codebook under the square-root measurement
built from the hypothesis tests of :py:mod:`gpwlab.hyptest`.

The encoder is not simulated: every message ``m`` is evaluated against the
averaged output state ``Θ_B(m) = 2^{-(r + R1)} Σ_{i,j} ρ_{B|u(i), v(m,i,j)}``,
and the purified distance between the induced channel state and ``ρ_S`` is
added as a correction:

.. math::

    ε(m) = 2 \\text{Tr}[(I - Σ_{i,j} β(m, i, j)) Θ_B(m)]
        + 2 P(τ_{S|m}, ρ_S)^2.
"""
import logging
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..cq import CQState, SideInfoSetup
from ..hyptest import TestPair, build_tests
from ..operations import mat_pow, max_eigenvalue, min_eigenvalue, purified_distance
from ..status import DimensionBudgetError
from .bounds import BOUND_ALPHAS, codebook_bounds, evaluation_state
from .codebook import DIMENSION_BUDGET, Codebook, codebook_average_state
from .results import TrialResult


LOGGER = logging.getLogger(__name__)

POVM_BUDGET = 2**12
"""largest number of POVM elements ``2^{R + R1 + r}``"""

POVM_ATOL = 1e-9


def square_root_measurement(operators: np.ndarray) -> np.ndarray:
    """
    Normalize positive operators ``γ_k`` into the POVM elements
    ``β_k = S^{-1/2} γ_k S^{-1/2}`` with ``S = Σ_k γ_k``. The inverse square
    root is taken on the support of ``S``, so that ``Σ_k β_k`` is the
    projector on this support.

    :param operators: array of shape ``(K, d, d)``
    """
    operators = np.asarray(operators)
    total = np.sum(operators, axis=0)
    inverse_sqrt = mat_pow(total, -0.5)
    return np.einsum("ab,kbc,cd->kad", inverse_sqrt, operators, inverse_sqrt)


class DecodingResult:
    """Decoding error of a single codebook, message by message"""

    def __init__(
        self,
        srm_errors: np.ndarray,
        corrections: np.ndarray,
        min_eigenvalue: float,
        max_total_eigenvalue: float,
    ):
        self.srm_errors: np.ndarray = srm_errors
        """``Tr[(I - Σ_{i,j} β(m, i, j)) Θ_B(m)]`` for every message"""
        self.corrections: np.ndarray = corrections
        """``P(τ_{S|m}, ρ_S)^2`` for every message"""
        self.min_eigenvalue: float = min_eigenvalue
        """smallest eigenvalue of all the POVM elements"""
        self.max_total_eigenvalue: float = max_total_eigenvalue
        """largest eigenvalue of the sum of all POVM elements"""

    @property
    def message_errors(self) -> np.ndarray:
        """total error bound ``ε(m)`` of every message"""
        return 2.0 * self.srm_errors + 2.0 * self.corrections

    @property
    def error(self) -> float:
        """``ε(m)`` averaged over messages"""
        return float(np.mean(self.message_errors))

    @property
    def povm_valid(self) -> bool:
        return (
            self.min_eigenvalue >= -POVM_ATOL
            and self.max_total_eigenvalue <= 1.0 + POVM_ATOL
        )

    def as_dict(self) -> Dict:
        return {
            "error": self.error,
            "first_message_error": float(self.message_errors[0]),
            "srm_error": float(np.mean(self.srm_errors)),
            "correction": float(np.mean(2.0 * self.corrections)),
            "povm_valid": self.povm_valid,
        }


def check_decoding_budget(state: CQState, rates, b: str = "B"):
    R, R1, r = rates
    if 2 ** (R + R1 + r) > POVM_BUDGET:
        raise DimensionBudgetError(
            f"decoding is limited to {POVM_BUDGET} POVM elements, got "
            f"{2 ** (R + R1 + r)}"
        )
    if state.quantum_layout.dim(b) > DIMENSION_BUDGET:
        raise DimensionBudgetError(
            f"decoding is limited to a receiver of dimension {DIMENSION_BUDGET}, "
            f"got {state.quantum_layout.dim(b)}"
        )


def decode_codebook(
    state: CQState,
    codebook: Codebook,
    tests: Optional[TestPair] = None,
    u: str = "U",
    v: str = "V",
    b: str = "B",
    s: str = "S",
) -> DecodingResult:
    """
    Compute the exact decoding error of ``codebook``, see the module
    documentation.

    :param state: cq state over ``(U, V; B, E, S)``
    :param codebook: the sampled codebook
    :param tests: hypothesis tests of the decoder, built with
        ``M1 = 2^{R + R1 + r}`` and ``M2 = 2^{R + R1}`` by default
    """
    check_decoding_budget(state, codebook.rates, b)
    R, R1, r = codebook.rates
    receiver = state.marginal(classical=[u, v], quantum=[b])
    if tests is None:
        tests = build_tests(receiver, 2.0 ** (R + R1 + r), 2.0 ** (R + R1))

    gammas = []
    for m in range(codebook.messages):
        for word in codebook.words(m):
            block = tests.block(word, "pi")
            gammas.append(0.5 * (block + block.conj().T))
    betas = square_root_measurement(gammas)
    betas = betas.reshape((codebook.messages, -1) + betas.shape[1:])

    total = np.sum(betas, axis=(0, 1))
    smallest = min(min_eigenvalue(beta) for beta in betas.reshape((-1,) + total.shape))

    channel_state = None
    if s in state.quantum_layout:
        channel_state = state.marginal(classical=[u, v], quantum=[s])
        target = channel_state.average()

    srm_errors = np.zeros(codebook.messages)
    corrections = np.zeros(codebook.messages)
    for m in range(codebook.messages):
        theta = codebook_average_state(receiver, codebook, m, u=u, v=v)
        correct = np.sum(betas[m], axis=0)
        srm_errors[m] = 1.0 - np.real(np.trace(correct @ theta.data))
        if channel_state is not None:
            tau = codebook_average_state(channel_state, codebook, m, u=u, v=v)
            corrections[m] = purified_distance(tau, target) ** 2

    return DecodingResult(
        np.clip(srm_errors, 0.0, None), corrections, smallest, max_eigenvalue(total)
    )


def decode_experiment(
    setup: Union[SideInfoSetup, CQState],
    codebook: Codebook,
    M1: Optional[float] = None,
    M2: Optional[float] = None,
    alphas: Sequence[float] = BOUND_ALPHAS,
) -> TrialResult:
    """
    Decode a single codebook with the square-root measurement built from the
    tests with thresholds ``M1`` (default ``2^{R + R1 + r}``) and ``M2``
    (default ``2^{R + R1}``). The result has one value per message, and its
    bound is the smallest average error bound over ``alphas``.
    """
    state = evaluation_state(setup)
    R, R1, r = codebook.rates
    check_decoding_budget(state, codebook.rates)
    M1 = 2.0 ** (R + R1 + r) if M1 is None else M1
    M2 = 2.0 ** (R + R1) if M2 is None else M2
    tests = build_tests(state.marginal(classical=["U", "V"], quantum=["B"]), M1, M2)

    result = decode_codebook(state, codebook, tests)
    bounds = codebook_bounds(state, codebook.rates, alphas)
    rows = [
        {"message": m, "srm_error": e, "correction": c, "value": value}
        for m, (e, c, value) in enumerate(
            zip(result.srm_errors, result.corrections, result.message_errors)
        )
    ]
    return TrialResult(
        "decode",
        result.message_errors,
        bounds.error,
        rows=rows,
        checks={"povm_valid": result.povm_valid},
        extra={**result.as_dict(), **bounds.as_dict(), "M1": M1, "M2": M2},
    )


def decoding_rows(results: List[DecodingResult]) -> List[Dict]:
    """one CSV row per codebook"""
    rows = []
    for trial, result in enumerate(results):
        row = {"trial": trial}
        row.update(result.as_dict())
        row["value"] = row.pop("error")
        rows.append(row)
    return rows
