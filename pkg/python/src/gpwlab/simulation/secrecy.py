from typing import Sequence, Tuple, Union

import numpy as np

from ..cq import CQState, SideInfoSetup
from ..operations import fidelity
from ..status import DimensionBudgetError
from .bounds import BOUND_ALPHAS, codebook_bounds, evaluation_state
from .codebook import (
    DIMENSION_BUDGET,
    WORD_BUDGET,
    Codebook,
    codebook_average_state,
    sample_codebook,
)
from .results import TrialResult, ordered_map


def leakage(
    state: CQState, codebook: Codebook, u: str = "U", v: str = "V", e: str = "E"
) -> float:
    """
    Squared purified distance ``P(ρ_ME, ρ_M ⊗ ρ_E)^2`` between the state of a
    uniform message and the eavesdropper and its product approximation. The
    eavesdropper's state for message ``m`` is the average of ``ρ_{E|u, v}``
    over the words ``(u(i), v(m, i, j))`` of the message, and
    ``ρ_E = 2^{-R} Σ_m ρ_{E|m}``. Both states share the uniform message
    distribution, so that

    .. math::

        P(ρ_{ME}, ρ_M ⊗ ρ_E)^2 = 1 - \\left(2^{-R} \\sum_m F(ρ_{E|m}, ρ_E)\\right)^2
    """
    if e not in state.quantum_layout:
        return 0.0
    if state.quantum_layout.dim(e) > DIMENSION_BUDGET:
        raise DimensionBudgetError(
            f"secrecy experiments are limited to dimension {DIMENSION_BUDGET}, "
            f"got {state.quantum_layout.dim(e)}"
        )

    eavesdropper = state.marginal(classical=[u, v], quantum=[e])
    average = codebook_average_state(eavesdropper, codebook, u=u, v=v)
    fidelities = [
        fidelity(codebook_average_state(eavesdropper, codebook, m, u=u, v=v), average)
        for m in range(codebook.messages)
    ]
    return float(max(1.0 - np.mean(fidelities) ** 2, 0.0))


def secrecy_experiment(
    setup: Union[SideInfoSetup, CQState],
    codebook: Codebook,
    alphas: Sequence[float] = BOUND_ALPHAS,
) -> TrialResult:
    """
    Compute the leakage of ``codebook`` (see :py:func:`leakage`) and compare
    it with the smallest average leakage bound over ``alphas``.
    """
    state = evaluation_state(setup)
    value = leakage(state, codebook)
    bounds = codebook_bounds(state, codebook.rates, alphas)
    return TrialResult(
        "secrecy",
        [value],
        bounds.secrecy,
        rows=[{"trial": codebook.trial, "value": value}],
        extra=bounds.as_dict(),
    )


def secrecy_batch(
    setup: Union[SideInfoSetup, CQState],
    rates: Tuple[int, int, int],
    trials: int,
    seed: int,
    threads: int = 1,
    alphas: Sequence[float] = BOUND_ALPHAS,
    budget: int = WORD_BUDGET,
) -> TrialResult:
    """
    Sample ``trials`` codebooks with rates ``(R, R1, r)`` and compare the
    mean of their leakage with the smallest average leakage bound over
    ``alphas``. Codebooks are the same as the ones of
    :py:func:`gpwlab.simulation.codebook_batch` with the same seed.
    """
    if trials < 1:
        raise ValueError(f"the number of trials must be positive, got {trials}")

    state = evaluation_state(setup)
    p_uv = state.marginal(classical=["U", "V"]).pmf

    def trial(index):
        return leakage(state, sample_codebook(p_uv, rates, seed, index, budget))

    values = ordered_map(trial, range(trials), threads)
    bounds = codebook_bounds(state, rates, alphas)
    return TrialResult(
        "secrecy",
        values,
        bounds.secrecy,
        rows=[{"trial": i, "value": value} for i, value in enumerate(values)],
        extra=bounds.as_dict(),
    )
