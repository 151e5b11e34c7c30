"""
Monte Carlo checks of the channel resolvability bounds: the state induced by
a random codebook is close to the target state, with an explicit bound on
the expectation of ``2^{α D_{1+α}}``.
"""
import logging

import numpy as np

from ..cq import CQState, markov_cq_state, product_cq_state
from ..divergence import cq_sandwiched_renyi, sandwiched_renyi
from ..pinching import CLUSTER_TOL, build_conditional_pinching, build_E_chain
from ..state import DensityMatrix
from ._rng import stream
from .codebook import (
    WORD_BUDGET,
    check_budget,
    codebook_average_state,
    sample_codebook,
)
from .results import TrialResult, ordered_map


LOGGER = logging.getLogger(__name__)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")


def resolvability_bound(
    state: CQState,
    r: int,
    R: int,
    alpha: float,
    u: str = "U",
    v: str = "V",
    quantum: str = "S",
    cluster_tol: float = CLUSTER_TOL,
) -> float:
    """
    Upper bound on ``E_C[2^{α D_{1+α}(τ_{X|C} ‖ ρ_X)}]`` for a codebook with
    ``2^r`` outer words and ``2^R`` inner words per outer word:

    .. math::

        1 + \\left(\\frac{v_3}{2^r}\\right)^α 2^{α D_{1+α}(ρ_{UX} \\| ρ_U ⊗ ρ_X)}
          + \\left(\\frac{v_4}{2^{R + r}}\\right)^α
            2^{α D_{1+α}(ρ_{UVX} \\| ρ_{UV} ⊗ ρ_X)}
    """
    _check_alpha(alpha)
    chain = build_E_chain(state, u=u, quantum=quantum, cluster_tol=cluster_tol)

    outer = state.marginal(classical=[u], quantum=[quantum])
    joint = state.marginal(classical=[u, v], quantum=[quantum])
    d_outer = cq_sandwiched_renyi(outer, product_cq_state(outer), 1.0 + alpha)
    d_joint = cq_sandwiched_renyi(joint, product_cq_state(joint), 1.0 + alpha)

    return float(
        1.0
        + np.exp2(alpha * (np.log2(chain.v1) - r + d_outer))
        + np.exp2(alpha * (np.log2(chain.v2) - R - r + d_joint))
    )


def resolvability_experiment(
    state: CQState,
    r: int,
    R: int,
    alpha: float,
    trials: int,
    seed: int,
    threads: int = 1,
    u: str = "U",
    v: str = "V",
    quantum: str = "S",
    budget: int = WORD_BUDGET,
) -> TrialResult:
    """
    Sample ``trials`` codebooks with ``2^r`` outer words ``u(i)`` and ``2^R``
    inner words ``v(i, j)`` per outer word, and compute for each of them the
    induced state ``τ = 2^{-(R + r)} Σ_{i,j} ρ_{X|u(i), v(i, j)}`` and the
    value ``2^{α D_{1+α}(τ ‖ ρ_X)}``. The mean of these values is compared
    with :py:func:`resolvability_bound`.

    :param state: cq state over ``(U, V; X)``
    :param r: rate of the outer words
    :param R: rate of the inner words
    :param alpha: parameter in ``(0, 1)``
    :param trials: number of sampled codebooks
    :param seed: seed of the experiment
    :param threads: number of worker threads
    """
    _check_alpha(alpha)
    check_budget(state, quantum, (u, v))
    joint = state.marginal(classical=[u, v], quantum=[quantum])
    target = joint.average()
    bound = resolvability_bound(joint, r, R, alpha, u=u, v=v, quantum=quantum)

    def trial(index):
        codebook = sample_codebook(joint.pmf, (0, R, r), seed, index, budget)
        tau = codebook_average_state(joint, codebook, u=u, v=v)
        divergence = sandwiched_renyi(tau, target, 1.0 + alpha)
        return divergence, float(np.exp2(alpha * divergence))

    results = ordered_map(trial, range(trials), threads)
    rows = [
        {"trial": i, "divergence": divergence, "value": value}
        for i, (divergence, value) in enumerate(results)
    ]
    result = TrialResult(
        "resolve",
        [value for _, value in results],
        bound,
        rows=rows,
        extra={
            "alpha": alpha,
            "r": r,
            "R": R,
            "mean_divergence": float(np.mean([d for d, _ in results])),
        },
    )
    LOGGER.info("resolvability experiment: %s", result)
    return result


def conditional_resolvability_bound(
    state: CQState,
    R1: int,
    alpha: float,
    u: str = "U",
    v: str = "V",
    quantum: str = "E",
    cluster_tol: float = CLUSTER_TOL,
) -> float:
    """
    Upper bound ``1 + v_5^α 2^{-α R1} 2^{α D_{1+α}(ρ_{UVX} ‖ ρ_{V-U-X})}`` on
    ``E[2^{α D_{1+α}(τ_{X|C} ‖ ρ_{X|U'})}]``, where ``v_5`` is the largest
    number of distinct eigenvalues of the states ``ρ_{X|u}``.
    """
    _check_alpha(alpha)
    joint = state.marginal(classical=[u, v], quantum=[quantum])
    conditioned = state.marginal(classical=[u], quantum=[quantum])
    references = {index: rho for index, _, rho in conditioned}
    v5 = build_conditional_pinching(references, u, cluster_tol).count

    markov = markov_cq_state(joint, v=v, u=u, quantum=quantum)
    divergence = cq_sandwiched_renyi(joint, markov, 1.0 + alpha)
    return float(1.0 + np.exp2(alpha * (np.log2(v5) - R1 + divergence)))


def conditional_resolvability_experiment(
    state: CQState,
    R1: int,
    alpha: float,
    trials: int,
    seed: int,
    threads: int = 1,
    u: str = "U",
    v: str = "V",
    quantum: str = "E",
) -> TrialResult:
    """
    For every trial, sample ``u' ~ p_U`` and ``2^{R1}`` inner words
    ``v(j) ~ p_{V|U=u'}``, and compute ``2^{α D_{1+α}(τ ‖ ρ_{X|u'})}`` for
    the induced state ``τ = 2^{-R1} Σ_j ρ_{X|u', v(j)}``. The mean of these
    values is compared with :py:func:`conditional_resolvability_bound`.

    :param state: cq state over ``(U, V; X)``
    :param R1: rate of the inner words
    :param alpha: parameter in ``(0, 1)``
    :param trials: number of sampled codebooks
    :param seed: seed of the experiment
    :param threads: number of worker threads
    """
    _check_alpha(alpha)
    check_budget(state, quantum, (u, v))
    joint = state.marginal(classical=[u, v], quantum=[quantum])
    bound = conditional_resolvability_bound(
        joint, R1, alpha, u=u, v=v, quantum=quantum
    )

    conditioned = state.marginal(classical=[u], quantum=[quantum])
    pmf = joint.pmf
    p_u = np.sum(pmf, axis=1)
    n_u, n_v = pmf.shape
    if 2**R1 > WORD_BUDGET:
        raise ValueError(f"R1 = {R1} gives more than {WORD_BUDGET} words")

    def trial(index):
        generator = stream(seed, index, 0)
        outer = int(generator.choice(n_u, p=p_u))
        words = generator.choice(n_v, size=2**R1, p=pmf[outer] / p_u[outer])

        tau = sum(joint.conditional((outer, int(word))).data for word in words)
        tau = DensityMatrix(tau / len(words), joint.quantum_layout)
        target = conditioned.conditional((outer,))
        divergence = sandwiched_renyi(tau, target, 1.0 + alpha)
        return outer, divergence, float(np.exp2(alpha * divergence))

    results = ordered_map(trial, range(trials), threads)
    rows = [
        {"trial": i, "u": outer, "divergence": divergence, "value": value}
        for i, (outer, divergence, value) in enumerate(results)
    ]
    result = TrialResult(
        "resolve-conditional",
        [value for _, _, value in results],
        bound,
        rows=rows,
        extra={"alpha": alpha, "R1": R1},
    )
    LOGGER.info("conditional resolvability experiment: %s", result)
    return result
