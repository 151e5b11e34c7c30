import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cq import CQState, markov_cq_state, product_cq_state
from .divergence import (
    CMIResult,
    cq_sandwiched_renyi,
    renyi_cond_mutual_info,
    sandwiched_renyi,
)
from .operations import mat_pow, projector_geq
from .operations._utils import _check_states
from .pinching import (
    CLUSTER_TOL,
    PinchingChain,
    apply_pinching,
    build_E_chain,
    pinching_from_state,
)
from .state import DensityMatrix


LOGGER = logging.getLogger(__name__)

LEMMA_SLACK = 1e-8
"""smallest accepted value of ``bound - trace`` for the test error bounds"""

_HAT_WARNING = (
    "the data processing inequality of the D-hat quantity is not known, it is "
    "reported for comparison only"
)


class TestPair:
    """
    Projectors of the decoder hypothesis tests on ``(U, V; B)``:

    .. math::

        Π_1 = \\{E_2(ρ_{UVB}) ≥ M_1 ρ_{UV} ⊗ ρ_B\\}, \\quad
        Π_2 = \\{E_2(ρ_{UVB}) ≥ M_2 E_1(ρ_{V-U-B})\\}, \\quad
        Π = Π_1 Π_2.

    All three are block diagonal in the classical registers and are stored
    block by block, as ``(u, v) ↦ projector on B``. Blocks of zero probability
    are the identity.
    """

    __test__ = False

    def __init__(
        self,
        blocks1: Dict[Tuple[int, int], np.ndarray],
        blocks2: Dict[Tuple[int, int], np.ndarray],
        M1: float,
        M2: float,
        dims: Tuple[int, int],
    ):
        self.M1: float = M1
        """threshold of the first test"""
        self.M2: float = M2
        """threshold of the second test"""

        self._blocks1 = blocks1
        self._blocks2 = blocks2
        self._blocks = {key: blocks1[key] @ blocks2[key] for key in blocks1}
        self._dims = dims

    @property
    def keys(self) -> List[Tuple[int, int]]:
        """classical indexes ``(u, v)`` of the blocks"""
        return list(self._blocks.keys())

    def block(self, key, which: str = "pi") -> np.ndarray:
        """
        Get the ``(u, v)`` block of one of the projectors.

        :param key: the classical index ``(u, v)``
        :param which: one of ``"pi1"``, ``"pi2"`` or ``"pi"``
        """
        key = tuple(key)
        if which == "pi1":
            return self._blocks1[key]
        elif which == "pi2":
            return self._blocks2[key]
        elif which == "pi":
            return self._blocks[key]
        raise ValueError(f"unknown projector '{which}'")

    def _dense(self, blocks) -> np.ndarray:
        n_u, n_v = self._dims
        size = next(iter(blocks.values())).shape[0]
        dense = np.zeros((n_u * n_v * size,) * 2, dtype=np.complex128)
        for (u, v), block in blocks.items():
            start = (u * n_v + v) * size
            window = slice(start, start + size)
            dense[window, window] = block
        return dense

    @property
    def pi1(self) -> np.ndarray:
        """the projector ``Π1`` on ``(U, V, B)``"""
        return self._dense(self._blocks1)

    @property
    def pi2(self) -> np.ndarray:
        """the projector ``Π2`` on ``(U, V, B)``"""
        return self._dense(self._blocks2)

    @property
    def pi(self) -> np.ndarray:
        """the product ``Π = Π1 Π2`` on ``(U, V, B)``"""
        return self._dense(self._blocks)


def build_tests(
    state: CQState,
    M1: float,
    M2: float,
    chain: Optional[PinchingChain] = None,
    u: str = "U",
    v: str = "V",
    quantum: str = "B",
    cluster_tol: float = CLUSTER_TOL,
) -> TestPair:
    """
    Build the projectors ``Π1``, ``Π2`` and ``Π`` of the decoder, see
    :py:class:`TestPair`. The common factor ``p(u, v)`` of both sides of each
    block is dropped before taking the spectral projectors.

    :param state: cq state with classical registers ``(u, v)`` and quantum
        register ``quantum``
    :param M1: threshold of the first test
    :param M2: threshold of the second test
    :param chain: pinchings to use, built with
        :py:func:`gpwlab.pinching.build_E_chain` by default
    """
    if M1 <= 0 or M2 <= 0:
        raise ValueError(f"test thresholds must be positive, got {M1} and {M2}")

    if chain is None:
        chain = build_E_chain(state, u=u, quantum=quantum, cluster_tol=cluster_tol)

    joint = state.marginal(classical=[u, v], quantum=[quantum])
    if joint.classical_layout.names != (u, v):
        raise ValueError(f"classical registers should be ordered as ({u}, {v})")
    conditioned = state.marginal(classical=[u], quantum=[quantum])
    average = state.average([quantum]).data

    n_u, n_v = joint.classical_layout.dims
    identity = np.eye(average.shape[0], dtype=np.complex128)
    blocks1 = {}
    blocks2 = {}
    for key in itertools.product(range(n_u), range(n_v)):
        if joint.probability(key) <= 0.0:
            blocks1[key] = identity
            blocks2[key] = identity
            continue

        pinched = chain.second[(key[0],)].apply_matrix(joint.conditional(key).data)
        markov = chain.first.apply_matrix(conditioned.conditional((key[0],)).data)
        blocks1[key] = projector_geq(pinched, M1 * average)
        blocks2[key] = projector_geq(pinched, M2 * markov)

    return TestPair(blocks1, blocks2, M1, M2, (n_u, n_v))


class ErrorTerms:
    """Quantities controlling the error of the decoder tests at one order"""

    def __init__(
        self, alpha: float, divergence: float, information: CMIResult, markov: float
    ):
        self.alpha: float = alpha
        """the order is ``1 - alpha``"""

        self.divergence: float = divergence
        """``D_{1-α}(ρ_UVB ‖ ρ_UV ⊗ ρ_B)``"""

        self.information: CMIResult = information
        """result of the minimization defining ``I_{1-α}[V;B|U]``"""

        self.markov: float = markov
        """``D_{1-α}(ρ_UVB ‖ E1(ρ_{V-U-B}))``"""

    @property
    def information_used(self) -> float:
        """
        The conditional information entering the bounds: the smallest of the
        minimized value and the divergence to the pinched Markov state, which
        is a feasible point of the minimization.
        """
        return min(self.information.value, self.markov)


def error_terms(
    state: CQState,
    alpha: float,
    chain: Optional[PinchingChain] = None,
    u: str = "U",
    v: str = "V",
    quantum: str = "B",
    cluster_tol: float = CLUSTER_TOL,
) -> ErrorTerms:
    """
    Compute the Rényi quantities of order ``1 - α`` entering the error
    bounds of the decoder tests.

    :param state: cq state with classical registers ``(u, v)`` and quantum
        register ``quantum``
    :param alpha: parameter in ``(0, 1)``
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if chain is None:
        chain = build_E_chain(state, u=u, quantum=quantum, cluster_tol=cluster_tol)

    order = 1.0 - alpha
    joint = state.marginal(classical=[u, v], quantum=[quantum])
    divergence = cq_sandwiched_renyi(joint, product_cq_state(joint), order)

    markov = markov_cq_state(joint, v=v, u=u, quantum=quantum)
    markov = markov.map_conditionals(lambda _, rho: apply_pinching(chain.first, rho))
    markov_divergence = cq_sandwiched_renyi(joint, markov, order)

    information = renyi_cond_mutual_info(
        joint, [v], [quantum], [u], order, allow_uncertified=True
    )
    return ErrorTerms(alpha, divergence, information, markov_divergence)


class Lemma5Report:
    """
    Error probabilities of the decoder tests and their upper bounds, for a
    list of orders.
    """

    def __init__(self, traces: Tuple[float, float, float, float], v2: int):
        self.traces: Tuple[float, float, float, float] = traces
        """
        ``Tr[Π1 (ρ_UV ⊗ ρ_B)]``, ``Tr[Π2 ρ_{V-U-B}]``, ``Tr[(I - Π1) ρ_UVB]`` and
        ``Tr[(I - Π2) ρ_UVB]``
        """

        self.v2: int = v2
        """pinching constant of ``E2``"""

        self.alphas: List[float] = []
        """values of ``α`` where the bounds were evaluated"""

        self.bounds: List[Tuple[float, float, float, float]] = []
        """bounds on the four traces, one entry per value of ``α``"""

        self.terms: List[ErrorTerms] = []

    def add(self, terms: ErrorTerms, bounds: Tuple[float, float, float, float]):
        self.alphas.append(terms.alpha)
        self.terms.append(terms)
        self.bounds.append(bounds)

    def slacks(self) -> np.ndarray:
        """``bound - trace`` for every ``α`` (rows) and every trace (columns)"""
        return np.array(self.bounds) - np.array(self.traces)[np.newaxis, :]

    def all_hold(self, slack: float = LEMMA_SLACK) -> bool:
        """Do all the bounds hold, up to ``slack``?"""
        return bool(np.all(self.slacks() >= -slack))

    def as_rows(self) -> List[Dict]:
        rows = []
        for alpha, bounds, terms in zip(self.alphas, self.bounds, self.terms):
            row = {"alpha": alpha}
            for i, (trace, bound) in enumerate(zip(self.traces, bounds), start=1):
                row[f"trace{i}"] = trace
                row[f"bound{i}"] = bound
            row["converged"] = terms.information.converged
            rows.append(row)
        return rows


def lemma5_check(
    state: CQState,
    M1: float,
    M2: float,
    alphas: Sequence[float],
    u: str = "U",
    v: str = "V",
    quantum: str = "B",
    cluster_tol: float = CLUSTER_TOL,
) -> Lemma5Report:
    """
    Compute the four error probabilities of the decoder tests (see
    :py:class:`Lemma5Report`) and compare them with their bounds, for every
    ``α`` in ``alphas``:

    .. math::

        \\text{Tr}[Π_1 (ρ_{UV} ⊗ ρ_B)] &≤ v_2^α M_1^{-(1-α)} 2^{-α D} \\\\
        \\text{Tr}[Π_2 ρ_{V-U-B}] &≤ v_2^α M_2^{-(1-α)} 2^{-α I} \\\\
        \\text{Tr}[(I - Π_1) ρ_{UVB}] &≤ v_2^α M_1^α 2^{-α D} \\\\
        \\text{Tr}[(I - Π_2) ρ_{UVB}] &≤ v_2^α M_2^α 2^{-α I}

    where ``D = D_{1-α}(ρ_UVB ‖ ρ_UV ⊗ ρ_B)`` and ``I`` is the Rényi
    conditional mutual information of order ``1 - α`` (see
    :py:attr:`ErrorTerms.information_used`).
    """
    chain = build_E_chain(state, u=u, quantum=quantum, cluster_tol=cluster_tol)
    tests = build_tests(state, M1, M2, chain=chain, u=u, v=v, quantum=quantum)

    joint = state.marginal(classical=[u, v], quantum=[quantum])
    conditioned = state.marginal(classical=[u], quantum=[quantum])
    average = state.average([quantum]).data

    traces = np.zeros(4)
    for key, p, rho in joint:
        markov = conditioned.conditional((key[0],)).data
        pi1 = tests.block(key, "pi1")
        pi2 = tests.block(key, "pi2")
        traces += p * np.real(
            [
                np.trace(pi1 @ average),
                np.trace(pi2 @ markov),
                1.0 - np.trace(pi1 @ rho.data),
                1.0 - np.trace(pi2 @ rho.data),
            ]
        )

    report = Lemma5Report(tuple(float(t) for t in traces), chain.v2)
    for alpha in alphas:
        terms = error_terms(state, alpha, chain=chain, u=u, v=v, quantum=quantum)
        scale = chain.v2**alpha
        d_factor = 2.0 ** (-alpha * terms.divergence)
        i_factor = 2.0 ** (-alpha * terms.information_used)
        report.add(
            terms,
            (
                scale * M1 ** (alpha - 1.0) * d_factor,
                scale * M2 ** (alpha - 1.0) * i_factor,
                scale * M1**alpha * d_factor,
                scale * M2**alpha * i_factor,
            ),
        )

    LOGGER.info(
        "decoder test traces %s, all bounds hold: %s", traces, report.all_hold()
    )
    return report


def petz_renyi(rho: DensityMatrix, sigma: DensityMatrix, order: float) -> float:
    """
    Petz Rényi relative entropy ``1/(t-1) log₂ Tr[ρ^t σ^{1-t}]``, for orders
    ``t`` in ``(0, 1)``.
    """
    _check_states(rho, sigma, "petz_renyi")
    if not 0.0 < order < 1.0:
        raise ValueError(f"order must be in (0, 1), got {order}")
    quantity = np.real(np.trace(mat_pow(rho, order) @ mat_pow(sigma, 1.0 - order)))
    if quantity <= 0:
        return np.inf
    return float(np.log2(quantity) / (order - 1.0))


def hat_renyi(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """
    The quantity ``-1/α log₂ Tr[ρ σ^{α/2} ρ^{-α} σ^{α/2}]``, with ``ρ^{-α}`` the
    inverse power on the support of ``ρ``. It is only used to compare test
    error bounds, see :py:func:`single_system_comparison`.
    """
    _check_states(rho, sigma, "hat_renyi")
    half = mat_pow(sigma, alpha / 2.0)
    quantity = np.real(np.trace(rho.data @ half @ mat_pow(rho, -alpha) @ half))
    if quantity <= 0:
        return np.inf
    return float(-np.log2(quantity) / alpha)


class ComparisonReport:
    """Errors and exponents of the pinched test and of the plain test"""

    def __init__(self, pinched_errors, optimal_errors, exponents, v, alpha, M):
        self.pinched_errors: Tuple[float, float] = pinched_errors
        """``(Tr[(I - Π_σ) ρ], Tr[Π_σ σ])`` for ``Π_σ = {E_σ(ρ) ≥ M σ}``"""

        self.optimal_errors: Tuple[float, float] = optimal_errors
        """``(Tr[(I - Π) ρ], Tr[Π σ])`` for ``Π = {ρ ≥ M σ}``"""

        self.exponents: Dict[str, float] = exponents
        """sandwiched, Petz and D-hat quantities of order ``1 - α``"""

        self.v: int = v
        """number of distinct eigenvalues of ``σ``"""

        self.alpha: float = alpha
        self.M: float = M

        self.warnings: List[str] = [_HAT_WARNING]

    @property
    def pinched_bounds(self) -> Tuple[float, float]:
        """
        Bounds ``v^α M^α 2^{-α D}`` and ``v^α M^{-(1-α)} 2^{-α D}`` on the
        errors of the pinched test, with the sandwiched quantity ``D``.
        """
        alpha = self.alpha
        base = self.v**alpha * 2.0 ** (-alpha * self.exponents["sandwiched"])
        return base * self.M**alpha, base * self.M ** (alpha - 1.0)

    @property
    def petz_dominates(self) -> bool:
        """is the Petz quantity larger than the sandwiched one (up to 1e-9)?"""
        return self.exponents["petz"] >= self.exponents["sandwiched"] - 1e-9

    def as_dict(self) -> Dict:
        return {
            "alpha": self.alpha,
            "M": self.M,
            "v": self.v,
            "pinched_errors": list(self.pinched_errors),
            "pinched_bounds": list(self.pinched_bounds),
            "optimal_errors": list(self.optimal_errors),
            "exponents": dict(self.exponents),
            "petz_dominates": self.petz_dominates,
            "warnings": list(self.warnings),
        }


def single_system_comparison(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    M: float,
    alpha: float,
    cluster_tol: float = CLUSTER_TOL,
) -> ComparisonReport:
    """
    Compare the test ``Π_σ = {E_σ(ρ) ≥ M σ}`` built from the pinching with
    respect to ``σ`` with the test ``Π = {ρ ≥ M σ}``, and compute the three
    quantities of order ``1 - α`` that can bound their errors: the sandwiched
    and Petz Rényi relative entropies, and the D-hat quantity of
    :py:func:`hat_renyi`.
    """
    _check_states(rho, sigma, "single_system_comparison")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")

    pinching = pinching_from_state(sigma, cluster_tol)
    pinched = apply_pinching(pinching, rho)

    def errors(projector):
        return (
            float(1.0 - np.real(np.trace(projector @ rho.data))),
            float(np.real(np.trace(projector @ sigma.data))),
        )

    pinched_test = projector_geq(pinched, M * sigma.data)
    plain_test = projector_geq(rho, M * sigma.data)

    order = 1.0 - alpha
    exponents = {
        "sandwiched": sandwiched_renyi(rho, sigma, order),
        "petz": petz_renyi(rho, sigma, order),
        "hat": hat_renyi(rho, sigma, alpha),
    }
    return ComparisonReport(
        errors(pinched_test), errors(plain_test), exponents, pinching.count, alpha, M
    )
