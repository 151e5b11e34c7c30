"""
Finite blocklength bounds on the decoding error and the leakage of the
Gel'fand-Pinsker wiretap code, and the error exponents derived from them.

All the bounds are functions of the rates ``(R, R1, r)``, of a parameter
``α ∈ (0, 1)`` and of Rényi quantities of the evaluation state over
``(U, V; B, E, S)``:

- ``D_{1-α}(ρ_UVB ‖ ρ_UV ⊗ ρ_B)`` and ``I_{1-α}[V;B|U]`` control decoding;
- ``D_{1+α}(ρ_US ‖ ρ_U ⊗ ρ_S)`` and ``D_{1+α}(ρ_UVS ‖ ρ_UV ⊗ ρ_S)`` control
  the matching of the channel state;
- ``D_{1+α}(ρ_UVE ‖ ρ_{V-U-E})`` controls the leakage to the eavesdropper.
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.optimize

from .cq import CQState, markov_cq_state, product_cq_state
from .divergence import cq_sandwiched_renyi
from .hyptest import error_terms
from .pinching import (
    CLUSTER_TOL,
    PinchingConstants,
    iid_component_bounds,
    iid_conditional_bound,
    pinching_constants,
)
from .rates import RateAllocation


LOGGER = logging.getLogger(__name__)

ALPHA_GRID_SIZE = 64

AVERAGE_ERROR_COEFFICIENTS = (20.0, 2.0)
"""coefficients of the decoding and matching terms in the average error bound"""

AVERAGE_SECRECY_COEFFICIENT = 8.0

EXPURGATION_BETA = 1.1
"""a codebook is kept when its error is below ``(β - 1)/(β + 1)``"""

EXPURGATED_ERROR_COEFFICIENTS = (42.0, 5.0)
EXPURGATED_SECRECY_COEFFICIENT = 20.0


class ExponentQuantities:
    """Rényi quantities of an evaluation state at a given ``α``"""

    FIELDS = (
        "decoding",
        "information",
        "outer_matching",
        "state_matching",
        "leakage",
    )

    def __init__(
        self,
        alpha: float,
        decoding: float,
        information: float,
        outer_matching: float,
        state_matching: float,
        leakage: float,
        converged: bool = True,
        certified: bool = True,
    ):
        self.alpha = alpha
        self.decoding = decoding
        """``D_{1-α}(ρ_UVB ‖ ρ_UV ⊗ ρ_B)``"""
        self.information = information
        """``I_{1-α}[V;B|U]``"""
        self.outer_matching = outer_matching
        """``D_{1+α}(ρ_US ‖ ρ_U ⊗ ρ_S)``"""
        self.state_matching = state_matching
        """``D_{1+α}(ρ_UVS ‖ ρ_UV ⊗ ρ_S)``"""
        self.leakage = leakage
        """``D_{1+α}(ρ_UVE ‖ ρ_{V-U-E})``"""

        self.converged = converged
        self.certified = certified

    def scaled(self, n: int) -> "ExponentQuantities":
        """Quantities of ``n`` independent copies of the state"""
        values = [n * getattr(self, name) for name in self.FIELDS]
        return ExponentQuantities(
            self.alpha, *values, converged=self.converged, certified=self.certified
        )

    def as_dict(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in self.FIELDS}


def _divergence_to_product(state, classical, quantum, order) -> float:
    if quantum not in state.quantum_layout:
        return 0.0
    joint = state.marginal(classical=classical, quantum=[quantum])
    return cq_sandwiched_renyi(joint, product_cq_state(joint), order)


def exponent_quantities(
    state: CQState,
    alpha: float,
    u: str = "U",
    v: str = "V",
    b: str = "B",
    e: str = "E",
    s: str = "S",
    cluster_tol: float = CLUSTER_TOL,
) -> ExponentQuantities:
    """
    Compute the Rényi quantities entering the bounds of this module. Terms
    involving a quantum register absent from ``state`` are zero.

    The conditional information is the one used by the decoder tests, see
    :py:attr:`gpwlab.hyptest.ErrorTerms.information_used`.

    :param state: cq state over ``(U, V; B, E, S)``
    :param alpha: parameter in ``(0, 1)``
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")

    decoding = error_terms(state, alpha, u=u, v=v, quantum=b, cluster_tol=cluster_tol)

    leakage = 0.0
    if e in state.quantum_layout:
        joint = state.marginal(classical=[u, v], quantum=[e])
        markov = markov_cq_state(joint, v=v, u=u, quantum=e)
        leakage = cq_sandwiched_renyi(joint, markov, 1.0 + alpha)

    information = decoding.information
    return ExponentQuantities(
        alpha,
        decoding=decoding.divergence,
        information=decoding.information_used,
        outer_matching=_divergence_to_product(state, [u], s, 1.0 + alpha),
        state_matching=_divergence_to_product(state, [u, v], s, 1.0 + alpha),
        leakage=leakage,
        converged=information.converged,
        certified=information.certified,
    )


def _exp2(value: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.exp2(value))


class ExponentReport:
    """
    Finite blocklength error and leakage bounds of a code with given rates,
    with their breakdown in individual terms:

    .. math::

        e_1 &= v_2^α 2^{α(R + R_1 + r - D_{1-α}(UVB \\| UV ⊗ B))} \\\\
        e_2 &= v_2^α 2^{α(R + R_1 - I_{1-α}[V;B|U])} \\\\
        e_3 &= (v_3 / 2^r)^α 2^{α D_{1+α}(US \\| U ⊗ S)} \\\\
        e_4 &= (v_4 / 2^{R_1 + r})^α 2^{α D_{1+α}(UVS \\| UV ⊗ S)} \\\\
        s_3 &= v_5^α 2^{-α R_1} 2^{α D_{1+α}(UVE \\| V-U-E)}

    The average error over messages and codebooks is bounded by
    ``20 (e1 + e2) + (2/α)(e3 + e4)`` and the average squared purified
    distance of the eavesdropper's state by ``(8/α)(e3 + e4 + s3)``. After
    expurgation, the maximal error is bounded by
    ``42 (e1 + e2) + (5/α)(e3 + e4)`` and the squared leakage by
    ``(20/α)(e3 + e4 + s3)``.
    """

    def __init__(
        self,
        allocation: RateAllocation,
        quantities: ExponentQuantities,
        constants: Dict[str, float],
        n: int = 1,
    ):
        self.allocation: RateAllocation = allocation
        """the rates of the code, already multiplied by ``n``"""

        self.quantities: ExponentQuantities = quantities
        """the Rényi quantities, already multiplied by ``n``"""

        self.constants: Dict[str, float] = constants
        """the pinching constants ``v1`` to ``v5``"""

        self.n: int = n

        alpha = quantities.alpha
        R, R1, r = allocation.R, allocation.R1, allocation.r
        log_v = {k: np.log2(constants[k]) for k in ("v2", "v3", "v4", "v5")}

        exponents = {
            "e1": log_v["v2"] + R + R1 + r - quantities.decoding,
            "e2": log_v["v2"] + R + R1 - quantities.information,
            "e3": log_v["v3"] - r + quantities.outer_matching,
            "e4": log_v["v4"] - R1 - r + quantities.state_matching,
            "s3": log_v["v5"] - R1 + quantities.leakage,
        }
        self.terms: Dict[str, float] = {
            name: _exp2(alpha * value) for name, value in exponents.items()
        }

        self.notes: List[str] = [
            "the expurgated error coefficient 42 equals 20 (1 + β) for "
            f"β = {EXPURGATION_BETA}",
            "the coefficient 5 of the expurgated error bound is used as stated, "
            f"while 2 (1 + β) = {2 * (1 + EXPURGATION_BETA):.1f}",
        ]
        if not quantities.converged:
            self.notes.append(
                "the Rényi conditional mutual information did not converge"
            )
        if not quantities.certified:
            self.notes.append(
                "the Rényi conditional mutual information minimizer is not "
                "certified at this order"
            )

    @property
    def alpha(self) -> float:
        return self.quantities.alpha

    def _combine(self, decoding: float, matching: float, leakage: float = 0.0):
        groups = [
            (decoding, ("e1", "e2")),
            (matching, ("e3", "e4")),
            (leakage, ("s3",)),
        ]
        value = 0.0
        for coefficient, names in groups:
            if coefficient != 0.0:
                value += coefficient * sum(self.terms[name] for name in names)
        return float(value)

    @property
    def error_bound(self) -> float:
        """bound on the error averaged over messages and codebooks"""
        decoding, matching = AVERAGE_ERROR_COEFFICIENTS
        return self._combine(decoding, matching / self.alpha)

    @property
    def secrecy_bound(self) -> float:
        """bound on the average squared purified distance of the leakage"""
        coefficient = AVERAGE_SECRECY_COEFFICIENT / self.alpha
        return self._combine(0.0, coefficient, coefficient)

    @property
    def expurgated_error_bound(self) -> float:
        """bound on the maximal error over messages after expurgation"""
        decoding, matching = EXPURGATED_ERROR_COEFFICIENTS
        return self._combine(decoding, matching / self.alpha)

    @property
    def expurgated_secrecy_bound(self) -> float:
        """bound on the squared leakage after expurgation"""
        coefficient = EXPURGATED_SECRECY_COEFFICIENT / self.alpha
        return self._combine(0.0, coefficient, coefficient)

    def as_dict(self) -> Dict:
        return {
            "alpha": self.alpha,
            "n": self.n,
            "rates": self.allocation.as_dict(),
            "quantities": self.quantities.as_dict(),
            "constants": dict(self.constants),
            "terms": dict(self.terms),
            "error_bound": self.error_bound,
            "secrecy_bound": self.secrecy_bound,
            "expurgated_error_bound": self.expurgated_error_bound,
            "expurgated_secrecy_bound": self.expurgated_secrecy_bound,
            "converged": self.quantities.converged,
            "notes": list(self.notes),
        }


def iid_constants(n: int, d_u: int, d_b: int, d_e: int, d_s: int) -> Dict[str, float]:
    """
    Upper bounds on the pinching constants for ``n`` independent copies of a
    state with alphabet size ``d_u`` and quantum dimensions ``d_b``, ``d_e``
    and ``d_s``.
    """
    v1, v2 = iid_component_bounds(n, d_u, d_b)
    v3, v4 = iid_component_bounds(n, d_u, d_s)
    return {
        "v1": v1,
        "v2": v2,
        "v3": v3,
        "v4": v4,
        "v5": iid_conditional_bound(n, d_u, d_e),
    }


def _register_dim(state: CQState, name: str) -> int:
    if name in state.quantum_layout:
        return state.quantum_layout.dim(name)
    return 1


def single_shot_bounds(
    state: CQState,
    allocation: RateAllocation,
    alpha: float,
    n: int = 1,
    constants: Optional[PinchingConstants] = None,
    u: str = "U",
    v: str = "V",
    b: str = "B",
    e: str = "E",
    s: str = "S",
    cluster_tol: float = CLUSTER_TOL,
) -> ExponentReport:
    """
    Evaluate the error and leakage bounds of a code with rates
    ``allocation`` built from ``state``, see :py:class:`ExponentReport`.

    With ``n = 1`` the pinching constants are measured on ``state``. With
    ``n > 1`` the bounds describe ``n`` independent copies of ``state``: the
    rates are per copy and are multiplied by ``n``, the Rényi quantities
    are computed on one copy and multiplied by ``n``, and the pinching
    constants are replaced by their polynomial upper bounds.

    :param state: cq state over ``(U, V; B, E, S)``, typically from
        :py:meth:`gpwlab.cq.SideInfoSetup.evaluation_state`
    :param allocation: rates of the code
    :param alpha: parameter in ``(0, 1)``
    :param n: number of independent copies
    :param constants: pre-computed pinching constants for ``n = 1``
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")

    quantities = exponent_quantities(
        state, alpha, u=u, v=v, b=b, e=e, s=s, cluster_tol=cluster_tol
    )
    if n == 1:
        if constants is None:
            constants = pinching_constants(
                state, u=u, b=b, e=e, s=s, cluster_tol=cluster_tol
            )
        values = {k: float(x) for k, x in constants.as_dict().items()}
    else:
        d_u = state.classical_layout.dim(u)
        values = iid_constants(
            n,
            d_u,
            _register_dim(state, b),
            _register_dim(state, e),
            _register_dim(state, s),
        )
        quantities = quantities.scaled(n)
        allocation = allocation.scaled(n)

    report = ExponentReport(allocation, quantities, values, n=n)
    LOGGER.debug(
        "bounds at alpha = %g: error %.6g, secrecy %.6g",
        alpha,
        report.error_bound,
        report.secrecy_bound,
    )
    return report


class AsymptoticExponents:
    """Exponential decay rates of the error and leakage bounds at fixed ``α``"""

    def __init__(
        self, alpha: float, error_terms: List[float], secrecy_terms: List[float]
    ):
        self.alpha: float = alpha

        self.error_terms: List[float] = error_terms
        """
        ``α(D_{1-α}(UVB ‖ UV ⊗ B) - (R + R1 + r))``, ``α(I_{1-α} - (R + R1))``,
        ``α(r - D_{1+α}(US ‖ U ⊗ S))`` and ``α(R1 + r - D_{1+α}(UVS ‖ UV ⊗ S))``
        """

        self.secrecy_terms: List[float] = secrecy_terms
        """
        ``α(r - D_{1+α}(US ‖ U ⊗ S))``, ``α(R1 + r - D_{1+α}(UVS ‖ UV ⊗ S))``
        and ``α(R1 - D_{1+α}(UVE ‖ V-U-E))``
        """

    @property
    def error(self) -> float:
        """exponent of the error bound, the smallest of the error terms"""
        return float(min(self.error_terms))

    @property
    def secrecy(self) -> float:
        """exponent of the leakage bound, the smallest of the secrecy terms"""
        return float(min(self.secrecy_terms))

    def as_dict(self) -> Dict:
        return {
            "alpha": self.alpha,
            "error": self.error,
            "secrecy": self.secrecy,
            "error_terms": list(self.error_terms),
            "secrecy_terms": list(self.secrecy_terms),
        }


def asymptotic_exponents(
    state: CQState, allocation: RateAllocation, alpha: float, **kwargs
) -> AsymptoticExponents:
    """
    Compute the exponents of the bounds of :py:func:`single_shot_bounds` in
    the limit of many independent copies, where the pinching constants grow
    polynomially and do not contribute. The rates are per copy. Keyword
    arguments are forwarded to :py:func:`exponent_quantities`.
    """
    q = exponent_quantities(state, alpha, **kwargs)
    R, R1, r = allocation.R, allocation.R1, allocation.r
    matching = [alpha * (r - q.outer_matching), alpha * (R1 + r - q.state_matching)]
    return AsymptoticExponents(
        alpha,
        [
            alpha * (q.decoding - (R + R1 + r)),
            alpha * (q.information - (R + R1)),
            *matching,
        ],
        [*matching, alpha * (R1 - q.leakage)],
    )


def alpha_grid(size: int = ALPHA_GRID_SIZE) -> np.ndarray:
    """``size`` equally spaced points strictly inside ``(0, 1)``"""
    if size < 1:
        raise ValueError(f"grid size must be positive, got {size}")
    return np.linspace(0.0, 1.0, size + 2)[1:-1]


def maximize_over_alpha(
    function: Callable[[float], float], grid_size: int = ALPHA_GRID_SIZE
) -> Tuple[float, float]:
    """
    Maximize ``function`` over ``α ∈ (0, 1)``: the function is evaluated on
    :py:func:`alpha_grid`, and the best grid point is refined with a golden
    section search inside its neighboring grid cells. The result is never
    worse than the best grid point.

    >>> alpha, value = maximize_over_alpha(lambda a: 0.1 - (a - 0.37) ** 2)
    >>> round(alpha, 6), round(value, 6)
    (0.37, 0.1)

    :return: the tuple ``(α*, function(α*))``
    """
    grid = alpha_grid(grid_size)
    values = np.array([function(float(alpha)) for alpha in grid])
    values = np.where(np.isnan(values), -np.inf, values)
    best = int(np.argmax(values))
    best_alpha, best_value = float(grid[best]), float(values[best])
    if not np.isfinite(best_value):
        return best_alpha, best_value

    low = grid[best - 1] if best > 0 else 0.5 * grid[0]
    high = grid[best + 1] if best < len(grid) - 1 else 0.5 * (1.0 + grid[-1])

    def negated(alpha):
        value = function(float(alpha))
        return np.inf if np.isnan(value) else -value

    try:
        if 0 < best < len(grid) - 1:
            result = scipy.optimize.minimize_scalar(
                negated, bracket=(low, best_alpha, high), method="golden"
            )
        else:
            raise ValueError("maximum on the edge of the grid")
    except ValueError:
        result = scipy.optimize.minimize_scalar(
            negated, bounds=(low, high), method="bounded"
        )

    if low <= result.x <= high and -result.fun > best_value:
        best_alpha, best_value = float(result.x), float(-result.fun)
    return best_alpha, best_value


def optimize_alpha(
    state: CQState,
    allocation: RateAllocation,
    objective: str = "error",
    grid_size: int = ALPHA_GRID_SIZE,
    **kwargs,
) -> Tuple[float, float]:
    """
    Find the ``α`` maximizing the asymptotic exponent of ``objective``, one
    of ``"error"``, ``"secrecy"`` or ``"min"`` (the smallest of the two).
    The exponent is clipped at zero: when no ``α`` gives a positive exponent,
    the smallest grid point is returned with the value ``0``.
    """
    if objective not in ("error", "secrecy", "min"):
        raise ValueError(f"unknown objective '{objective}'")

    def exponent(alpha):
        result = asymptotic_exponents(state, allocation, alpha, **kwargs)
        if objective == "error":
            return result.error
        elif objective == "secrecy":
            return result.secrecy
        return min(result.error, result.secrecy)

    alpha, value = maximize_over_alpha(exponent, grid_size)
    if not value > 0.0:
        return float(alpha_grid(grid_size)[0]), 0.0

    LOGGER.info("best %s exponent %.6g at alpha = %.6g", objective, value, alpha)
    return alpha, value
