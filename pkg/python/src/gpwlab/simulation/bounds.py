import logging
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from ..cq import CQState, SideInfoSetup
from ..exponents import single_shot_bounds
from ..pinching import pinching_constants
from ..rates import RateAllocation


LOGGER = logging.getLogger(__name__)

BOUND_ALPHAS = tuple(np.round(np.arange(1, 10) / 10, 1))
"""values of ``α`` where the bounds of the simulated codes are evaluated"""


def evaluation_state(source: Union[SideInfoSetup, CQState]) -> CQState:
    """Get the state over ``(U, V; B, E, S)`` of a setup, or the state itself"""
    if isinstance(source, SideInfoSetup):
        return source.evaluation_state()
    elif isinstance(source, CQState):
        return source
    raise TypeError(f"expected a SideInfoSetup or a CQState, got {type(source)}")


class CodebookBounds:
    """
    Smallest average error and leakage bounds of codes with integer rates,
    over a grid of ``α``.
    """

    def __init__(self, error: Tuple[float, float], secrecy: Tuple[float, float]):
        self.error: float = error[1]
        """bound on the average error"""
        self.error_alpha: float = error[0]
        """``α`` giving the error bound"""
        self.secrecy: float = secrecy[1]
        """bound on the average squared purified distance of the leakage"""
        self.secrecy_alpha: float = secrecy[0]

    def as_dict(self) -> Dict[str, float]:
        return {
            "error_bound": self.error,
            "error_alpha": self.error_alpha,
            "secrecy_bound": self.secrecy,
            "secrecy_alpha": self.secrecy_alpha,
        }


def codebook_bounds(
    state: CQState,
    rates: Tuple[int, int, int],
    alphas: Sequence[float] = BOUND_ALPHAS,
) -> CodebookBounds:
    """
    Evaluate the average error and leakage bounds of
    :py:class:`gpwlab.exponents.ExponentReport` for the rates ``(R, R1, r)``
    at every ``α`` in ``alphas``, and keep the smallest of each. Every ``α``
    gives a valid bound.

    :param state: cq state over ``(U, V; B, E, S)``
    """
    if len(alphas) == 0:
        raise ValueError("at least one value of alpha is needed")

    allocation = RateAllocation(*rates)
    constants = pinching_constants(state)

    error = (np.nan, np.inf)
    secrecy = (np.nan, np.inf)
    for alpha in alphas:
        report = single_shot_bounds(state, allocation, alpha, constants=constants)
        if report.error_bound < error[1]:
            error = (float(alpha), report.error_bound)
        if report.secrecy_bound < secrecy[1]:
            secrecy = (float(alpha), report.secrecy_bound)

    bounds = CodebookBounds(error, secrecy)
    LOGGER.debug("codebook bounds for rates %s: %s", rates, bounds.as_dict())
    return bounds
