import numpy as np

from ..state import DensityMatrix
from ._utils import _check_states
from .linalg import mat_pow, trace_norm


def fidelity(first: DensityMatrix, second: DensityMatrix) -> float:
    """
    Fidelity between two states,

    .. math::

        F(ρ, σ) = \\| \\sqrt{ρ} \\sqrt{σ} \\|_1,

    clipped to :math:`[0, 1]`. This function is symmetric in its arguments.

    :param first: first :py:class:`DensityMatrix`
    :param second: second :py:class:`DensityMatrix`, on the same layout
    """
    _check_states(first, second, "fidelity")
    value = trace_norm(mat_pow(first, 0.5) @ mat_pow(second, 0.5))
    return float(np.clip(value, 0.0, 1.0))


def purified_distance(first: DensityMatrix, second: DensityMatrix) -> float:
    """
    Purified distance between two states, :math:`P(ρ, σ) = \\sqrt{1 - F(ρ, σ)^2}`.

    :param first: first :py:class:`DensityMatrix`
    :param second: second :py:class:`DensityMatrix`, on the same layout
    """
    value = fidelity(first, second)
    return float(np.sqrt(max(1.0 - value * value, 0.0)))
