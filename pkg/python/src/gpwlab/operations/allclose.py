import numpy as np

from ..state import DensityMatrix
from ._utils import _check_states


def allclose(
    state1: DensityMatrix,
    state2: DensityMatrix,
    rtol=1e-13,
    atol=1e-12,
) -> bool:
    """Compare two :py:class:`DensityMatrix`.

    This function returns ``True`` if the two states are defined on the same
    layout (same register names and dimensions, in the same order) and their
    matrices pass the numpy-like ``allclose`` test with the provided ``rtol``,
    and ``atol``.

    In practice this function calls :py:func:`allclose_raise`, returning
    ``True`` if no exception is rased, `False` otherwise.

    :param state1: first :py:class:`DensityMatrix`.
    :param state2: second :py:class:`DensityMatrix`.
    :param rtol: relative tolerance for ``allclose``. Default: 1e-13.
    :param atol: absolute tolerance for ``allclose``. Defaults: 1e-12.
    """
    try:
        allclose_raise(state1=state1, state2=state2, rtol=rtol, atol=atol)
        return True
    except ValueError:
        return False


def allclose_raise(
    state1: DensityMatrix,
    state2: DensityMatrix,
    rtol=1e-13,
    atol=1e-12,
):
    """
    Compare two :py:class:`DensityMatrix`, raising a ``ValueError`` if they are
    not the same.

    The message associated with the ``ValueError`` will contain more information
    on where the two states differ. See :py:func:`allclose` for more information
    on which states are considered equal.

    :param state1: first :py:class:`DensityMatrix`.
    :param state2: second :py:class:`DensityMatrix`.
    :param rtol: relative tolerance for ``allclose``. Default: 1e-13.
    :param atol: absolute tolerance for ``allclose``. Defaults: 1e-12.
    """
    _check_states(state1, state2, "allclose")

    if not np.allclose(state1.data, state2.data, rtol=rtol, atol=atol):
        difference = np.max(np.abs(state1.data - state2.data))
        raise ValueError(
            f"states on {state1.layout} are different: largest difference "
            f"between entries is {difference:.3e}"
        )
