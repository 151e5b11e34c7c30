from ..state import DensityMatrix
from ..status import LayoutMismatchError


def _unwrap(value):
    """Get the matrix inside a :py:class:`DensityMatrix`, or the value itself"""
    if isinstance(value, DensityMatrix):
        return value.data
    return value


def _check_square(matrix, fname: str):
    shape = tuple(matrix.shape)
    if len(shape) != 2 or shape[0] != shape[1]:
        raise LayoutMismatchError(
            f"input to '{fname}' should be a square matrix, got shape {shape}"
        )


def _check_states(a: DensityMatrix, b: DensityMatrix, fname: str):
    """Check that two states can be compared by an operation.

    :param a: first :py:class:`DensityMatrix` for check
    :param b: second :py:class:`DensityMatrix` for check
    """
    if not isinstance(a, DensityMatrix) or not isinstance(b, DensityMatrix):
        raise TypeError(
            f"inputs to '{fname}' should be DensityMatrix, "
            f"got {type(a)} and {type(b)}"
        )

    if a.layout != b.layout:
        raise LayoutMismatchError(
            f"inputs to '{fname}' should have the same layout. "
            f"Got {a.layout} and {b.layout}."
        )
