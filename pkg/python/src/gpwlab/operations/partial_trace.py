from typing import Iterable, Sequence, Union

import numpy as np

from ..layout import RegisterLayout
from ..state import DensityMatrix
from ..status import LayoutMismatchError


def partial_trace(
    state: DensityMatrix, keep: Union[str, Iterable[str]]
) -> DensityMatrix:
    """
    Trace out all registers of ``state`` except the ones in ``keep``. The
    registers of the result are in the same order as in ``state.layout``.

    :param state: :py:class:`DensityMatrix` to reduce
    :param keep: names of the registers to keep
    """
    layout = state.layout.subset(keep)
    data = partial_trace_array(state.data, state.layout, layout.names)
    return DensityMatrix(data, layout, normalized=state.normalized)


def partial_trace_array(
    matrix: np.ndarray, layout: RegisterLayout, keep: Sequence[str]
) -> np.ndarray:
    """
    Partial trace of an arbitrary operator ``matrix`` acting on ``layout``,
    keeping the registers in ``keep``.
    """
    dims = layout.dims
    if matrix.shape != (layout.total_dim, layout.total_dim):
        raise LayoutMismatchError(
            f"operator of shape {matrix.shape} does not act on {layout}"
        )

    kept = layout.subset(keep)
    if kept == layout:
        return np.array(matrix, dtype=np.complex128)

    n = len(dims)
    tensor = np.asarray(matrix).reshape(dims + dims)

    # axis i is the row index of register i, axis n + i the column index;
    # traced registers share the same label for row and column
    in_axes = list(range(n))
    for i, name in enumerate(layout.names):
        in_axes.append(n + i if name in kept else i)

    out_axes = [i for i, name in enumerate(layout.names) if name in kept]
    out_axes += [n + i for i in out_axes]

    reduced = np.einsum(tensor, in_axes, out_axes)
    dim = kept.total_dim
    return np.asarray(reduced, dtype=np.complex128).reshape(dim, dim)
