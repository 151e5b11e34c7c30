from typing import Sequence, Tuple

import numpy as np

from ..layout import RegisterLayout
from ..state import DensityMatrix
from ..status import LayoutMismatchError


def tensor(first: DensityMatrix, second: DensityMatrix) -> DensityMatrix:
    """
    Tensor product ``ρ ⊗ σ`` of two states acting on different registers. The
    layout of the result contains the registers of ``first`` followed by the
    ones of ``second``.
    """
    common = set(first.layout.names) & set(second.layout.names)
    if common:
        raise LayoutMismatchError(
            f"can not take the tensor product of states sharing registers {common}"
        )

    layout = first.layout.concat(second.layout)
    return DensityMatrix(
        np.kron(first.data, second.data),
        layout,
        normalized=first.normalized and second.normalized,
    )


def reorder_registers(
    matrix: np.ndarray, layout: RegisterLayout, order: Sequence[str]
) -> Tuple[np.ndarray, RegisterLayout]:
    """
    Permute the tensor factors of an operator acting on ``layout`` so that the
    registers appear in ``order``.

    :return: the permuted matrix and the corresponding layout
    """
    if sorted(order) != sorted(layout.names):
        raise LayoutMismatchError(
            f"new order {list(order)} is not a permutation of {layout.names}"
        )

    permutation = [layout.index(name) for name in order]
    new_layout = RegisterLayout([(name, layout.dim(name)) for name in order])

    n = len(layout)
    if n == 0:
        return np.array(matrix, dtype=np.complex128), new_layout

    tensor = np.asarray(matrix).reshape(layout.dims + layout.dims)
    tensor = tensor.transpose(permutation + [n + i for i in permutation])
    dim = layout.total_dim
    return np.ascontiguousarray(tensor).reshape(dim, dim), new_layout
