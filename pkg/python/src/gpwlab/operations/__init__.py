from .allclose import allclose, allclose_raise  # noqa
from .fidelity import fidelity, purified_distance  # noqa
from .linalg import (  # noqa
    eigh,
    mat_pow,
    max_eigenvalue,
    min_eigenvalue,
    projector_geq,
    support_projector,
    trace_norm,
)
from .partial_trace import partial_trace, partial_trace_array  # noqa
from .tensor import reorder_registers, tensor  # noqa


__all__ = [
    "allclose",
    "allclose_raise",
    "eigh",
    "fidelity",
    "mat_pow",
    "max_eigenvalue",
    "min_eigenvalue",
    "partial_trace",
    "partial_trace_array",
    "projector_geq",
    "purified_distance",
    "reorder_registers",
    "support_projector",
    "tensor",
    "trace_norm",
]
