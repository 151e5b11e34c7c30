import numpy as np


try:
    import torch
    from torch import Tensor as TorchTensor
except ImportError:

    class TorchTensor:
        pass


UNKNOWN_ARRAY_TYPE = (
    "unknown array type, only numpy arrays and torch tensors are supported"
)


def to_numpy(array) -> np.ndarray:
    """Get a complex128 numpy copy of the given matrix."""
    if isinstance(array, np.ndarray):
        return np.array(array, dtype=np.complex128)
    elif isinstance(array, TorchTensor):
        return array.detach().cpu().numpy().astype(np.complex128)
    else:
        raise TypeError(UNKNOWN_ARRAY_TYPE)


def max_asymmetry(array) -> float:
    """Largest entry of ``|A - A^†|``, used to check hermiticity."""
    if isinstance(array, np.ndarray):
        return float(np.max(np.abs(array - array.conj().T), initial=0.0))
    elif isinstance(array, TorchTensor):
        if array.numel() == 0:
            return 0.0
        return float(torch.max(torch.abs(array - array.conj().T)))
    else:
        raise TypeError(UNKNOWN_ARRAY_TYPE)


def max_abs(array) -> float:
    """Largest absolute value of the entries of ``array``."""
    if isinstance(array, np.ndarray):
        return float(np.max(np.abs(array), initial=0.0))
    elif isinstance(array, TorchTensor):
        if array.numel() == 0:
            return 0.0
        return float(torch.max(torch.abs(array)))
    else:
        raise TypeError(UNKNOWN_ARRAY_TYPE)


def eigh(array):
    """
    Eigen-decomposition of a Hermitian matrix, as ``(eigenvalues,
    eigenvectors)`` numpy arrays with eigenvalues in ascending order.

    This function has the same behavior as ``np.linalg.eigh(array)``; torch
    results are converted to numpy.
    """
    if isinstance(array, np.ndarray):
        return np.linalg.eigh(array)
    elif isinstance(array, TorchTensor):
        values, vectors = torch.linalg.eigh(array.to(torch.complex128))
        return values.detach().cpu().numpy(), vectors.detach().cpu().numpy()
    else:
        raise TypeError(UNKNOWN_ARRAY_TYPE)


def svdvals(array) -> np.ndarray:
    """
    Singular values of a matrix, as a numpy array.

    This function has the same behavior as
    ``np.linalg.svd(array, compute_uv=False)``.
    """
    if isinstance(array, np.ndarray):
        return np.linalg.svd(array, compute_uv=False)
    elif isinstance(array, TorchTensor):
        return torch.linalg.svdvals(array).detach().cpu().numpy()
    else:
        raise TypeError(UNKNOWN_ARRAY_TYPE)
