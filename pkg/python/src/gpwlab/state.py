from typing import Iterable, Tuple, Union

import numpy as np

from .layout import RegisterLayout
from .operations import _dispatch
from .status import INPUT_ERROR, GpwlabError, LayoutMismatchError, NotHermitianError


STATE_ATOL = 1e-10
"""tolerance used when validating density matrices"""


class InvalidStateError(GpwlabError, ValueError):
    """A matrix is not positive semi-definite or has the wrong trace"""

    def __init__(self, message):
        super().__init__(message, INPUT_ERROR)


LayoutLike = Union[RegisterLayout, Iterable[Tuple[str, int]]]


def _as_layout(layout: LayoutLike) -> RegisterLayout:
    if isinstance(layout, RegisterLayout):
        return layout
    return RegisterLayout(layout)


class HermitianEig:
    """
    Eigen-decomposition ``H = V diag(λ) V^†`` of a Hermitian matrix, as
    returned by :py:func:`gpwlab.operations.eigh`. Eigenvalues are sorted in
    ascending order and the columns of ``eigenvectors`` are orthonormal.
    """

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        self.eigenvalues: np.ndarray = eigenvalues
        """real eigenvalues, in ascending order"""

        self.eigenvectors: np.ndarray = eigenvectors
        """unitary matrix with the eigenvectors as columns"""

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors

    def reconstruct(self, function=None) -> np.ndarray:
        """
        Compute ``V diag(f(λ)) V^†``. Without ``function``, this gives back the
        decomposed matrix.
        """
        values = self.eigenvalues if function is None else function(self.eigenvalues)
        return (self.eigenvectors * values) @ self.eigenvectors.conj().T


class DensityMatrix:
    """
    A :py:class:`DensityMatrix` is a positive semi-definite, Hermitian complex
    matrix of unit trace acting on the joint space of a
    :py:class:`RegisterLayout`.

    Sub-normalized matrices (trace smaller than one) can be created with
    ``normalized=False``, they are flagged by :py:attr:`normalized`.

    The data is stored as an immutable ``complex128`` numpy array. Torch
    tensors are accepted as input and converted.
    """

    def __init__(
        self,
        data,
        layout: LayoutLike,
        normalized: bool = True,
        atol: float = STATE_ATOL,
    ):
        """
        :param data: square matrix of side ``layout.total_dim``
        :param layout: registers this state is defined on
        :param normalized: should the trace be checked to be one?
        :param atol: tolerance for the hermiticity, positivity and trace checks
        """
        layout = _as_layout(layout)
        scale = max(1.0, _dispatch.max_abs(data))
        asymmetry = _dispatch.max_asymmetry(data)
        data = _dispatch.to_numpy(data)

        dim = layout.total_dim
        if data.shape != (dim, dim):
            raise LayoutMismatchError(
                f"expected a {dim}x{dim} matrix for layout {layout}, "
                f"got shape {data.shape}"
            )

        if asymmetry > atol * scale:
            raise NotHermitianError(
                f"density matrix is not Hermitian: max|ρ - ρ^†| = {asymmetry:.3e}"
            )

        data = 0.5 * (data + data.conj().T)
        eigenvalues = np.linalg.eigvalsh(data)
        largest = max(float(eigenvalues[-1]), 0.0)
        if eigenvalues[0] < -atol * max(largest, 1.0):
            raise InvalidStateError(
                "density matrix is not positive semi-definite: smallest "
                f"eigenvalue is {eigenvalues[0]:.3e}"
            )

        trace = float(np.real(np.trace(data)))
        if normalized and abs(trace - 1.0) > atol:
            raise InvalidStateError(f"density matrix trace should be 1, got {trace}")
        elif not normalized and trace > 1.0 + atol:
            raise InvalidStateError(
                f"sub-normalized density matrix trace should be at most 1, got {trace}"
            )

        data.flags["WRITEABLE"] = False
        self._data = data
        self._layout = layout
        self._normalized = normalized
        self._eig = None

    @staticmethod
    def from_pure(vector, layout: LayoutLike) -> "DensityMatrix":
        """Create the state ``|ψ⟩⟨ψ|`` from a (possibly unnormalized) vector"""
        vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidStateError("can not create a pure state from a zero vector")
        vector = vector / norm
        return DensityMatrix(np.outer(vector, vector.conj()), layout)

    @staticmethod
    def from_diagonal(probabilities, layout: LayoutLike) -> "DensityMatrix":
        """Create a state diagonal in the computational basis"""
        probabilities = np.asarray(probabilities, dtype=np.float64).reshape(-1)
        return DensityMatrix(np.diag(probabilities).astype(np.complex128), layout)

    @staticmethod
    def maximally_mixed(layout: LayoutLike) -> "DensityMatrix":
        """Create the state ``I/d`` on the given layout"""
        layout = _as_layout(layout)
        dim = layout.total_dim
        return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim, layout)

    @property
    def data(self) -> np.ndarray:
        """read-only matrix representation of this state"""
        return self._data

    @property
    def layout(self) -> RegisterLayout:
        """registers this state acts on"""
        return self._layout

    @property
    def dim(self) -> int:
        """dimension of the Hilbert space of this state"""
        return self._data.shape[0]

    @property
    def normalized(self) -> bool:
        """``False`` for states created as sub-normalized"""
        return self._normalized

    @property
    def trace(self) -> float:
        """trace of this state"""
        return float(np.real(np.trace(self._data)))

    def eig(self) -> HermitianEig:
        """Cached eigen-decomposition of this state"""
        if self._eig is None:
            from .operations import eigh

            self._eig = eigh(self._data)
        return self._eig

    def ptrace(self, keep) -> "DensityMatrix":
        """Partial trace, keeping the registers in ``keep``"""
        from .operations import partial_trace

        return partial_trace(self, keep)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        """Tensor product of this state with ``other``"""
        from .operations import tensor

        return tensor(self, other)

    def __repr__(self) -> str:
        kind = "DensityMatrix" if self._normalized else "DensityMatrix (sub-normalized)"
        return f"{kind} on {self._layout}"
