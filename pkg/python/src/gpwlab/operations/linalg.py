import logging

import numpy as np
import scipy.linalg

from ..state import HermitianEig
from ..status import NotHermitianError
from . import _dispatch
from ._utils import _check_square, _unwrap


LOGGER = logging.getLogger(__name__)

HERMITIAN_ATOL = 1e-10
"""tolerance on ``max|H - H^†|``, relative to the largest entry of ``H``"""

DEGENERACY_RTOL = 1e-10
"""eigenvalues closer than this (relative to the spectral radius) are degenerate"""

RANK_RTOL = 1e-12
"""eigenvalues below ``RANK_RTOL * λ_max`` are outside of the support"""

PROJECTOR_ATOL = 1e-12
"""eigenvalues of ``A - B`` above ``-PROJECTOR_ATOL`` belong to ``{A ≥ B}``"""


def eigh(matrix, atol: float = HERMITIAN_ATOL) -> HermitianEig:
    """
    Eigen-decomposition of a Hermitian matrix.

    Eigenvalues are returned in ascending order. The eigenvectors are made
    deterministic: inside each degenerate eigenspace, the basis is replaced by
    the Q factor of a pivoted QR decomposition of the eigenspace projector,
    with positive diagonal in R; non-degenerate eigenvectors have their
    largest component real and positive.

    :param matrix: Hermitian matrix, as a :py:class:`DensityMatrix`, a numpy
        array or a torch tensor
    :param atol: tolerance of the hermiticity check, relative to the largest
        entry of ``matrix``
    """
    matrix = _unwrap(matrix)
    _check_square(matrix, "eigh")

    scale = max(1.0, _dispatch.max_abs(matrix))
    asymmetry = _dispatch.max_asymmetry(matrix)
    if asymmetry > atol * scale:
        raise NotHermitianError(
            f"matrix is not Hermitian: max|H - H^†| = {asymmetry:.3e}"
        )

    matrix = 0.5 * (matrix + matrix.conj().T)
    values, vectors = _dispatch.eigh(matrix)
    values = np.asarray(values, dtype=np.float64)
    vectors = np.array(vectors, dtype=np.complex128)

    for start, stop in _clusters(values, DEGENERACY_RTOL):
        if stop - start == 1:
            column = vectors[:, start]
            largest = column[np.argmax(np.abs(column))]
            if largest != 0:
                vectors[:, start] = column * (abs(largest) / largest)
        else:
            vectors[:, start:stop] = _canonical_basis(vectors[:, start:stop])

    return HermitianEig(values, vectors)


def _clusters(values: np.ndarray, rtol: float):
    """Group sorted ``values`` into runs separated by gaps larger than tolerance"""
    if len(values) == 0:
        return []

    scale = max(float(np.max(np.abs(values))), np.finfo(np.float64).tiny)
    gaps = np.diff(values) > rtol * scale
    boundaries = [0] + list(np.nonzero(gaps)[0] + 1) + [len(values)]
    return list(zip(boundaries[:-1], boundaries[1:]))


def _canonical_basis(block: np.ndarray) -> np.ndarray:
    projector = block @ block.conj().T
    q, r, _ = scipy.linalg.qr(projector, pivoting=True)

    size = block.shape[1]
    diagonal = np.diag(r)[:size]
    phases = np.ones(size, dtype=np.complex128)
    nonzero = np.abs(diagonal) > 0
    phases[nonzero] = np.abs(diagonal[nonzero]) / diagonal[nonzero]
    return q[:, :size] * phases.conj()


def mat_pow(matrix, power: float, rank_rtol: float = RANK_RTOL) -> np.ndarray:
    """
    Power of a positive semi-definite matrix, ``U f(λ) U^†`` with
    ``f(λ) = λ^p`` on the support and ``f(λ) = 0`` elsewhere.

    For negative ``power`` this is the pseudo-power on the support; in
    particular ``power = 0`` gives the projector on the support. Eigenvalues
    below ``rank_rtol * λ_max`` (including small negative eigenvalues coming
    from round-off) are treated as zero.

    >>> import numpy as np
    >>> np.allclose(mat_pow(np.diag([4.0, 9.0]), 0.5), np.diag([2.0, 3.0]))
    True

    :param matrix: positive semi-definite matrix or :py:class:`DensityMatrix`
    :param power: exponent ``p``
    :param rank_rtol: relative rank tolerance
    """
    values, vectors = eigh(matrix)
    if len(values) == 0:
        return np.zeros((0, 0), dtype=np.complex128)

    largest = max(float(values[-1]), 0.0)
    if values[0] < 0:
        LOGGER.debug("clamping negative eigenvalue %.3e to zero", values[0])

    support = values > rank_rtol * largest
    if largest == 0.0:
        support[:] = False

    transformed = np.zeros_like(values)
    transformed[support] = values[support] ** power
    return (vectors * transformed) @ vectors.conj().T


def support_projector(matrix, rank_rtol: float = RANK_RTOL) -> np.ndarray:
    """Projector on the support of a positive semi-definite matrix"""
    return mat_pow(matrix, 0.0, rank_rtol=rank_rtol)


def trace_norm(matrix) -> float:
    """
    Trace norm ``‖X‖₁``, i.e. the sum of the singular values of ``X``.

    :param matrix: square complex matrix (numpy, torch or
        :py:class:`DensityMatrix`)
    """
    matrix = _unwrap(matrix)
    _check_square(matrix, "trace_norm")
    return float(np.sum(_dispatch.svdvals(matrix)))


def projector_geq(first, second, atol: float = PROJECTOR_ATOL) -> np.ndarray:
    """
    Spectral projector ``{A ≥ B}``: the sum of the eigenprojectors of ``A - B``
    associated with non-negative eigenvalues. Eigenvalues within ``atol`` of
    zero are included.

    :param first: Hermitian matrix ``A``
    :param second: Hermitian matrix ``B``
    :param atol: absolute tolerance around zero
    """
    difference = np.asarray(_unwrap(first)) - np.asarray(_unwrap(second))
    values, vectors = eigh(difference)
    kept = vectors[:, values >= -atol]
    return kept @ kept.conj().T


def min_eigenvalue(matrix) -> float:
    """Smallest eigenvalue of a Hermitian matrix"""
    matrix = np.asarray(_unwrap(matrix))
    _check_square(matrix, "min_eigenvalue")
    if matrix.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0])


def max_eigenvalue(matrix) -> float:
    """Largest eigenvalue of a Hermitian matrix"""
    matrix = np.asarray(_unwrap(matrix))
    _check_square(matrix, "max_eigenvalue")
    if matrix.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[-1])
